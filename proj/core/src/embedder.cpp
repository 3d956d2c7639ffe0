#include "specrag/embedder.hpp"

#include "specrag/error.hpp"
#include "specrag/http_client.hpp"
#include "specrag/stable_hash.hpp"
#include "specrag/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>

#include <json.hpp>

namespace specrag {

namespace {

// Small fixed stopword set; filtering happens before hashing so that filler
// words do not dominate short technical sentences.
bool is_stopword(const std::string& token) {
    static const std::array<const char*, 16> kStopwords = {
        "a", "an", "the", "of", "to", "in", "and", "or",
        "is", "are", "be", "on", "for", "with", "as", "by",
    };
    return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end();
}

EmbeddingVector normalize_to_unit(std::vector<double> acc) {
    double sq = 0.0;
    for (double v : acc) sq += v * v;
    const double norm = std::sqrt(sq);
    EmbeddingVector out;
    out.values.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        out.values[i] = static_cast<float>(acc[i] / norm);
    }
    return out;
}

void add_token(std::vector<double>& acc, const std::string& token) {
    const std::uint64_t h = stable_hash64(token);
    const std::size_t idx = static_cast<std::size_t>(h % acc.size());
    const double sign = (h >> 63) ? -1.0 : 1.0;
    acc[idx] += sign;
}

} // namespace

double EmbeddingVector::norm() const {
    double sq = 0.0;
    for (float v : values) sq += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(sq);
}

EmbeddingVector Embedder::embed_one(const std::string& text) {
    return embed({text}).front();
}

EmbeddingVector deterministic_embed(std::string_view text, std::size_t dims) {
    if (dims < 8) {
        raise(ErrorCode::InvalidConfig, "embedding dims must be >= 8, got " + std::to_string(dims));
    }
    std::vector<double> acc(dims, 0.0);
    for (const auto& token : lower_tokens(text)) {
        if (is_stopword(token)) continue;
        add_token(acc, token);
    }
    // All-stopword input, or contributions that cancelled exactly: hash the
    // raw string instead so the result is always a valid unit vector.
    if (std::all_of(acc.begin(), acc.end(), [](double v) { return v == 0.0; })) {
        const std::uint64_t h = stable_hash64(text);
        acc[static_cast<std::size_t>(h % dims)] = (h >> 63) ? -1.0 : 1.0;
    }
    return normalize_to_unit(std::move(acc));
}

DeterministicEmbedder::DeterministicEmbedder(std::size_t dims) : dims_(dims) {
    if (dims < 8) {
        raise(ErrorCode::InvalidConfig, "embedding dims must be >= 8, got " + std::to_string(dims));
    }
}

std::vector<EmbeddingVector> DeterministicEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        if (text.empty()) {
            raise(ErrorCode::EmptyText, "cannot embed an empty text");
        }
        out.push_back(deterministic_embed(text, dims_));
    }
    return out;
}

HttpEmbedder::HttpEmbedder(EmbedderConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) {
        raise(ErrorCode::InvalidConfig, "HTTP embedder requires an endpoint");
    }
    if (config_.dims < 8) {
        raise(ErrorCode::InvalidConfig, "embedding dims must be >= 8");
    }
    if (config_.batch_size == 0 || config_.max_in_flight == 0) {
        raise(ErrorCode::InvalidConfig, "batch_size and max_in_flight must be positive");
    }
}

std::vector<EmbeddingVector> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    for (const auto& text : texts) {
        if (text.empty()) raise(ErrorCode::EmptyText, "cannot embed an empty text");
    }

    const std::size_t n = texts.size();
    std::vector<EmbeddingVector> out(n);

    auto run_batch = [this, &texts, &out](std::size_t begin, std::size_t end) {
        nlohmann::json request;
        request["texts"] = nlohmann::json::array();
        for (std::size_t i = begin; i < end; ++i) request["texts"].push_back(texts[i]);

        const HttpReply reply =
            http_post_json(config_.endpoint, "/embed", request.dump(), config_.timeout_ms);

        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(reply.body);
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::MalformedResponse,
                  "embed response is not JSON: " + std::string(e.what()) + reply.tag());
        }
        if (!parsed.contains("vectors") || !parsed["vectors"].is_array() ||
            parsed["vectors"].size() != end - begin) {
            raise(ErrorCode::MalformedResponse,
                  "embed response missing a vectors array of matching length" + reply.tag());
        }
        for (std::size_t i = begin; i < end; ++i) {
            const auto& row = parsed["vectors"][i - begin];
            if (!row.is_array() || row.size() != config_.dims) {
                raise(ErrorCode::MalformedResponse,
                      "embed response vector has wrong dimension at position " +
                          std::to_string(i) + reply.tag());
            }
            std::vector<double> acc(config_.dims);
            for (std::size_t d = 0; d < config_.dims; ++d) {
                if (!row[d].is_number()) {
                    raise(ErrorCode::MalformedResponse,
                          "embed response contains a non-numeric value" + reply.tag());
                }
                acc[d] = row[d].get<double>();
            }
            double sq = 0.0;
            for (double v : acc) sq += v * v;
            if (sq == 0.0) {
                raise(ErrorCode::MalformedResponse,
                      "embed response contains a zero vector" + reply.tag());
            }
            out[i] = normalize_to_unit(std::move(acc));
        }
    };

    // Bounded fan-out over batches; results land in place so order is kept.
    std::vector<std::pair<std::size_t, std::size_t>> batches;
    for (std::size_t begin = 0; begin < n; begin += config_.batch_size) {
        batches.emplace_back(begin, std::min(begin + config_.batch_size, n));
    }
    std::size_t next = 0;
    while (next < batches.size()) {
        std::vector<std::future<void>> in_flight;
        for (std::size_t j = 0; j < config_.max_in_flight && next < batches.size(); ++j, ++next) {
            auto [b, e] = batches[next];
            in_flight.push_back(std::async(std::launch::async, run_batch, b, e));
        }
        for (auto& f : in_flight) f.get();
    }
    return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
    if (config.provider == EmbedderProvider::Http) {
        return std::make_unique<HttpEmbedder>(config);
    }
    return std::make_unique<DeterministicEmbedder>(config.dims);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dims() != b.dims()) {
        raise(ErrorCode::DimensionMismatch,
              "cosine over " + std::to_string(a.dims()) + " vs " + std::to_string(b.dims()) + " dims");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
    }
    return std::clamp(dot, -1.0, 1.0);
}

} // namespace specrag
