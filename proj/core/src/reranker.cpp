#include "specrag/reranker.hpp"

#include "specrag/error.hpp"
#include "specrag/http_client.hpp"
#include "specrag/text.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace specrag {

void validate(const RerankConfig& config) {
    if (config.top_m == 0 || config.candidates_k == 0) {
        raise(ErrorCode::InvalidConfig, "top_m and candidates_k must be positive");
    }
    if (config.top_m > config.candidates_k) {
        raise(ErrorCode::InvalidConfig, "top_m must not exceed candidates_k");
    }
    if (config.scorer == ScorerKind::Http && config.endpoint.empty()) {
        raise(ErrorCode::InvalidConfig, "HTTP scorer requires an endpoint");
    }
}

double RelevanceScorer::score_pair(const std::string& query, const std::string& text) {
    if (query.empty() || text.empty()) {
        raise(ErrorCode::EmptyText, "score_pair requires non-empty query and text");
    }
    return score(query, {text}).front();
}

std::vector<double> bm25_scores(const std::string& query, const std::vector<std::string>& texts,
                                double k1, double b) {
    const auto query_tokens = lower_tokens(query);
    std::vector<std::string> query_terms;
    {
        std::unordered_set<std::string> seen;
        for (const auto& t : query_tokens) {
            if (seen.insert(t).second) query_terms.push_back(t);
        }
    }

    std::vector<std::unordered_map<std::string, std::size_t>> term_freq(texts.size());
    std::vector<double> doc_len(texts.size(), 0.0);
    double total_len = 0.0;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        for (const auto& t : lower_tokens(texts[i])) {
            ++term_freq[i][t];
            doc_len[i] += 1.0;
        }
        total_len += doc_len[i];
    }
    const double avgdl = texts.empty() ? 0.0 : total_len / static_cast<double>(texts.size());

    std::unordered_map<std::string, double> idf;
    for (const auto& term : query_terms) {
        std::size_t df = 0;
        for (const auto& freqs : term_freq) {
            if (freqs.count(term)) ++df;
        }
        const double n = static_cast<double>(texts.size());
        idf[term] = std::log(1.0 + (n - static_cast<double>(df) + 0.5) /
                                       (static_cast<double>(df) + 0.5));
    }

    std::vector<double> scores(texts.size(), 0.0);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (doc_len[i] == 0.0) continue;
        const double norm = k1 * (1.0 - b + b * (avgdl > 0.0 ? doc_len[i] / avgdl : 1.0));
        for (const auto& term : query_terms) {
            const auto it = term_freq[i].find(term);
            if (it == term_freq[i].end()) continue;
            const double tf = static_cast<double>(it->second);
            scores[i] += idf[term] * tf * (k1 + 1.0) / (tf + norm);
        }
    }
    return scores;
}

std::vector<double> LexicalScorer::score(const std::string& query,
                                         const std::vector<std::string>& texts) {
    return bm25_scores(query, texts);
}

HttpScorer::HttpScorer(std::string endpoint, std::size_t timeout_ms)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {
    if (endpoint_.empty()) raise(ErrorCode::InvalidConfig, "HTTP scorer requires an endpoint");
}

std::vector<double> HttpScorer::score(const std::string& query,
                                      const std::vector<std::string>& texts) {
    nlohmann::json request;
    request["query"] = query;
    request["texts"] = texts;
    const HttpReply reply = http_post_json(endpoint_, "/score", request.dump(), timeout_ms_);

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(reply.body);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::MalformedResponse,
              "score response is not JSON: " + std::string(e.what()) + reply.tag());
    }
    if (!parsed.contains("scores") || !parsed["scores"].is_array() ||
        parsed["scores"].size() != texts.size()) {
        raise(ErrorCode::MalformedResponse,
              "score response missing a scores array of matching length" + reply.tag());
    }
    std::vector<double> scores;
    scores.reserve(texts.size());
    for (const auto& v : parsed["scores"]) {
        if (!v.is_number()) {
            raise(ErrorCode::MalformedResponse, "non-numeric score in response" + reply.tag());
        }
        scores.push_back(v.get<double>());
    }
    return scores;
}

std::unique_ptr<RelevanceScorer> make_scorer(const RerankConfig& config) {
    if (config.scorer == ScorerKind::Http) {
        return std::make_unique<HttpScorer>(config.endpoint, config.timeout_ms);
    }
    return std::make_unique<LexicalScorer>();
}

std::vector<ScoredChunk> rerank(const std::string& query, std::vector<ScoredChunk> candidates,
                                const RerankConfig& config, RelevanceScorer& scorer) {
    validate(config);
    if (candidates.empty()) return {};

    std::vector<std::string> texts;
    texts.reserve(candidates.size());
    for (const auto& c : candidates) texts.push_back(c.chunk.text);

    const auto scores = scorer.score(query, texts);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        candidates[i].rerank_score = scores[i];
    }
    std::sort(candidates.begin(), candidates.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
        if (a.rerank_score != b.rerank_score) return a.rerank_score > b.rerank_score;
        return a.retrieval_rank < b.retrieval_rank;
    });
    if (candidates.size() > config.top_m) candidates.resize(config.top_m);
    return candidates;
}

} // namespace specrag
