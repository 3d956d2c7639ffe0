#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace specrag {

/// Unit-norm dense vector. Values are float32 so that index persistence
/// round-trips bit-exactly.
struct EmbeddingVector {
    std::vector<float> values;

    std::size_t dims() const noexcept { return values.size(); }
    double norm() const;
};

enum class EmbedderProvider { Deterministic, Http };

struct EmbedderConfig {
    EmbedderProvider provider = EmbedderProvider::Deterministic;
    std::size_t dims = 384;
    std::string endpoint;              // required iff provider == Http
    std::size_t batch_size = 32;
    std::size_t timeout_ms = 10000;
    std::size_t max_in_flight = 4;     // concurrent batches for the HTTP provider
};

/// Provider contract. Implementations must return one unit-norm vector per
/// input text, order-preserving, all of the same dimension.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dims() const = 0;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;

    EmbeddingVector embed_one(const std::string& text);
};

/// Hash-bag embedding used for reproducible offline runs: each lowercase
/// whitespace token selects a coordinate and a sign via the stable 64-bit
/// hash; accumulated contributions are L2-normalized. Texts sharing more
/// tokens land closer in cosine space. A token list that is empty after
/// stopword filtering falls back to hashing the raw string.
EmbeddingVector deterministic_embed(std::string_view text, std::size_t dims);

class DeterministicEmbedder final : public Embedder {
public:
    explicit DeterministicEmbedder(std::size_t dims = 384);

    std::size_t dims() const override { return dims_; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    std::size_t dims_;
};

/// Client for an external embedding service:
///   POST {endpoint}/embed   {"texts": [...]}  ->  {"vectors": [[...], ...]}
/// Non-unit responses are normalized client-side. Requests are batched by
/// config.batch_size with at most config.max_in_flight batches outstanding.
class HttpEmbedder final : public Embedder {
public:
    explicit HttpEmbedder(EmbedderConfig config);

    std::size_t dims() const override { return config_.dims; }
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    EmbedderConfig config_;
};

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

/// Dot product of unit-norm inputs, clamped to [-1, 1].
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

} // namespace specrag
