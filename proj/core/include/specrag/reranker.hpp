#pragma once

#include "specrag/chunker.hpp"

#include <memory>
#include <string>
#include <vector>

namespace specrag {

struct ScoredChunk {
    Chunk chunk;
    std::size_t retrieval_rank = 0;    // 0-based rank from VectorIndex::top_k
    double retrieval_similarity = 0.0;
    double rerank_score = 0.0;
};

enum class ScorerKind { Lexical, Http };

struct RerankConfig {
    ScorerKind scorer = ScorerKind::Lexical;
    std::size_t top_m = 15;        // chunks kept after re-ranking
    std::size_t candidates_k = 150; // retrieval fan-in
    std::string endpoint;
    std::size_t timeout_ms = 10000;
};

void validate(const RerankConfig& config);

/// Query-text relevance contract. One batched call scores a whole candidate
/// list; only score ORDER is meaningful, never magnitude.
class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;
    virtual std::vector<double> score(const std::string& query,
                                      const std::vector<std::string>& texts) = 0;

    double score_pair(const std::string& query, const std::string& text);
};

/// BM25 scores (k1, b) for each text against the query. IDF and average
/// document length are computed over the given batch itself, so the result is
/// a pure function of (query, texts). The smoothed IDF variant
/// ln(1 + (N - df + 0.5)/(df + 0.5)) keeps scores non-negative.
std::vector<double> bm25_scores(const std::string& query, const std::vector<std::string>& texts,
                                double k1 = 1.2, double b = 0.75);

class LexicalScorer final : public RelevanceScorer {
public:
    std::vector<double> score(const std::string& query,
                              const std::vector<std::string>& texts) override;
};

/// POST {endpoint}/score  {"query": ..., "texts": [...]} -> {"scores": [...]}
class HttpScorer final : public RelevanceScorer {
public:
    HttpScorer(std::string endpoint, std::size_t timeout_ms = 10000);
    std::vector<double> score(const std::string& query,
                              const std::vector<std::string>& texts) override;

private:
    std::string endpoint_;
    std::size_t timeout_ms_;
};

std::unique_ptr<RelevanceScorer> make_scorer(const RerankConfig& config);

/// Reorders candidates by scorer relevance, descending, ties broken by
/// retrieval rank ascending, and keeps the top_m. Empty input stays empty.
std::vector<ScoredChunk> rerank(const std::string& query, std::vector<ScoredChunk> candidates,
                                const RerankConfig& config, RelevanceScorer& scorer);

} // namespace specrag
