#include "specrag/reranker.hpp"
#include "specrag/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace specrag;

namespace {

ScoredChunk candidate(std::string id, std::string text, std::size_t rank) {
    ScoredChunk sc;
    sc.chunk.doc_id = "doc";
    sc.chunk.chunk_id = std::move(id);
    sc.chunk.text = std::move(text);
    sc.retrieval_rank = rank;
    sc.retrieval_similarity = 1.0 - 0.001 * static_cast<double>(rank);
    return sc;
}

// Scales every score by a positive constant; order must be unaffected.
class ScalingScorer final : public RelevanceScorer {
public:
    ScalingScorer(RelevanceScorer& inner, double factor) : inner_(inner), factor_(factor) {}
    std::vector<double> score(const std::string& query,
                              const std::vector<std::string>& texts) override {
        auto scores = inner_.score(query, texts);
        for (auto& s : scores) s *= factor_;
        return scores;
    }

private:
    RelevanceScorer& inner_;
    double factor_;
};

class ConstantScorer final : public RelevanceScorer {
public:
    std::vector<double> score(const std::string&, const std::vector<std::string>& texts) override {
        return std::vector<double>(texts.size(), 0.5);
    }
};

} // namespace

TEST_CASE("score_pair: self match dominates partial overlaps") {
    LexicalScorer scorer;
    const std::string query = "nr handover measurement report";
    const std::vector<std::string> texts = {
        query,
        "nr cell configuration parameters and timers",
        "handover only mentioned once among many unrelated tokens here",
        "totally disjoint billing ledger invoice",
    };
    const auto scores = scorer.score(query, texts);
    for (std::size_t i = 1; i < scores.size(); ++i) {
        CHECK(scores[0] > scores[i]);
    }
}

TEST_CASE("score_pair: zero token overlap scores zero") {
    LexicalScorer scorer;
    CHECK(scorer.score_pair("alpha beta gamma", "delta epsilon zeta") == 0.0);
}

TEST_CASE("score_pair: term coverage beats single-term match") {
    LexicalScorer scorer;
    const std::string query = "NR handover measurement";
    const double full = scorer.score_pair(query, "nr handover measurement window settings");
    const double partial = scorer.score_pair(query, "handover timers and unrelated words");
    CHECK(full > partial);
}

TEST_CASE("bm25 hand-computed single-pair value") {
    // One document batch: N=1, df=1 for present terms, dl=avgdl so the length
    // normalization cancels. Expected per present term:
    //   idf = ln(1 + 0.5/1.5), tf = 1, contribution idf * 2.2 / (1 + 1.2).
    const double idf = std::log(1.0 + 0.5 / 1.5);
    const double expected = 2.0 * idf * 2.2 / 2.2;
    const auto scores = bm25_scores("alpha beta", {"alpha beta"});
    REQUIRE(scores.size() == 1);
    CHECK(scores[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("rerank returns a single candidate unchanged") {
    LexicalScorer scorer;
    RerankConfig config;
    auto out = rerank("any query", {candidate("c0", "any text", 0)}, config, scorer);
    REQUIRE(out.size() == 1);
    CHECK(out[0].chunk.chunk_id == "c0");
}

TEST_CASE("equal scores fall back to retrieval order") {
    ConstantScorer scorer;
    RerankConfig config;
    config.top_m = 3;
    std::vector<ScoredChunk> candidates;
    for (std::size_t i = 0; i < 10; ++i) {
        candidates.push_back(candidate("c" + std::to_string(i), "same text", 9 - i));
    }
    const auto out = rerank("q", candidates, config, scorer);
    REQUIRE(out.size() == 3);
    CHECK(out[0].chunk.chunk_id == "c9"); // retrieval rank 0
    CHECK(out[1].chunk.chunk_id == "c8");
    CHECK(out[2].chunk.chunk_id == "c7");
}

TEST_CASE("planted gold at retrieval rank 120 reaches the top 15") {
    LexicalScorer scorer;
    RerankConfig config; // top_m 15, candidates 150

    const std::string query = "nr handover measurement report threshold";
    std::vector<ScoredChunk> candidates;
    for (std::size_t rank = 0; rank < 150; ++rank) {
        if (rank == 120) {
            candidates.push_back(candidate(
                "gold", "nr handover measurement report threshold with full coverage", rank));
        } else if (rank % 3 == 0) {
            candidates.push_back(candidate("c" + std::to_string(rank),
                                           "handover mentioned alone here", rank));
        } else {
            candidates.push_back(candidate("c" + std::to_string(rank),
                                           "filler tokens without relevance", rank));
        }
    }
    const auto out = rerank(query, candidates, config, scorer);
    REQUIRE(out.size() == 15);
    CHECK(std::any_of(out.begin(), out.end(), [](const ScoredChunk& sc) {
        return sc.chunk.chunk_id == "gold";
    }));
    CHECK(out[0].chunk.chunk_id == "gold");
}

TEST_CASE("rerank output is a bounded subset with populated scores") {
    LexicalScorer scorer;
    RerankConfig config;
    config.top_m = 5;

    std::vector<ScoredChunk> candidates;
    for (std::size_t i = 0; i < 12; ++i) {
        candidates.push_back(candidate("c" + std::to_string(i),
                                       "token" + std::to_string(i % 4) + " filler", i));
    }
    const auto out = rerank("token1 token2", candidates, config, scorer);
    CHECK(out.size() == 5);
    for (const auto& sc : out) {
        CHECK(sc.chunk.chunk_id.starts_with("c"));
        CHECK(std::isfinite(sc.rerank_score));
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        CHECK(out[i].rerank_score >= out[i + 1].rerank_score);
    }

    CHECK(rerank("q", {}, config, scorer).empty());
}

TEST_CASE("positive scaling of scores never changes the order") {
    LexicalScorer lexical;
    ScalingScorer scaled(lexical, 1000.0);
    RerankConfig config;
    config.top_m = 8;

    std::vector<ScoredChunk> candidates;
    for (std::size_t i = 0; i < 20; ++i) {
        std::string text = "alpha";
        for (std::size_t j = 0; j < i % 5; ++j) text += " beta gamma";
        candidates.push_back(candidate("c" + std::to_string(i), text, i));
    }
    const auto a = rerank("alpha beta", candidates, config, lexical);
    const auto b = rerank("alpha beta", candidates, config, scaled);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].chunk.chunk_id == b[i].chunk.chunk_id);
    }
}

TEST_CASE("lexical scorer is deterministic across calls") {
    LexicalScorer scorer;
    const std::vector<std::string> texts = {"alpha beta gamma", "beta beta beta", "gamma alone"};
    const auto s1 = scorer.score("alpha beta", texts);
    const auto s2 = scorer.score("alpha beta", texts);
    CHECK(s1 == s2);
}

TEST_CASE("rerank config is validated") {
    LexicalScorer scorer;
    RerankConfig config;
    config.top_m = 200; // exceeds candidates_k = 150
    CHECK_THROWS_AS(rerank("q", {candidate("c", "t", 0)}, config, scorer), Error);
}
