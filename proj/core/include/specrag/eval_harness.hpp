#pragma once

#include "specrag/embedder.hpp"
#include "specrag/generator.hpp"
#include "specrag/prompt.hpp"
#include "specrag/reranker.hpp"
#include "specrag/vector_index.hpp"

#include <map>
#include <string>
#include <vector>

namespace specrag {

struct AblationConfig {
    bool use_context = true;           // MC arm off means no retrieved context at all
    bool use_semantic_chunking = true; // picks which index serves the arm
    bool use_rerank = true;            // raw retrieval order otherwise
    bool use_selfextend = false;       // picks the extended generator when present
    std::size_t n_contexts = 3;
};

std::string ablation_label(const AblationConfig& config);

struct CategoryStat {
    std::size_t total = 0;
    std::size_t correct = 0;
};

struct EvalReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t unparsable = 0; // includes failed generations; never excluded
    std::size_t failed = 0;     // subset of unparsable caused by client errors
    std::map<std::string, CategoryStat> per_category;
    double mean_latency_ms = 0.0;
    double p95_latency_ms = 0.0;
    AblationConfig config_echo;

    // Gold-recall metrics, only meaningful when gold ids were supplied.
    bool has_recall = false;
    double recall_at_top_m = 0.0;      // post-rerank pool when RR is on
    double recall_at_candidates = 0.0; // raw retrieval fan-in
    std::size_t top_m = 0;
    std::size_t candidates_k = 0;

    // Exact rational accuracy; the double is derived from the two counters.
    double accuracy() const {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
};

/// Generator selection is explicit per arm: the stub, or a client (plus an
/// optional extension-capable client the SelfExtend arm switches to).
struct GeneratorChoice {
    bool is_stub = true;
    GeneratorClient* standard = nullptr;
    GeneratorClient* extended = nullptr;

    static GeneratorChoice stub() { return {}; }
    static GeneratorChoice client(GeneratorClient& standard_client,
                                  GeneratorClient* extended_client = nullptr) {
        return {false, &standard_client, extended_client};
    }
};

struct EvalOptions {
    RerankConfig rerank;                      // top_m and candidates_k
    PromptTemplate prompt;
    std::vector<std::string> gold_chunk_ids;  // index-aligned with the dataset; may be empty
    std::size_t jobs = 1;
};

/// Runs the retrieval -> rerank -> prompt -> generate -> parse loop over the
/// dataset. Client failures and unparsable generations count as incorrect and
/// never abort the run. Item order does not affect the counters.
EvalReport run_eval(const VectorIndex& index, const std::vector<MCQItem>& dataset,
                    const AblationConfig& ablation, Embedder& embedder, RelevanceScorer& scorer,
                    const GeneratorChoice& generator, const EvalOptions& options);

/// One report per config over the same dataset; the index serving each arm is
/// picked by its chunking flag. Both indexes may point at the same object
/// when the grid never toggles SC.
std::vector<EvalReport> compare_ablations(const VectorIndex* semantic_index,
                                          const VectorIndex* fixed_index,
                                          const std::vector<MCQItem>& dataset,
                                          const std::vector<AblationConfig>& configs,
                                          Embedder& embedder, RelevanceScorer& scorer,
                                          const GeneratorChoice& generator,
                                          const EvalOptions& options);

/// Machine-readable report. Latency fields are included only when
/// with_latency is set, so seeded runs can emit byte-identical files.
std::string report_to_json(const EvalReport& report, bool with_latency);
std::string reports_to_json(const std::vector<EvalReport>& reports, bool with_latency);

/// Human-readable comparison table keyed by the SE/RR/SC/MC toggles.
std::string format_report_table(const std::vector<EvalReport>& reports);

/// Embeds chunk texts (one batched call) and wraps them as index entries.
std::vector<IndexEntry> entries_from_chunks(const std::vector<Chunk>& chunks, Embedder& embedder);

} // namespace specrag
