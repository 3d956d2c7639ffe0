#include "specrag/eval_harness.hpp"

#include "specrag/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace specrag {

namespace {

struct ItemResult {
    bool correct = false;
    bool unparsable = false;
    bool failed = false;
    bool gold_in_candidates = false;
    bool gold_in_pool = false;
    double latency_ms = 0.0;
};

ItemResult eval_one(const VectorIndex& index, const MCQItem& item, const std::string& gold_id,
                    const AblationConfig& ablation, Embedder& embedder, RelevanceScorer& scorer,
                    const GeneratorChoice& generator, const EvalOptions& options) {
    ItemResult result;
    const auto started = std::chrono::steady_clock::now();
    try {
        std::vector<Chunk> contexts;
        if (ablation.use_context) {
            const EmbeddingVector query = embedder.embed_one(item.question);
            const auto hits = index.top_k(query, options.rerank.candidates_k);

            std::vector<ScoredChunk> candidates;
            candidates.reserve(hits.size());
            for (std::size_t rank = 0; rank < hits.size(); ++rank) {
                const auto& entry = index.entry(hits[rank].entry_index);
                ScoredChunk sc;
                sc.chunk.doc_id = entry.doc_id;
                sc.chunk.chunk_id = entry.chunk_id;
                sc.chunk.text = entry.text;
                sc.retrieval_rank = rank;
                sc.retrieval_similarity = hits[rank].similarity;
                candidates.push_back(std::move(sc));
            }
            if (!gold_id.empty()) {
                result.gold_in_candidates =
                    std::any_of(candidates.begin(), candidates.end(),
                                [&](const ScoredChunk& c) { return c.chunk.chunk_id == gold_id; });
            }

            std::vector<ScoredChunk> pool;
            if (ablation.use_rerank) {
                pool = rerank(item.question, std::move(candidates), options.rerank, scorer);
            } else {
                pool = std::move(candidates);
                if (pool.size() > options.rerank.top_m) pool.resize(options.rerank.top_m);
            }
            if (!gold_id.empty()) {
                result.gold_in_pool =
                    std::any_of(pool.begin(), pool.end(),
                                [&](const ScoredChunk& c) { return c.chunk.chunk_id == gold_id; });
            }
            const std::size_t take = std::min<std::size_t>(ablation.n_contexts, pool.size());
            for (std::size_t i = 0; i < take; ++i) contexts.push_back(std::move(pool[i].chunk));
        }

        const AssembledPrompt prompt =
            assemble_prompt(options.prompt, contexts, item, ablation.n_contexts);

        std::string text;
        if (generator.is_stub) {
            text = stub_generate(prompt, item, contexts);
        } else {
            GeneratorClient* client =
                ablation.use_selfextend ? generator.extended : generator.standard;
            text = client->generate(prompt).text;
        }

        try {
            const std::size_t answer = parse_answer(text, item.options.size());
            result.correct = (answer == item.answer_index);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnparsableAnswer) throw;
            result.unparsable = true;
        }
    } catch (const Error&) {
        // Client or pipeline failure on this item: scored as unparsable.
        result.failed = true;
        result.unparsable = true;
    }
    const auto finished = std::chrono::steady_clock::now();
    result.latency_ms =
        std::chrono::duration<double, std::milli>(finished - started).count();
    return result;
}

} // namespace

std::string ablation_label(const AblationConfig& config) {
    std::string label;
    label += config.use_selfextend ? "SE+" : "se-";
    label += config.use_rerank ? "RR+" : "rr-";
    label += config.use_semantic_chunking ? "SC+" : "sc-";
    label += "MC" + std::to_string(config.use_context ? config.n_contexts : 0);
    return label;
}

EvalReport run_eval(const VectorIndex& index, const std::vector<MCQItem>& dataset,
                    const AblationConfig& ablation, Embedder& embedder, RelevanceScorer& scorer,
                    const GeneratorChoice& generator, const EvalOptions& options) {
    if (ablation.n_contexts == 0) raise(ErrorCode::InvalidConfig, "n_contexts must be positive");
    validate(options.rerank);
    if (!options.gold_chunk_ids.empty() && options.gold_chunk_ids.size() != dataset.size()) {
        raise(ErrorCode::InvalidConfig, "gold_chunk_ids must align with the dataset");
    }
    // Arm/generator pairing is a run-level contract, never a per-item failure.
    if (!generator.is_stub) {
        if (ablation.use_selfextend && generator.extended == nullptr) {
            raise(ErrorCode::InvalidConfig,
                  "SelfExtend arm requires an extension-capable generator client");
        }
        if (!ablation.use_selfextend && generator.standard == nullptr) {
            raise(ErrorCode::InvalidConfig, "arm requires a generator client");
        }
    }

    std::vector<ItemResult> results(dataset.size());
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::string gold =
                options.gold_chunk_ids.empty() ? std::string() : options.gold_chunk_ids[i];
            results[i] = eval_one(index, dataset[i], gold, ablation, embedder, scorer, generator,
                                  options);
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1 || dataset.size() < 2) {
        worker(0, dataset.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t stride = (dataset.size() + jobs - 1) / jobs;
        for (std::size_t t = 0; t < jobs; ++t) {
            const std::size_t begin = t * stride;
            const std::size_t end = std::min(begin + stride, dataset.size());
            if (begin >= end) break;
            threads.emplace_back(worker, begin, end);
        }
        for (auto& th : threads) th.join();
    }

    EvalReport report;
    report.config_echo = ablation;
    report.total = dataset.size();
    report.top_m = options.rerank.top_m;
    report.candidates_k = options.rerank.candidates_k;
    report.has_recall = !options.gold_chunk_ids.empty() && ablation.use_context;

    std::vector<double> latencies;
    latencies.reserve(results.size());
    std::size_t gold_candidates = 0;
    std::size_t gold_pool = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        report.correct += r.correct ? 1 : 0;
        report.unparsable += r.unparsable ? 1 : 0;
        report.failed += r.failed ? 1 : 0;
        gold_candidates += r.gold_in_candidates ? 1 : 0;
        gold_pool += r.gold_in_pool ? 1 : 0;
        latencies.push_back(r.latency_ms);

        const std::string cat = dataset[i].category.empty() ? "uncategorized" : dataset[i].category;
        auto& stat = report.per_category[cat];
        ++stat.total;
        stat.correct += r.correct ? 1 : 0;
    }

    if (!latencies.empty()) {
        double sum = 0.0;
        for (double v : latencies) sum += v;
        report.mean_latency_ms = sum / static_cast<double>(latencies.size());
        std::sort(latencies.begin(), latencies.end());
        const std::size_t p95 = static_cast<std::size_t>(
            std::ceil(0.95 * static_cast<double>(latencies.size()))) -
                                1;
        report.p95_latency_ms = latencies[std::min(p95, latencies.size() - 1)];
    }
    if (report.has_recall && report.total > 0) {
        report.recall_at_candidates =
            static_cast<double>(gold_candidates) / static_cast<double>(report.total);
        report.recall_at_top_m = static_cast<double>(gold_pool) / static_cast<double>(report.total);
    }
    return report;
}

std::vector<EvalReport> compare_ablations(const VectorIndex* semantic_index,
                                          const VectorIndex* fixed_index,
                                          const std::vector<MCQItem>& dataset,
                                          const std::vector<AblationConfig>& configs,
                                          Embedder& embedder, RelevanceScorer& scorer,
                                          const GeneratorChoice& generator,
                                          const EvalOptions& options) {
    if (configs.size() < 2) {
        raise(ErrorCode::InvalidConfig, "ablation comparison needs at least two configs");
    }
    std::vector<EvalReport> reports;
    reports.reserve(configs.size());
    for (const auto& config : configs) {
        const VectorIndex* index = config.use_semantic_chunking ? semantic_index : fixed_index;
        if (index == nullptr) {
            raise(ErrorCode::InvalidConfig,
                  std::string("no index built for the ") +
                      (config.use_semantic_chunking ? "semantic" : "fixed") + " chunking arm");
        }
        reports.push_back(
            run_eval(*index, dataset, config, embedder, scorer, generator, options));
    }
    return reports;
}

namespace {

nlohmann::ordered_json report_json(const EvalReport& report, bool with_latency) {
    nlohmann::ordered_json j;
    j["config"] = {
        {"SE", report.config_echo.use_selfextend},
        {"RR", report.config_echo.use_rerank},
        {"SC", report.config_echo.use_semantic_chunking},
        {"MC", report.config_echo.use_context ? report.config_echo.n_contexts : 0},
        {"label", ablation_label(report.config_echo)},
    };
    j["total"] = report.total;
    j["correct"] = report.correct;
    j["unparsable"] = report.unparsable;
    j["failed"] = report.failed;
    j["accuracy"] = report.accuracy();

    nlohmann::ordered_json cats = nlohmann::ordered_json::object();
    for (const auto& [name, stat] : report.per_category) {
        cats[name] = {
            {"total", stat.total},
            {"correct", stat.correct},
            {"accuracy",
             stat.total == 0 ? 0.0 : static_cast<double>(stat.correct) / static_cast<double>(stat.total)},
        };
    }
    j["per_category"] = std::move(cats);

    if (report.has_recall) {
        j["recall"] = {
            {"top_m", report.top_m},
            {"at_top_m", report.recall_at_top_m},
            {"candidates_k", report.candidates_k},
            {"at_candidates", report.recall_at_candidates},
        };
    }
    if (with_latency) {
        j["mean_latency_ms"] = report.mean_latency_ms;
        j["p95_latency_ms"] = report.p95_latency_ms;
    }
    return j;
}

} // namespace

std::string report_to_json(const EvalReport& report, bool with_latency) {
    return report_json(report, with_latency).dump(2);
}

std::string reports_to_json(const std::vector<EvalReport>& reports, bool with_latency) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r, with_latency));
    return arr.dump(2);
}

std::string format_report_table(const std::vector<EvalReport>& reports) {
    std::ostringstream out;
    out << "SE  RR  SC  MC  accuracy  correct/total  unparsable\n";
    for (const auto& r : reports) {
        const auto& c = r.config_echo;
        char line[160];
        std::snprintf(line, sizeof(line), "%-3s %-3s %-3s %-3zu %.4f    %zu/%zu    %zu\n",
                      c.use_selfextend ? "on" : "off", c.use_rerank ? "on" : "off",
                      c.use_semantic_chunking ? "on" : "off",
                      c.use_context ? c.n_contexts : std::size_t{0}, r.accuracy(), r.correct,
                      r.total, r.unparsable);
        out << line;
    }
    return out.str();
}

std::vector<IndexEntry> entries_from_chunks(const std::vector<Chunk>& chunks, Embedder& embedder) {
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    const auto vectors = embedder.embed(texts);

    std::vector<IndexEntry> entries;
    entries.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        IndexEntry e;
        e.chunk_id = chunks[i].chunk_id;
        e.doc_id = chunks[i].doc_id;
        e.text = chunks[i].text;
        e.vector = vectors[i];
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace specrag
