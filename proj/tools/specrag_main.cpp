// Command-line front door for the retrieval pipeline: corpus ingestion,
// ad-hoc querying, MCQ evaluation, ablation grids, and chunk inspection.

#include "specrag/corpus_io.hpp"
#include "specrag/dataset.hpp"
#include "specrag/error.hpp"
#include "specrag/eval_harness.hpp"
#include "specrag/pipeline_config.hpp"
#include "specrag/synth_corpus.hpp"
#include "specrag/text.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using namespace specrag;

constexpr int kExitOk = 0;
constexpr int kExitDegraded = 1;
constexpr int kExitUsage = 2;

struct FlagOverrides {
    std::optional<double> percentile;
    std::optional<std::size_t> buffer;
    std::optional<std::size_t> fixed_size;
    std::optional<std::size_t> fixed_overlap;
    std::optional<std::size_t> dims;
    std::optional<std::size_t> top_m;
    std::optional<std::size_t> candidates;
    std::optional<std::size_t> n_contexts;
    std::optional<std::string> embed_endpoint;
    std::optional<std::string> rerank_endpoint;
    std::optional<std::string> llm_endpoint;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    bool http_embedder = false;
    bool stub_scorer = false;
    bool http_scorer = false;
    bool stub_generator = false;
    bool toy_generator = false;
    bool toy_selfextend_generator = false;
};

void add_common_flags(CLI::App& cmd, FlagOverrides& flags) {
    cmd.add_option("--percentile", flags.percentile, "Breakpoint percentile in (0, 100)");
    cmd.add_option("--buffer", flags.buffer, "Sentences grouped per similarity window");
    cmd.add_option("--fixed-size", flags.fixed_size, "Fixed-chunk size in tokens");
    cmd.add_option("--fixed-overlap", flags.fixed_overlap, "Fixed-chunk overlap in tokens");
    cmd.add_option("--dims", flags.dims, "Embedding dimensions");
    cmd.add_option("--top-m", flags.top_m, "Chunks kept after re-ranking");
    cmd.add_option("--candidates", flags.candidates, "Chunks retrieved before re-ranking");
    cmd.add_option("--n-contexts", flags.n_contexts, "Contexts placed in the prompt");
    cmd.add_option("--embed-endpoint", flags.embed_endpoint, "HTTP embedding service base URL");
    cmd.add_option("--rerank-endpoint", flags.rerank_endpoint, "HTTP scoring service base URL");
    cmd.add_option("--llm-endpoint", flags.llm_endpoint, "HTTP generation service base URL");
    cmd.add_option("--seed", flags.seed, "Fix stochastic components; reports omit wall-clock");
    cmd.add_option("--jobs", flags.jobs, "Per-question fan-out");
    cmd.add_flag("--http-embedder", flags.http_embedder, "Embed via the HTTP provider");
    cmd.add_flag("--stub-scorer", flags.stub_scorer, "Re-rank with the lexical scorer");
    cmd.add_flag("--http-scorer", flags.http_scorer, "Re-rank via the HTTP scorer");
    cmd.add_flag("--stub-generator", flags.stub_generator, "Answer with the lexical stub");
    cmd.add_flag("--toy-generator", flags.toy_generator, "Answer with the toy decoder");
    cmd.add_flag("--toy-selfextend-generator", flags.toy_selfextend_generator,
                 "Answer with the toy decoder using the extended-context path");
}

PipelineConfig resolve_config(const std::string& config_path, const FlagOverrides& flags) {
    PipelineConfig config;
    if (!config_path.empty()) config = load_pipeline_config(config_path);
    apply_env_overrides(config);

    if (flags.percentile) config.chunking.breakpoint_percentile = *flags.percentile;
    if (flags.buffer) config.chunking.buffer_size = *flags.buffer;
    if (flags.fixed_size) config.chunking.fixed_size_tokens = *flags.fixed_size;
    if (flags.fixed_overlap) config.chunking.fixed_overlap_tokens = *flags.fixed_overlap;
    if (flags.dims) config.embedder.dims = *flags.dims;
    if (flags.top_m) config.rerank.top_m = *flags.top_m;
    if (flags.candidates) config.rerank.candidates_k = *flags.candidates;
    if (flags.n_contexts) config.n_contexts = *flags.n_contexts;
    if (flags.embed_endpoint) config.embedder.endpoint = *flags.embed_endpoint;
    if (flags.rerank_endpoint) config.rerank.endpoint = *flags.rerank_endpoint;
    if (flags.llm_endpoint) config.llm_endpoint = *flags.llm_endpoint;
    if (flags.seed) {
        config.seeded = true;
        config.seed = *flags.seed;
    }
    if (flags.jobs) config.jobs = *flags.jobs;

    if (flags.http_embedder) config.embedder.provider = EmbedderProvider::Http;
    if (flags.stub_scorer && flags.http_scorer) {
        raise(ErrorCode::InvalidConfig, "--stub-scorer and --http-scorer are mutually exclusive");
    }
    if (flags.stub_scorer) config.rerank.scorer = ScorerKind::Lexical;
    if (flags.http_scorer) config.rerank.scorer = ScorerKind::Http;

    const int generator_flags = (flags.stub_generator ? 1 : 0) + (flags.toy_generator ? 1 : 0) +
                                (flags.toy_selfextend_generator ? 1 : 0) +
                                (flags.llm_endpoint ? 1 : 0);
    if (generator_flags > 1) {
        raise(ErrorCode::InvalidConfig, "choose exactly one generator flag");
    }
    if (flags.stub_generator) config.generator = GeneratorKind::Stub;
    if (flags.toy_generator) config.generator = GeneratorKind::Toy;
    if (flags.toy_selfextend_generator) config.generator = GeneratorKind::ToySelfExtend;
    if (flags.llm_endpoint) config.generator = GeneratorKind::Http;

    validate(config);
    return config;
}

struct GeneratorBundle {
    std::unique_ptr<ToyGenerator> toy_standard;
    std::unique_ptr<ToyGenerator> toy_extended;
    std::unique_ptr<HttpGenerator> http;
    GeneratorChoice choice;
};

GeneratorBundle make_generators(const PipelineConfig& config) {
    GeneratorBundle bundle;
    switch (config.generator) {
    case GeneratorKind::Stub:
        bundle.choice = GeneratorChoice::stub();
        return bundle;
    case GeneratorKind::Toy: {
        ToyDecoderConfig toy;
        toy.attention = config.attention;
        if (config.seeded) toy.seed = config.seed;
        bundle.toy_standard = std::make_unique<ToyGenerator>(toy, false);
        bundle.choice = GeneratorChoice::client(*bundle.toy_standard);
        return bundle;
    }
    case GeneratorKind::ToySelfExtend: {
        ToyDecoderConfig toy;
        toy.attention = config.attention;
        if (config.seeded) toy.seed = config.seed;
        bundle.toy_standard = std::make_unique<ToyGenerator>(toy, false);
        bundle.toy_extended = std::make_unique<ToyGenerator>(toy, true);
        bundle.choice = GeneratorChoice::client(*bundle.toy_standard, bundle.toy_extended.get());
        return bundle;
    }
    case GeneratorKind::Http:
        bundle.http = std::make_unique<HttpGenerator>(config.llm_endpoint);
        // A remote service is assumed extension-capable; it reports its own limits.
        bundle.choice = GeneratorChoice::client(*bundle.http, bundle.http.get());
        return bundle;
    case GeneratorKind::Unset:
        break;
    }
    raise(ErrorCode::InvalidConfig,
          "no generator selected: pass --stub-generator, --toy-generator, "
          "--toy-selfextend-generator, or --llm-endpoint");
}

int run_ingest(const PipelineConfig& config, const std::string& corpus_path,
               const std::string& index_out, bool fixed) {
    const auto started = std::chrono::steady_clock::now();
    const auto docs = load_corpus(corpus_path);
    auto embedder = make_embedder(config.embedder);

    VectorIndex index(config.embedder.dims);
    std::size_t sentence_count = 0;
    std::size_t chunk_count = 0;
    for (const auto& doc : docs) {
        sentence_count += split_sentences(doc.text).size();
        const auto chunks = chunk_document(doc, *embedder, config.chunking, !fixed);
        chunk_count += chunks.size();
        index.insert(entries_from_chunks(chunks, *embedder));
    }

    // Write-temp-then-rename so a failed run never leaves a partial index.
    const std::filesystem::path out(index_out);
    const std::filesystem::path tmp = out.string() + ".tmp";
    index.save(tmp);
    std::filesystem::rename(tmp, out);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("ingested %zu docs, %zu sentences, %zu chunks (%s chunking) into %s in %.2fs\n",
                docs.size(), sentence_count, chunk_count, fixed ? "fixed" : "semantic",
                out.string().c_str(), seconds);
    return kExitOk;
}

int run_query(const PipelineConfig& config, const std::string& index_path,
              const std::string& question, const std::vector<std::string>& options,
              bool no_context, bool no_rerank, bool as_json) {
    const VectorIndex index = VectorIndex::load(index_path);
    auto embedder = make_embedder(config.embedder);
    auto scorer = make_scorer(config.rerank);

    std::vector<ScoredChunk> ranked;
    if (!no_context) {
        const auto query_vec = embedder->embed_one(question);
        const auto hits = index.top_k(query_vec, config.rerank.candidates_k);
        std::vector<ScoredChunk> candidates;
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
        if (no_rerank) {
            ranked = std::move(candidates);
            if (ranked.size() > config.rerank.top_m) ranked.resize(config.rerank.top_m);
        } else {
            ranked = rerank(question, std::move(candidates), config.rerank, *scorer);
        }
    }

    std::vector<Chunk> contexts;
    for (std::size_t i = 0; i < std::min(config.n_contexts, ranked.size()); ++i) {
        contexts.push_back(ranked[i].chunk);
    }

    auto bundle = make_generators(config);

    std::string generated;
    std::optional<std::size_t> answer;
    if (options.size() >= 2) {
        MCQItem item;
        item.question = question;
        item.options = options;
        item.answer_index = 0; // unknown; only used for validation bounds
        const auto prompt = assemble_prompt(config.prompt, contexts, item, config.n_contexts);
        if (bundle.choice.is_stub) {
            generated = stub_generate(prompt, item, contexts);
        } else {
            GeneratorClient* client = bundle.choice.extended ? bundle.choice.extended
                                                             : bundle.choice.standard;
            generated = client->generate(prompt).text;
        }
        try {
            answer = parse_answer(generated, options.size());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnparsableAnswer) throw;
        }
    } else {
        if (bundle.choice.is_stub) {
            raise(ErrorCode::InvalidConfig,
                  "open-ended query needs a toy or HTTP generator; the stub answers MCQs only");
        }
        std::string text = config.prompt.instruction;
        text += "\n\n";
        if (!contexts.empty()) {
            text += config.prompt.context_header;
            text += '\n';
            for (std::size_t i = 0; i < contexts.size(); ++i) {
                text += "Context " + std::to_string(i + 1) + ":\n" + contexts[i].text + "\n\n";
            }
        }
        text += config.prompt.question_header;
        text += '\n';
        text += question;
        text += "\n\n";
        text += config.prompt.answer_cue;

        AssembledPrompt prompt;
        prompt.n_contexts_used = contexts.size();
        prompt.token_estimate = count_tokens(text);
        prompt.text = std::move(text);
        GeneratorClient* client =
            bundle.choice.extended ? bundle.choice.extended : bundle.choice.standard;
        generated = client->generate(prompt).text;
    }

    if (as_json) {
        nlohmann::ordered_json j;
        j["question"] = question;
        if (options.size() >= 2) {
            j["answer_index"] = answer ? nlohmann::ordered_json(*answer) : nlohmann::ordered_json();
            j["answer_label"] =
                answer ? nlohmann::ordered_json("option " + std::to_string(*answer + 1))
                       : nlohmann::ordered_json();
        }
        j["generated"] = generated;
        nlohmann::ordered_json ctx = nlohmann::ordered_json::array();
        for (const auto& sc : ranked) {
            ctx.push_back({{"chunk_id", sc.chunk.chunk_id},
                           {"doc_id", sc.chunk.doc_id},
                           {"retrieval_rank", sc.retrieval_rank},
                           {"retrieval_similarity", sc.retrieval_similarity},
                           {"rerank_score", sc.rerank_score},
                           {"text", sc.chunk.text}});
        }
        j["contexts"] = std::move(ctx);
        std::cout << j.dump(2) << '\n';
    } else {
        if (options.size() >= 2) {
            if (answer) {
                std::cout << "answer: option " << (*answer + 1) << " — " << options[*answer]
                          << '\n';
            } else {
                std::cout << "answer: unparsable (raw: " << generated << ")\n";
            }
        } else {
            std::cout << "generated: " << generated << '\n';
        }
        if (!ranked.empty()) {
            std::cout << "contexts:\n";
            for (const auto& sc : ranked) {
                std::printf("  [%zu] %s sim=%.4f score=%.4f\n", sc.retrieval_rank,
                            sc.chunk.chunk_id.c_str(), sc.retrieval_similarity, sc.rerank_score);
            }
        }
    }
    return answer || options.size() < 2 ? kExitOk : kExitDegraded;
}

AblationConfig base_ablation(const PipelineConfig& config, bool no_context, bool no_rerank,
                             bool fixed, bool selfextend) {
    AblationConfig arm;
    arm.use_context = !no_context;
    arm.use_rerank = !no_rerank;
    arm.use_semantic_chunking = !fixed;
    arm.use_selfextend = selfextend;
    arm.n_contexts = config.n_contexts;
    return arm;
}

int run_eval_cmd(const PipelineConfig& config, const std::string& index_path,
                 const std::string& dataset_path, const AblationConfig& arm,
                 const std::string& out_path) {
    const VectorIndex index = VectorIndex::load(index_path);
    const auto dataset = load_mcq_dataset(dataset_path);
    auto embedder = make_embedder(config.embedder);
    auto scorer = make_scorer(config.rerank);
    auto bundle = make_generators(config);

    EvalOptions options;
    options.rerank = config.rerank;
    options.prompt = config.prompt;
    options.jobs = config.jobs;

    const EvalReport report =
        run_eval(index, dataset, arm, *embedder, *scorer, bundle.choice, options);

    std::cout << format_report_table({report});
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) raise(ErrorCode::IoError, "cannot write report: " + out_path);
        out << report_to_json(report, /*with_latency=*/!config.seeded) << '\n';
    }
    return report.failed > 0 ? kExitDegraded : kExitOk;
}

int run_ablate_cmd(const PipelineConfig& config, const std::string& index_path,
                   const std::string& fixed_index_path, const std::string& dataset_path,
                   const std::string& grid_csv, const AblationConfig& base,
                   const std::string& out_path) {
    std::vector<std::string> toggles;
    {
        std::string token;
        for (char c : grid_csv) {
            if (c == ',') {
                if (!token.empty()) toggles.push_back(token);
                token.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                token.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            }
        }
        if (!token.empty()) toggles.push_back(token);
    }
    if (toggles.empty()) {
        raise(ErrorCode::InvalidConfig, "--grid needs at least one of SE, RR, SC, MC");
    }
    for (const auto& t : toggles) {
        if (t != "SE" && t != "RR" && t != "SC" && t != "MC") {
            raise(ErrorCode::InvalidConfig, "unknown grid toggle: " + t);
        }
    }

    std::vector<AblationConfig> arms{base};
    for (const auto& toggle : toggles) {
        std::vector<AblationConfig> expanded;
        for (const auto& arm : arms) {
            AblationConfig on = arm;
            AblationConfig off = arm;
            if (toggle == "SE") {
                on.use_selfextend = true;
                off.use_selfextend = false;
            } else if (toggle == "RR") {
                on.use_rerank = true;
                off.use_rerank = false;
            } else if (toggle == "SC") {
                on.use_semantic_chunking = true;
                off.use_semantic_chunking = false;
            } else { // MC: one context vs the configured multi-context count
                on.n_contexts = std::max<std::size_t>(config.n_contexts, 2);
                off.n_contexts = 1;
            }
            expanded.push_back(off);
            expanded.push_back(on);
        }
        arms = std::move(expanded);
    }

    const VectorIndex semantic_index = VectorIndex::load(index_path);
    std::optional<VectorIndex> fixed_index;
    const bool needs_fixed = std::any_of(arms.begin(), arms.end(), [](const AblationConfig& a) {
        return !a.use_semantic_chunking;
    });
    if (needs_fixed) {
        if (fixed_index_path.empty()) {
            raise(ErrorCode::InvalidConfig,
                  "the SC-off arm needs --fixed-index (an index built with fixed chunking)");
        }
        fixed_index = VectorIndex::load(fixed_index_path);
    }

    const auto dataset = load_mcq_dataset(dataset_path);
    auto embedder = make_embedder(config.embedder);
    auto scorer = make_scorer(config.rerank);
    auto bundle = make_generators(config);

    EvalOptions options;
    options.rerank = config.rerank;
    options.prompt = config.prompt;
    options.jobs = config.jobs;

    const auto reports =
        compare_ablations(&semantic_index, fixed_index ? &*fixed_index : nullptr, dataset, arms,
                          *embedder, *scorer, bundle.choice, options);

    std::cout << format_report_table(reports);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) raise(ErrorCode::IoError, "cannot write report: " + out_path);
        out << reports_to_json(reports, /*with_latency=*/!config.seeded) << '\n';
    }
    const bool degraded = std::any_of(reports.begin(), reports.end(),
                                      [](const EvalReport& r) { return r.failed > 0; });
    return degraded ? kExitDegraded : kExitOk;
}

int run_synth(std::uint64_t seed, std::size_t n_docs, std::size_t n_questions,
              const std::string& out_dir) {
    const auto corpus = synth_corpus(seed, n_docs, n_questions);
    const std::filesystem::path root(out_dir);
    std::filesystem::create_directories(root / "corpus");
    for (const auto& doc : corpus.documents) {
        std::ofstream out(root / "corpus" / (doc.id + ".txt"));
        if (!out) raise(ErrorCode::IoError, "cannot write under " + out_dir);
        out << doc.text << '\n';
    }
    std::vector<MCQItem> items;
    for (const auto& q : corpus.questions) items.push_back(q.item);
    save_mcq_dataset(items, root / "questions.json");
    std::printf("wrote %zu documents and %zu questions under %s\n", corpus.documents.size(),
                items.size(), out_dir.c_str());
    return kExitOk;
}

int run_chunk_inspect(const PipelineConfig& config, const std::string& corpus_path, bool fixed,
                      const std::string& doc_filter) {
    const auto docs = load_corpus(corpus_path);
    auto embedder = make_embedder(config.embedder);
    for (const auto& doc : docs) {
        if (!doc_filter.empty() && doc.id != doc_filter) continue;
        dump_chunks_jsonl(chunk_document(doc, *embedder, config.chunking, !fixed), std::cout);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retrieval-augmented MCQ pipeline over plain-text corpora"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

    FlagOverrides flags;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Chunk, embed, and index a corpus");
    std::string corpus_path, index_out;
    bool ingest_fixed = false;
    ingest->add_option("--corpus", corpus_path, "Corpus directory of .txt or a JSON-lines file")
        ->required();
    ingest->add_option("--index", index_out, "Output index file")->required();
    ingest->add_flag("--fixed", ingest_fixed, "Use fixed-size chunking instead of semantic");
    add_common_flags(*ingest, flags);

    // query
    auto* query = app.add_subcommand("query", "Ask one question against an index");
    std::string query_index, question;
    std::vector<std::string> query_options;
    bool query_no_context = false, query_no_rerank = false, query_json = false;
    query->add_option("--index", query_index, "Index file")->required();
    query->add_option("--question", question, "Question text")->required();
    query->add_option("--option", query_options, "MCQ option (repeat; two or more enable MCQ mode)");
    query->add_flag("--no-context", query_no_context, "Skip retrieval entirely");
    query->add_flag("--no-rerank", query_no_rerank, "Keep raw retrieval order");
    query->add_flag("--json", query_json, "Emit machine-readable provenance");
    add_common_flags(*query, flags);

    // eval
    auto* eval = app.add_subcommand("eval", "Score an MCQ dataset under one configuration");
    std::string eval_index, eval_dataset, eval_out;
    bool eval_no_context = false, eval_no_rerank = false, eval_fixed = false,
         eval_selfextend = false;
    eval->add_option("--index", eval_index, "Index file")->required();
    eval->add_option("--dataset", eval_dataset, "MCQ dataset JSON")->required();
    eval->add_option("--out", eval_out, "Write the report as JSON");
    eval->add_flag("--no-context", eval_no_context, "No-context arm");
    eval->add_flag("--no-rerank", eval_no_rerank, "Raw retrieval order");
    eval->add_flag("--fixed", eval_fixed, "Label the arm as fixed-chunked");
    eval->add_flag("--selfextend", eval_selfextend, "Use the extension-capable generator");
    add_common_flags(*eval, flags);

    // ablate
    auto* ablate = app.add_subcommand("ablate", "Run a toggle grid and compare arms");
    std::string ablate_index, ablate_fixed_index, ablate_dataset, ablate_grid, ablate_out;
    bool ablate_no_context = false, ablate_no_rerank = false, ablate_fixed = false,
         ablate_selfextend = false;
    ablate->add_option("--index", ablate_index, "Semantic-chunked index file")->required();
    ablate->add_option("--fixed-index", ablate_fixed_index, "Fixed-chunked index file");
    ablate->add_option("--dataset", ablate_dataset, "MCQ dataset JSON")->required();
    ablate->add_option("--grid", ablate_grid, "Comma list of toggles to vary: SE,RR,SC,MC")
        ->required();
    ablate->add_option("--out", ablate_out, "Write all reports as JSON");
    ablate->add_flag("--no-context", ablate_no_context, "Base arm: no context");
    ablate->add_flag("--no-rerank", ablate_no_rerank, "Base arm: raw retrieval order");
    ablate->add_flag("--fixed", ablate_fixed, "Base arm: fixed chunking");
    ablate->add_flag("--selfextend", ablate_selfextend, "Base arm: extended generator");
    add_common_flags(*ablate, flags);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a planted demo corpus and question set");
    std::string synth_out = "demo";
    std::uint64_t synth_seed = 1;
    std::size_t synth_docs = 20, synth_questions = 60;
    synth->add_option("--out-dir", synth_out, "Output directory (corpus/ and questions.json)");
    synth->add_option("--seed", synth_seed, "Corpus seed");
    synth->add_option("--docs", synth_docs, "Number of documents");
    synth->add_option("--questions", synth_questions, "Number of questions");

    // chunk-inspect
    auto* inspect = app.add_subcommand("chunk-inspect", "Dump chunks as JSON lines");
    std::string inspect_corpus, inspect_doc;
    bool inspect_fixed = false;
    inspect->add_option("--corpus", inspect_corpus, "Corpus directory or JSON-lines file")
        ->required();
    inspect->add_option("--doc", inspect_doc, "Only this document id");
    inspect->add_flag("--fixed", inspect_fixed, "Use fixed-size chunking");
    add_common_flags(*inspect, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        const PipelineConfig config = resolve_config(config_path, flags);
        if (ingest->parsed()) {
            return run_ingest(config, corpus_path, index_out, ingest_fixed);
        }
        if (query->parsed()) {
            return run_query(config, query_index, question, query_options, query_no_context,
                             query_no_rerank, query_json);
        }
        if (eval->parsed()) {
            const auto arm = base_ablation(config, eval_no_context, eval_no_rerank, eval_fixed,
                                           eval_selfextend);
            return run_eval_cmd(config, eval_index, eval_dataset, arm, eval_out);
        }
        if (ablate->parsed()) {
            const auto base = base_ablation(config, ablate_no_context, ablate_no_rerank,
                                            ablate_fixed, ablate_selfextend);
            return run_ablate_cmd(config, ablate_index, ablate_fixed_index, ablate_dataset,
                                  ablate_grid, base, ablate_out);
        }
        if (synth->parsed()) {
            return run_synth(synth_seed, synth_docs, synth_questions, synth_out);
        }
        if (inspect->parsed()) {
            return run_chunk_inspect(config, inspect_corpus, inspect_fixed, inspect_doc);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
