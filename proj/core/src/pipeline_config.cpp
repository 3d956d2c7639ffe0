#include "specrag/pipeline_config.hpp"

#include "specrag/error.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace specrag {

namespace {

template <typename T>
void read_field(const nlohmann::json& node, const char* key, T& out) {
    if (node.contains(key)) out = node[key].get<T>();
}

GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "stub") return GeneratorKind::Stub;
    if (name == "toy") return GeneratorKind::Toy;
    if (name == "toy-selfextend") return GeneratorKind::ToySelfExtend;
    if (name == "http") return GeneratorKind::Http;
    raise(ErrorCode::InvalidConfig, "unknown generator kind: " + name);
}

} // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) raise(ErrorCode::IoError, "cannot open config: " + path.string());

    nlohmann::json doc;
    try {
        input >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::InvalidConfig, "config is not valid JSON: " + std::string(e.what()));
    }

    PipelineConfig config;
    if (doc.contains("chunking")) {
        const auto& c = doc["chunking"];
        read_field(c, "breakpoint_percentile", config.chunking.breakpoint_percentile);
        read_field(c, "buffer_size", config.chunking.buffer_size);
        read_field(c, "min_sentences_per_chunk", config.chunking.min_sentences_per_chunk);
        read_field(c, "fixed_size_tokens", config.chunking.fixed_size_tokens);
        read_field(c, "fixed_overlap_tokens", config.chunking.fixed_overlap_tokens);
    }
    if (doc.contains("embedder")) {
        const auto& e = doc["embedder"];
        std::string provider = "deterministic";
        read_field(e, "provider", provider);
        if (provider == "deterministic") {
            config.embedder.provider = EmbedderProvider::Deterministic;
        } else if (provider == "http") {
            config.embedder.provider = EmbedderProvider::Http;
        } else {
            raise(ErrorCode::InvalidConfig, "unknown embedder provider: " + provider);
        }
        read_field(e, "dims", config.embedder.dims);
        read_field(e, "endpoint", config.embedder.endpoint);
        read_field(e, "batch_size", config.embedder.batch_size);
        read_field(e, "timeout_ms", config.embedder.timeout_ms);
    }
    if (doc.contains("rerank")) {
        const auto& r = doc["rerank"];
        std::string scorer = "lexical";
        read_field(r, "scorer", scorer);
        if (scorer == "lexical") {
            config.rerank.scorer = ScorerKind::Lexical;
        } else if (scorer == "http") {
            config.rerank.scorer = ScorerKind::Http;
        } else {
            raise(ErrorCode::InvalidConfig, "unknown scorer kind: " + scorer);
        }
        read_field(r, "top_m", config.rerank.top_m);
        read_field(r, "candidates_k", config.rerank.candidates_k);
        read_field(r, "endpoint", config.rerank.endpoint);
        read_field(r, "timeout_ms", config.rerank.timeout_ms);
    }
    if (doc.contains("attention")) {
        const auto& a = doc["attention"];
        read_field(a, "n_heads", config.attention.n_heads);
        read_field(a, "head_dim", config.attention.head_dim);
        read_field(a, "pretrain_window", config.attention.pretrain_window);
        read_field(a, "neighbor_window", config.attention.neighbor_window);
        read_field(a, "group_size", config.attention.group_size);
        read_field(a, "extended_window", config.attention.extended_window);
    }
    if (doc.contains("prompt")) {
        const auto& p = doc["prompt"];
        read_field(p, "instruction", config.prompt.instruction);
        read_field(p, "context_header", config.prompt.context_header);
        read_field(p, "question_header", config.prompt.question_header);
        read_field(p, "options_header", config.prompt.options_header);
        read_field(p, "answer_cue", config.prompt.answer_cue);
    }
    read_field(doc, "n_contexts", config.n_contexts);
    if (doc.contains("generator")) {
        config.generator = parse_generator_kind(doc["generator"].get<std::string>());
    }
    read_field(doc, "llm_endpoint", config.llm_endpoint);
    read_field(doc, "index_path", config.index_path);
    read_field(doc, "corpus_path", config.corpus_path);
    read_field(doc, "jobs", config.jobs);
    if (doc.contains("seed")) {
        config.seeded = true;
        config.seed = doc["seed"].get<std::uint64_t>();
    }
    return config;
}

void apply_env_overrides(PipelineConfig& config) {
    if (const char* v = std::getenv("SPECRAG_EMBED_ENDPOINT"); v != nullptr && *v != '\0') {
        config.embedder.endpoint = v;
    }
    if (const char* v = std::getenv("SPECRAG_RERANK_ENDPOINT"); v != nullptr && *v != '\0') {
        config.rerank.endpoint = v;
    }
    if (const char* v = std::getenv("SPECRAG_LLM_ENDPOINT"); v != nullptr && *v != '\0') {
        config.llm_endpoint = v;
    }
}

void validate(const PipelineConfig& config) {
    validate(config.chunking);
    validate(config.rerank);
    if (config.n_contexts == 0) raise(ErrorCode::InvalidConfig, "n_contexts must be positive");
    if (config.rerank.top_m < config.n_contexts) {
        raise(ErrorCode::InvalidConfig, "rerank.top_m must be at least n_contexts");
    }
    if (config.embedder.provider == EmbedderProvider::Http && config.embedder.endpoint.empty()) {
        raise(ErrorCode::InvalidConfig, "HTTP embedder requires an endpoint");
    }
    if (config.generator == GeneratorKind::Http && config.llm_endpoint.empty()) {
        raise(ErrorCode::InvalidConfig, "HTTP generator requires llm_endpoint");
    }
    if (config.generator == GeneratorKind::ToySelfExtend) {
        validate(config.attention);
    }
    if (config.jobs == 0) raise(ErrorCode::InvalidConfig, "jobs must be positive");
}

} // namespace specrag
