#pragma once

#include "specrag/chunker.hpp"
#include "specrag/embedder.hpp"
#include "specrag/prompt.hpp"
#include "specrag/reranker.hpp"
#include "specrag/selfextend.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace specrag {

enum class GeneratorKind { Unset, Stub, Toy, ToySelfExtend, Http };

/// Everything the CLI wires together. Values layer as
/// flag > environment > config file > default; the environment only carries
/// the three service endpoints (SPECRAG_EMBED_ENDPOINT, SPECRAG_RERANK_ENDPOINT,
/// SPECRAG_LLM_ENDPOINT).
struct PipelineConfig {
    ChunkingConfig chunking;
    EmbedderConfig embedder;
    RerankConfig rerank;         // candidates_k = 150, top_m = 15 defaults
    AttentionConfig attention;
    PromptTemplate prompt;

    std::size_t n_contexts = 3;
    GeneratorKind generator = GeneratorKind::Unset;
    std::string llm_endpoint;

    std::string index_path;
    std::string corpus_path;

    bool seeded = false;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void apply_env_overrides(PipelineConfig& config);
void validate(const PipelineConfig& config);

} // namespace specrag
