#pragma once

#include "specrag/chunker.hpp"
#include "specrag/prompt.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specrag {

struct SynthQuestion {
    MCQItem item;
    std::string gold_doc_id;
    std::string fact_text;      // the planted fact sentence, verbatim
    std::string gold_chunk_id;  // set only by generators that emit chunks directly
};

struct SynthCorpus {
    std::vector<Document> documents;
    std::vector<SynthQuestion> questions;
};

struct PlantedCorpusSpec {
    std::uint64_t seed = 1;
    std::size_t n_docs = 20;
    std::size_t n_questions = 100;
    std::size_t n_options = 4;
    std::size_t topic_vocab = 14;               // words per topic pool
    std::size_t sentences_per_segment = 6;      // filler sentences per topic segment
    bool straddle_fixed_boundary = false;       // place facts across the fixed-size cut
    std::size_t fixed_size_tokens = 24;         // boundary targeted by the straddle arm
    bool value_only_options = false;            // options carry just the value token
};

/// Deterministic planted corpus: every document is two topic segments drawn
/// from private token pools, each question's fact sentence pairs a unique key
/// token with a unique value token inside a known document, and distractor
/// options come from other documents' facts. Gold evidence is recoverable by
/// construction.
SynthCorpus make_planted_corpus(const PlantedCorpusSpec& spec);

SynthCorpus synth_corpus(std::uint64_t seed, std::size_t n_docs, std::size_t n_questions);

/// Chunk-level corpus that forces a retrieval/re-rank split: per question,
/// decoy chunks repeat one query term so they dominate cosine retrieval,
/// while only the gold chunk carries every query term (and the value), so a
/// term-coverage scorer lifts it. Gold raw rank lands beyond the decoy block.
struct RerankStressSpec {
    std::uint64_t seed = 2;
    std::size_t n_questions = 40;
    std::size_t decoys_per_question = 20;
    std::size_t filler_chunks = 250;
    std::size_t n_options = 4;
    std::size_t term_repeats = 24;   // decoy repetitions of the shared term
    std::size_t gold_pad_tokens = 28;
};

struct RerankStressCorpus {
    std::vector<Chunk> chunks;
    std::vector<SynthQuestion> questions; // gold_chunk_id populated
};

RerankStressCorpus make_rerank_stress_corpus(const RerankStressSpec& spec);

/// Long single-topic document whose sentences embed nearly alike, so semantic
/// chunking emits one oversize chunk of at least min_tokens whitespace tokens.
Document make_long_uniform_document(std::uint64_t seed, std::size_t min_tokens);

/// Gold chunk ids for a chunking of the corpus: the chunk whose text contains
/// the fact sentence verbatim. Empty string when the chunking split the fact.
std::vector<std::string> resolve_gold_chunk_ids(const SynthCorpus& corpus,
                                                const std::vector<Chunk>& chunks);

} // namespace specrag
