#pragma once

#include "specrag/embedder.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace specrag {

struct Document {
    std::string id;          // unique within a corpus
    std::string source_path; // provenance only
    std::string text;        // UTF-8 plain text
};

struct Sentence {
    std::size_t index = 0;      // 0-based within the document
    std::string text;           // equals document text sliced at [begin, end)
    std::size_t begin = 0;      // byte offsets into Document::text
    std::size_t end = 0;
};

struct SentenceWindow {
    std::size_t start = 0; // sentence ordinals, inclusive
    std::size_t end = 0;
    std::string text;      // member sentences joined with single spaces
};

struct Chunk {
    std::string doc_id;
    std::string chunk_id;       // doc_id + "#" + running ordinal
    std::string text;           // document text sliced at [begin, end)
    std::size_t range_start = 0; // sentence ordinals for semantic chunks,
    std::size_t range_end = 0;   // token ordinals for fixed-size chunks; inclusive
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct ChunkingConfig {
    double breakpoint_percentile = 90.0; // in (0, 100)
    std::size_t buffer_size = 3;
    std::size_t min_sentences_per_chunk = 1;
    std::size_t fixed_size_tokens = 128;   // fixed-size baseline
    std::size_t fixed_overlap_tokens = 0;  // must stay below fixed_size_tokens
};

void validate(const ChunkingConfig& config);

/// Rule-based segmentation: a sentence ends at '.', '?', '!' or ';' followed
/// by whitespace and an uppercase letter or digit. Dots between digits
/// (section/version numerals like 38.331) and a small abbreviation list never
/// terminate. Any newline is a hard boundary, which keeps headings standalone.
std::vector<Sentence> split_sentences(const std::string& text);

/// Forward-looking window per starting sentence: window i covers
/// [i, min(i + buffer_size - 1, last)], so |windows| == |sentences|.
std::vector<SentenceWindow> build_windows(const std::vector<Sentence>& sentences,
                                          std::size_t buffer_size);

/// Element i is 1 - cos(e_i, e_{i+1}); output length is input length - 1.
std::vector<double> consecutive_dissimilarities(const std::vector<EmbeddingVector>& embeddings);

/// Linear-interpolation percentile: with sorted values v and rank
/// h = (n-1)*p/100, returns v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
double percentile(std::vector<double> values, double p);

/// Breakpoint after sentence i iff the window dissimilarity d_i strictly
/// exceeds the per-document percentile threshold; chunks are the maximal
/// sentence runs between breakpoints. Runs shorter than
/// min_sentences_per_chunk are merged into their neighbor afterwards.
std::vector<Chunk> semantic_chunk(const Document& doc, Embedder& embedder,
                                  const ChunkingConfig& config);

/// Fig.-2-style baseline: whitespace-token windows of size_tokens advancing
/// by (size - overlap); the final window may be shorter and is kept.
std::vector<Chunk> fixed_chunk(const Document& doc, std::size_t size_tokens,
                               std::size_t overlap_tokens);

std::vector<Chunk> chunk_document(const Document& doc, Embedder& embedder,
                                  const ChunkingConfig& config, bool semantic);

} // namespace specrag
