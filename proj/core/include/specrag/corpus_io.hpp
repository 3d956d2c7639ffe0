#pragma once

#include "specrag/chunker.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace specrag {

/// Loads a corpus from a directory of .txt files (doc id = filename stem,
/// sorted by path for determinism) or a JSON-lines file with one
/// {"id": ..., "text": ...} object per line.
std::vector<Document> load_corpus(const std::filesystem::path& path);

void save_corpus_jsonl(const std::vector<Document>& docs, const std::filesystem::path& path);

/// One JSON line per chunk: {"doc_id", "chunk_id", "sentence_range": [a, b], "text"}.
void dump_chunks_jsonl(const std::vector<Chunk>& chunks, std::ostream& out);

} // namespace specrag
