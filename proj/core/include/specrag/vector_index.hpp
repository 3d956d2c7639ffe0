#pragma once

#include "specrag/embedder.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace specrag {

struct IndexEntry {
    std::string chunk_id; // unique within the index
    std::string doc_id;
    EmbeddingVector vector;
    std::string text;
};

struct SearchHit {
    std::size_t entry_index = 0; // position in the index, the tie-break order
    double similarity = 0.0;
};

/// Exact cosine index: every query is answered by a full scan, so results
/// always equal the brute-force ranking. Insertion order is preserved and is
/// the deterministic tie-break for equal similarities.
class VectorIndex {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    explicit VectorIndex(std::size_t dims);

    std::size_t dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const IndexEntry& entry(std::size_t i) const { return entries_[i]; }
    const std::vector<IndexEntry>& entries() const noexcept { return entries_; }

    /// Appends a batch. Validation (dimension, duplicate ids, including
    /// duplicates within the batch) happens before any mutation, so a failed
    /// insert leaves the index unchanged.
    void insert(std::vector<IndexEntry> batch);

    /// Exactly min(k, size) hits, similarity non-increasing, ties broken by
    /// insertion order.
    std::vector<SearchHit> top_k(const EmbeddingVector& query, std::size_t k) const;

    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::size_t dims_;
    std::vector<IndexEntry> entries_;
    std::unordered_set<std::string> ids_;
};

} // namespace specrag
