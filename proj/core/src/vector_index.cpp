#include "specrag/vector_index.hpp"

#include "specrag/error.hpp"
#include "specrag/stable_hash.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <memory>

#include <json.hpp>

namespace specrag {

namespace {

// File layout, all integers little-endian:
//   magic "SRIX" | u32 version | u32 dims | u64 count | u64 meta_bytes | u64 checksum
//   meta_bytes of JSON-lines entry metadata, one line per entry
//   count * dims * 4 bytes of packed float32 vector data
// The checksum (stable 64-bit hash) covers the metadata and vector sections.
constexpr char kMagic[4] = {'S', 'R', 'I', 'X'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8 + 8;

void put_u32(unsigned char* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}
void put_u64(unsigned char* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}
std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}
std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void put_f32(unsigned char* p, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(p, bits);
}
float get_f32(const unsigned char* p) {
    const std::uint32_t bits = get_u32(p);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

VectorIndex::VectorIndex(std::size_t dims) : dims_(dims) {
    if (dims == 0) raise(ErrorCode::InvalidConfig, "index dims must be positive");
}

void VectorIndex::insert(std::vector<IndexEntry> batch) {
    std::unordered_set<std::string> batch_ids;
    for (const auto& e : batch) {
        if (e.vector.dims() != dims_) {
            raise(ErrorCode::DimensionMismatch,
                  "entry " + e.chunk_id + " has " + std::to_string(e.vector.dims()) +
                      " dims, index expects " + std::to_string(dims_));
        }
        if (ids_.count(e.chunk_id) || !batch_ids.insert(e.chunk_id).second) {
            raise(ErrorCode::DuplicateChunkId, "chunk_id already present: " + e.chunk_id);
        }
    }
    entries_.reserve(entries_.size() + batch.size());
    for (auto& e : batch) {
        ids_.insert(e.chunk_id);
        entries_.push_back(std::move(e));
    }
}

std::vector<SearchHit> VectorIndex::top_k(const EmbeddingVector& query, std::size_t k) const {
    if (entries_.empty()) raise(ErrorCode::EmptyIndex, "top_k on an empty index");
    if (query.dims() != dims_) {
        raise(ErrorCode::DimensionMismatch, "query dims " + std::to_string(query.dims()) +
                                                " vs index dims " + std::to_string(dims_));
    }
    if (k == 0) raise(ErrorCode::InvalidConfig, "k must be positive");

    std::vector<SearchHit> hits;
    hits.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        hits.push_back({i, cosine_similarity(query, entries_[i].vector)});
    }
    const std::size_t take = std::min(k, hits.size());
    auto better = [](const SearchHit& a, const SearchHit& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.entry_index < b.entry_index;
    };
    std::partial_sort(hits.begin(), hits.begin() + take, hits.end(), better);
    hits.resize(take);
    return hits;
}

void VectorIndex::save(const std::filesystem::path& path) const {
    FilePtr file(std::fopen(path.string().c_str(), "wb+"));
    if (!file) raise(ErrorCode::IoError, "cannot open for writing: " + path.string());

    std::string meta;
    for (const auto& e : entries_) {
        nlohmann::json line;
        line["chunk_id"] = e.chunk_id;
        line["doc_id"] = e.doc_id;
        line["text"] = e.text;
        meta += line.dump();
        meta += '\n';
    }

    // Header goes out with a zero checksum, vectors are streamed while
    // hashing, then the checksum field is patched in place.
    unsigned char header[kHeaderBytes];
    std::memcpy(header, kMagic, 4);
    put_u32(header + 4, kFormatVersion);
    put_u32(header + 8, static_cast<std::uint32_t>(dims_));
    put_u64(header + 12, static_cast<std::uint64_t>(entries_.size()));
    put_u64(header + 20, static_cast<std::uint64_t>(meta.size()));
    put_u64(header + 28, 0);

    if (std::fwrite(header, 1, kHeaderBytes, file.get()) != kHeaderBytes ||
        std::fwrite(meta.data(), 1, meta.size(), file.get()) != meta.size()) {
        raise(ErrorCode::IoError, "short write to " + path.string());
    }

    StableHasher hasher;
    hasher.update(meta.data(), meta.size());

    std::vector<unsigned char> row(dims_ * 4);
    for (const auto& e : entries_) {
        for (std::size_t d = 0; d < dims_; ++d) {
            put_f32(row.data() + d * 4, e.vector.values[d]);
        }
        hasher.update(row.data(), row.size());
        if (std::fwrite(row.data(), 1, row.size(), file.get()) != row.size()) {
            raise(ErrorCode::IoError, "short write to " + path.string());
        }
    }

    unsigned char checksum[8];
    put_u64(checksum, hasher.digest());
    if (std::fseek(file.get(), 28, SEEK_SET) != 0 ||
        std::fwrite(checksum, 1, 8, file.get()) != 8 || std::fflush(file.get()) != 0) {
        raise(ErrorCode::IoError, "cannot finalize " + path.string());
    }
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) raise(ErrorCode::IoError, "cannot open for reading: " + path.string());

    unsigned char header[kHeaderBytes];
    if (std::fread(header, 1, kHeaderBytes, file.get()) != kHeaderBytes) {
        raise(ErrorCode::ChecksumMismatch, "truncated header in " + path.string());
    }
    if (std::memcmp(header, kMagic, 4) != 0) {
        raise(ErrorCode::FormatVersionMismatch, "bad magic in " + path.string());
    }
    const std::uint32_t version = get_u32(header + 4);
    if (version != kFormatVersion) {
        raise(ErrorCode::FormatVersionMismatch,
              "unsupported index format version " + std::to_string(version));
    }
    const std::size_t dims = get_u32(header + 8);
    const std::uint64_t count = get_u64(header + 12);
    const std::uint64_t meta_bytes = get_u64(header + 20);
    const std::uint64_t stored_checksum = get_u64(header + 28);

    if (dims == 0) {
        raise(ErrorCode::FormatVersionMismatch, "zero-dimension index in " + path.string());
    }

    std::string meta(meta_bytes, '\0');
    if (meta_bytes > 0 && std::fread(meta.data(), 1, meta_bytes, file.get()) != meta_bytes) {
        raise(ErrorCode::ChecksumMismatch, "truncated metadata in " + path.string());
    }
    StableHasher hasher;
    hasher.update(meta.data(), meta.size());

    std::vector<IndexEntry> batch;
    batch.reserve(count);
    std::size_t pos = 0;
    std::vector<unsigned char> row(dims * 4);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto eol = meta.find('\n', pos);
        if (eol == std::string::npos) {
            raise(ErrorCode::ChecksumMismatch, "metadata line count mismatch in " + path.string());
        }
        nlohmann::json line;
        try {
            line = nlohmann::json::parse(meta.substr(pos, eol - pos));
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::FormatVersionMismatch,
                  "unreadable metadata line " + std::to_string(i) + ": " + e.what());
        }
        pos = eol + 1;

        if (std::fread(row.data(), 1, row.size(), file.get()) != row.size()) {
            raise(ErrorCode::ChecksumMismatch, "truncated vector block in " + path.string());
        }
        hasher.update(row.data(), row.size());

        IndexEntry entry;
        entry.chunk_id = line.at("chunk_id").get<std::string>();
        entry.doc_id = line.at("doc_id").get<std::string>();
        entry.text = line.at("text").get<std::string>();
        entry.vector.values.resize(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            entry.vector.values[d] = get_f32(row.data() + d * 4);
        }
        batch.push_back(std::move(entry));
    }
    if (hasher.digest() != stored_checksum) {
        raise(ErrorCode::ChecksumMismatch, "checksum mismatch in " + path.string());
    }

    VectorIndex index(dims);
    index.insert(std::move(batch));
    return index;
}

} // namespace specrag
