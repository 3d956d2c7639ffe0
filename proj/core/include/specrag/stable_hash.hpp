#pragma once

#include <cstdint>
#include <string_view>

namespace specrag {

// Seed for every stable hash in the project. Fixtures and on-disk checksums
// depend on this value; changing it invalidates both.
inline constexpr std::uint64_t kStableHashSeed = 0x5370656352414721ULL; // "SpecRAG!"

/// FNV-1a over bytes, folded with the fixed project seed. Platform- and
/// process-independent, unlike std::hash.
std::uint64_t stable_hash64(std::string_view bytes, std::uint64_t seed = kStableHashSeed);

/// Incremental variant for streaming checksums.
class StableHasher {
public:
    void update(const void* data, std::size_t len);
    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL ^ kStableHashSeed;
};

} // namespace specrag
