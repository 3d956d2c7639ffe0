#pragma once

#include "specrag/matrix.hpp"

#include <cstddef>

namespace specrag {

struct AttentionConfig {
    std::size_t n_heads = 4;
    std::size_t head_dim = 16;
    std::size_t pretrain_window = 2048;  // L_p: largest position seen in pretraining
    std::size_t neighbor_window = 1024;  // w_n: exact relative positions within this span
    std::size_t group_size = 8;          // G: divisor for distant relative positions
    std::size_t extended_window = 8192;  // L_e: usable context after extension
};

/// A config is admissible when every mapped relative position stays inside
/// the pretraining range: (L_e - w_n)/G + w_n <= L_p, with w_n < L_p, G >= 1.
bool selfextend_admissible(const AttentionConfig& config);
void validate(const AttentionConfig& config);

/// Bi-level position mapping. Relative distances below the neighbor window
/// pass through unchanged; beyond it they are floored into groups of G and
/// shifted by w_n - floor(w_n/G) so the two regimes join without gap or
/// overlap at rel == w_n.
std::size_t selfextend_position_map(std::size_t query_pos, std::size_t key_pos,
                                    std::size_t neighbor_window, std::size_t group_size);

/// Reference causal attention with rotary phases at the true positions.
/// Q, K, V are one head's L x head_dim matrices; head_dim must be even.
Matrix standard_causal_attention(const Matrix& q, const Matrix& k, const Matrix& v);

/// Causal attention where each (i, j) pair's rotary phase is evaluated at the
/// mapped relative position, so sequences up to the extended window reuse only
/// phases the pretraining range covers. Neighbor and grouped scores are merged
/// per row before a single softmax.
Matrix selfextend_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                            const AttentionConfig& config);

} // namespace specrag
