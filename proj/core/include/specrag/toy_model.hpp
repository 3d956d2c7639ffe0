#pragma once

#include "specrag/matrix.hpp"
#include "specrag/selfextend.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specrag {

/// Desk-scale decoder used to exercise the attention and adaptation paths end
/// to end: byte-bucket vocabulary, a couple of pre-norm blocks, rotary
/// attention that can run in standard or extended mode.
struct ToyDecoderConfig {
    std::size_t n_layers = 2;
    std::size_t vocab_size = 256;
    std::size_t mlp_hidden = 128;
    std::uint64_t seed = 0x7031;
    AttentionConfig attention; // n_heads * head_dim is the model width
};

class ToyDecoder {
public:
    explicit ToyDecoder(ToyDecoderConfig config);

    const ToyDecoderConfig& config() const noexcept { return config_; }
    std::size_t model_dim() const noexcept {
        return config_.attention.n_heads * config_.attention.head_dim;
    }

    /// Stable mapping from a whitespace token to a vocabulary id.
    std::size_t token_id(const std::string& token) const;
    std::vector<std::size_t> encode(const std::string& text) const;

    /// Logits of the final position after a full forward pass. With
    /// use_selfextend the per-head attention uses the mapped-position path,
    /// otherwise the standard rotary path.
    std::vector<double> final_logits(const std::vector<std::size_t>& token_ids,
                                     bool use_selfextend) const;

    /// Greedy decode of max_new_tokens ids, re-running the forward pass per
    /// step (no KV cache at this scale).
    std::vector<std::size_t> greedy_generate(std::vector<std::size_t> token_ids,
                                             std::size_t max_new_tokens,
                                             bool use_selfextend) const;

    /// Printable rendering of generated ids, for deterministic text output.
    static std::string render_ids(const std::vector<std::size_t>& ids);

private:
    struct Block {
        Matrix wq, wk, wv, wo;      // model_dim x model_dim
        Matrix mlp_in, mlp_out;     // model_dim x hidden, hidden x model_dim
        std::vector<double> ln1_gain, ln1_bias, ln2_gain, ln2_bias;
    };

    Matrix forward(const std::vector<std::size_t>& token_ids, bool use_selfextend) const;

    ToyDecoderConfig config_;
    Matrix embedding_;  // vocab x model_dim
    Matrix unembed_;    // model_dim x vocab
    std::vector<Block> blocks_;
    std::vector<double> final_gain_, final_bias_;
};

} // namespace specrag
