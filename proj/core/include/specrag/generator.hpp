#pragma once

#include "specrag/prompt.hpp"
#include "specrag/toy_model.hpp"

#include <memory>
#include <optional>
#include <string>

namespace specrag {

struct GenerationResult {
    std::string text;
    bool window_warning = false; // prompt exceeded the base window but was sent anyway
};

/// Generation contract. Clients with a hard window reject oversize prompts
/// with Error{ContextOverflow}; clients that merely assume a window flag the
/// response instead.
class GeneratorClient {
public:
    virtual ~GeneratorClient() = default;
    virtual GenerationResult generate(const AssembledPrompt& prompt) = 0;
};

/// POST {endpoint}/generate  {"prompt": ..., "max_tokens": ...} -> {"text": ...}
/// The remote window is unknown, so prompts above assumed_window are sent
/// with the warning flag set rather than rejected.
class HttpGenerator final : public GeneratorClient {
public:
    HttpGenerator(std::string endpoint, std::size_t max_tokens = 64,
                  std::size_t assumed_window = 2048, std::size_t timeout_ms = 30000);
    GenerationResult generate(const AssembledPrompt& prompt) override;

private:
    std::string endpoint_;
    std::size_t max_tokens_;
    std::size_t assumed_window_;
    std::size_t timeout_ms_;
};

/// Wraps the toy decoder. Without extension the hard window is the pretrain
/// window; with extension it is the extended window and no warning is raised
/// for prompts beyond the pretrain window, since the mapped-position path
/// absorbs them.
class ToyGenerator final : public GeneratorClient {
public:
    ToyGenerator(ToyDecoderConfig config, bool use_selfextend, std::size_t max_new_tokens = 4);
    GenerationResult generate(const AssembledPrompt& prompt) override;

    const ToyDecoder& decoder() const noexcept { return decoder_; }
    bool extended() const noexcept { return use_selfextend_; }

private:
    ToyDecoder decoder_;
    bool use_selfextend_;
    std::size_t max_new_tokens_;
};

/// Deterministic pipeline test double: each option is scored with the same
/// BM25 formula the lexical re-ranker uses, against the concatenated context
/// texts, and the argmax label "option K" is returned (ties to the lowest
/// index). With no context every score is zero and the tie-break yields
/// "option 1".
std::string stub_generate(const AssembledPrompt& prompt, const MCQItem& item,
                          const std::vector<Chunk>& contexts);

} // namespace specrag
