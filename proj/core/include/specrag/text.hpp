#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace specrag {

struct TokenSpan {
    std::size_t begin = 0; // byte offset into the source text
    std::size_t end = 0;   // half-open
    std::string_view view(std::string_view source) const { return source.substr(begin, end - begin); }
};

std::string_view trim_view(std::string_view s);
std::string to_lower(std::string_view s);

/// Whitespace tokens with byte offsets, in document order.
std::vector<TokenSpan> tokenize_spans(std::string_view text);

/// Lowercased whitespace tokens. The unit used by the deterministic embedder,
/// the lexical scorer, and prompt token estimates.
std::vector<std::string> lower_tokens(std::string_view text);

std::size_t count_tokens(std::string_view text);

} // namespace specrag
