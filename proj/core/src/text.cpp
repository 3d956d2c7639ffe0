#include "specrag/text.hpp"

#include <cctype>

namespace specrag {

namespace {
inline bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}
} // namespace

std::string_view trim_view(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && is_space(s[b])) ++b;
    std::size_t e = s.size();
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
    std::vector<TokenSpan> spans;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_space(text[i])) ++i;
        if (i >= n) break;
        std::size_t start = i;
        while (i < n && !is_space(text[i])) ++i;
        spans.push_back({start, i});
    }
    return spans;
}

std::vector<std::string> lower_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& span : tokenize_spans(text)) {
        out.push_back(to_lower(span.view(text)));
    }
    return out;
}

std::size_t count_tokens(std::string_view text) {
    return tokenize_spans(text).size();
}

} // namespace specrag
