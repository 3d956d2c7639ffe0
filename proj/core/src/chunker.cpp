#include "specrag/chunker.hpp"

#include "specrag/error.hpp"
#include "specrag/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string_view>

namespace specrag {

namespace {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
inline bool is_upper_or_digit(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isupper(u) != 0 || std::isdigit(u) != 0;
}
inline bool is_terminator(char c) { return c == '.' || c == '?' || c == '!' || c == ';'; }

// Abbreviations whose trailing dot never ends a sentence.
bool is_guarded_abbreviation(std::string_view text, std::size_t dot_pos) {
    static const std::array<std::string_view, 14> kGuarded = {
        "e.g.", "i.e.", "etc.", "vs.", "cf.", "fig.", "figs.", "tab.",
        "no.", "sec.", "rel.", "eq.", "al.", "resp.",
    };
    std::size_t start = dot_pos;
    while (start > 0) {
        const char c = text[start - 1];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '.') {
            --start;
        } else {
            break;
        }
    }
    if (start == dot_pos) return false;
    const std::string token = to_lower(text.substr(start, dot_pos - start + 1));
    return std::find(kGuarded.begin(), kGuarded.end(), token) != kGuarded.end();
}

} // namespace

void validate(const ChunkingConfig& config) {
    if (!(config.breakpoint_percentile > 0.0 && config.breakpoint_percentile < 100.0)) {
        raise(ErrorCode::InvalidConfig, "breakpoint_percentile must lie in (0, 100)");
    }
    if (config.buffer_size == 0) raise(ErrorCode::InvalidConfig, "buffer_size must be positive");
    if (config.min_sentences_per_chunk == 0) {
        raise(ErrorCode::InvalidConfig, "min_sentences_per_chunk must be positive");
    }
    if (config.fixed_size_tokens == 0) {
        raise(ErrorCode::InvalidConfig, "fixed_size_tokens must be positive");
    }
    if (config.fixed_overlap_tokens >= config.fixed_size_tokens) {
        raise(ErrorCode::InvalidConfig, "fixed_overlap_tokens must be smaller than fixed_size_tokens");
    }
}

std::vector<Sentence> split_sentences(const std::string& text) {
    if (trim_view(text).empty()) {
        raise(ErrorCode::EmptyDocument, "document text is empty after trimming");
    }

    // Boundaries are only evaluated at whitespace runs, so a dot embedded in
    // a token (38.331, v16.1.0) can never split it.
    std::vector<Sentence> sentences;
    const std::size_t n = text.size();
    std::size_t cur_start = n; // n means "no open sentence"
    std::size_t last_nonws = 0;

    auto emit = [&](std::size_t end_inclusive) {
        Sentence s;
        s.index = sentences.size();
        s.begin = cur_start;
        s.end = end_inclusive + 1;
        s.text = text.substr(s.begin, s.end - s.begin);
        sentences.push_back(std::move(s));
        cur_start = n;
    };

    std::size_t i = 0;
    while (i < n) {
        if (!is_space(text[i])) {
            if (cur_start == n) cur_start = i;
            last_nonws = i;
            ++i;
            continue;
        }
        bool has_newline = false;
        std::size_t j = i;
        while (j < n && is_space(text[j])) {
            has_newline |= (text[j] == '\n');
            ++j;
        }
        if (cur_start != n) {
            const char tail = text[last_nonws];
            bool boundary = has_newline;
            if (!boundary && j < n && is_terminator(tail) && is_upper_or_digit(text[j])) {
                boundary = !(tail == '.' && is_guarded_abbreviation(text, last_nonws));
            }
            if (boundary) emit(last_nonws);
        }
        i = j;
    }
    if (cur_start != n) emit(last_nonws);
    return sentences;
}

std::vector<SentenceWindow> build_windows(const std::vector<Sentence>& sentences,
                                          std::size_t buffer_size) {
    if (buffer_size == 0) raise(ErrorCode::InvalidConfig, "buffer_size must be positive");
    if (sentences.empty()) raise(ErrorCode::EmptyInput, "no sentences to window");

    std::vector<SentenceWindow> windows;
    windows.reserve(sentences.size());
    const std::size_t last = sentences.size() - 1;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        SentenceWindow w;
        w.start = i;
        w.end = std::min(i + buffer_size - 1, last);
        w.text = sentences[i].text;
        for (std::size_t s = i + 1; s <= w.end; ++s) {
            w.text += ' ';
            w.text += sentences[s].text;
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

std::vector<double> consecutive_dissimilarities(const std::vector<EmbeddingVector>& embeddings) {
    if (embeddings.size() < 2) {
        raise(ErrorCode::EmptyInput, "need at least two embeddings for dissimilarities");
    }
    std::vector<double> out;
    out.reserve(embeddings.size() - 1);
    for (std::size_t i = 0; i + 1 < embeddings.size(); ++i) {
        out.push_back(1.0 - cosine_similarity(embeddings[i], embeddings[i + 1]));
    }
    return out;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) raise(ErrorCode::EmptyInput, "percentile of an empty list");
    if (!(p > 0.0 && p < 100.0)) raise(ErrorCode::InvalidConfig, "percentile p must lie in (0, 100)");

    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

struct SentenceRun {
    std::size_t first;
    std::size_t last; // inclusive
};

std::vector<Chunk> runs_to_chunks(const Document& doc, const std::vector<Sentence>& sentences,
                                  const std::vector<SentenceRun>& runs) {
    std::vector<Chunk> chunks;
    chunks.reserve(runs.size());
    for (const auto& run : runs) {
        Chunk c;
        c.doc_id = doc.id;
        c.chunk_id = doc.id + "#" + std::to_string(chunks.size());
        c.range_start = run.first;
        c.range_end = run.last;
        c.begin = sentences[run.first].begin;
        c.end = sentences[run.last].end;
        c.text = doc.text.substr(c.begin, c.end - c.begin);
        chunks.push_back(std::move(c));
    }
    return chunks;
}

} // namespace

std::vector<Chunk> semantic_chunk(const Document& doc, Embedder& embedder,
                                  const ChunkingConfig& config) {
    validate(config);
    const auto sentences = split_sentences(doc.text);

    std::vector<SentenceRun> runs;
    if (sentences.size() < 2) {
        runs.push_back({0, sentences.size() - 1});
        return runs_to_chunks(doc, sentences, runs);
    }

    const auto windows = build_windows(sentences, config.buffer_size);
    std::vector<std::string> window_texts;
    window_texts.reserve(windows.size());
    for (const auto& w : windows) window_texts.push_back(w.text);

    const auto embeddings = embedder.embed(window_texts);
    const auto dissim = consecutive_dissimilarities(embeddings);
    const double threshold = percentile(dissim, config.breakpoint_percentile);

    std::size_t run_start = 0;
    for (std::size_t i = 0; i < dissim.size(); ++i) {
        if (dissim[i] > threshold) {
            runs.push_back({run_start, i});
            run_start = i + 1;
        }
    }
    runs.push_back({run_start, sentences.size() - 1});

    if (config.min_sentences_per_chunk > 1 && runs.size() > 1) {
        std::vector<SentenceRun> merged;
        for (const auto& run : runs) {
            const std::size_t len = run.last - run.first + 1;
            if (!merged.empty() && len < config.min_sentences_per_chunk) {
                merged.back().last = run.last;
            } else {
                merged.push_back(run);
            }
        }
        // A short leading run merges into its successor.
        if (merged.size() > 1 &&
            merged.front().last - merged.front().first + 1 < config.min_sentences_per_chunk) {
            merged[1].first = merged[0].first;
            merged.erase(merged.begin());
        }
        runs = std::move(merged);
    }
    return runs_to_chunks(doc, sentences, runs);
}

std::vector<Chunk> fixed_chunk(const Document& doc, std::size_t size_tokens,
                               std::size_t overlap_tokens) {
    if (size_tokens == 0) raise(ErrorCode::InvalidConfig, "size_tokens must be positive");
    if (overlap_tokens >= size_tokens) {
        raise(ErrorCode::InvalidConfig, "overlap_tokens must be smaller than size_tokens");
    }
    const auto tokens = tokenize_spans(doc.text);
    if (tokens.empty()) raise(ErrorCode::EmptyDocument, "document text is empty after trimming");

    std::vector<Chunk> chunks;
    const std::size_t n = tokens.size();
    const std::size_t step = size_tokens - overlap_tokens;
    std::size_t start = 0;
    while (true) {
        const std::size_t stop = std::min(start + size_tokens, n); // exclusive
        Chunk c;
        c.doc_id = doc.id;
        c.chunk_id = doc.id + "#" + std::to_string(chunks.size());
        c.range_start = start;
        c.range_end = stop - 1;
        c.begin = tokens[start].begin;
        c.end = tokens[stop - 1].end;
        c.text = doc.text.substr(c.begin, c.end - c.begin);
        chunks.push_back(std::move(c));
        if (start + size_tokens >= n) break;
        start += step;
    }
    return chunks;
}

std::vector<Chunk> chunk_document(const Document& doc, Embedder& embedder,
                                  const ChunkingConfig& config, bool semantic) {
    if (semantic) return semantic_chunk(doc, embedder, config);
    validate(config);
    return fixed_chunk(doc, config.fixed_size_tokens, config.fixed_overlap_tokens);
}

} // namespace specrag
