#pragma once

#include "specrag/chunker.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace specrag {

struct PromptTemplate {
    std::string instruction =
        "Answer using only the provided context. Reply with the option number.";
    std::string context_header = "Context:";
    std::string question_header = "Question:";
    std::string options_header = "Options:";
    std::string answer_cue = "Answer:";
};

void validate(const PromptTemplate& tmpl);

struct AssembledPrompt {
    std::string text;
    std::size_t n_contexts_used = 0;
    std::size_t token_estimate = 0; // whitespace-token count of text
};

struct MCQItem {
    std::string question;
    std::vector<std::string> options; // 2 to 5, distinct
    std::size_t answer_index = 0;     // 0-based
    std::string category;             // optional
};

void validate(const MCQItem& item);

/// Renders instruction, the first min(n, |contexts|) contexts as
/// "Context 1:" ... in the given (rerank) order, the question, options
/// labeled "option 1" ... "option m", and the answer cue on the last line.
/// Zero contexts is valid and simply omits the context section.
AssembledPrompt assemble_prompt(const PromptTemplate& tmpl, const std::vector<Chunk>& contexts,
                                const MCQItem& item, std::size_t n_contexts);

/// Case-insensitive first occurrence of "option <digits>"; digits in
/// [1, n_options] map to the 0-based index, anything else raises
/// Error{UnparsableAnswer}. Only the first occurrence is consulted.
std::size_t parse_answer(const std::string& generated, std::size_t n_options);

} // namespace specrag
