#include "specrag/prompt.hpp"

#include "specrag/error.hpp"
#include "specrag/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace specrag {

void validate(const PromptTemplate& tmpl) {
    if (tmpl.instruction.empty() || tmpl.context_header.empty() || tmpl.question_header.empty() ||
        tmpl.options_header.empty() || tmpl.answer_cue.empty()) {
        raise(ErrorCode::InvalidConfig, "every prompt template segment must be non-empty");
    }
}

void validate(const MCQItem& item) {
    if (item.question.empty()) raise(ErrorCode::SchemaError, "question must be non-empty");
    if (item.options.size() < 2 || item.options.size() > 5) {
        raise(ErrorCode::SchemaError, "options must number between 2 and 5");
    }
    std::unordered_set<std::string> seen;
    for (const auto& opt : item.options) {
        if (opt.empty()) raise(ErrorCode::SchemaError, "options must be non-empty");
        if (!seen.insert(opt).second) raise(ErrorCode::SchemaError, "options must be distinct");
    }
    if (item.answer_index >= item.options.size()) {
        raise(ErrorCode::SchemaError, "answer_index out of range");
    }
}

AssembledPrompt assemble_prompt(const PromptTemplate& tmpl, const std::vector<Chunk>& contexts,
                                const MCQItem& item, std::size_t n_contexts) {
    validate(tmpl);
    validate(item);
    if (n_contexts == 0) raise(ErrorCode::InvalidConfig, "n_contexts must be positive");

    const std::size_t used = std::min(n_contexts, contexts.size());
    std::string text = tmpl.instruction;
    text += "\n\n";
    if (used > 0) {
        text += tmpl.context_header;
        text += '\n';
        for (std::size_t i = 0; i < used; ++i) {
            text += "Context " + std::to_string(i + 1) + ":\n";
            text += contexts[i].text;
            text += "\n\n";
        }
    }
    text += tmpl.question_header;
    text += '\n';
    text += item.question;
    text += "\n\n";
    text += tmpl.options_header;
    text += '\n';
    for (std::size_t i = 0; i < item.options.size(); ++i) {
        text += "option " + std::to_string(i + 1) + ": " + item.options[i];
        text += '\n';
    }
    text += '\n';
    text += tmpl.answer_cue;

    AssembledPrompt prompt;
    prompt.n_contexts_used = used;
    prompt.token_estimate = count_tokens(text);
    prompt.text = std::move(text);
    return prompt;
}

std::size_t parse_answer(const std::string& generated, std::size_t n_options) {
    if (n_options == 0) raise(ErrorCode::InvalidConfig, "n_options must be positive");

    const std::string lowered = to_lower(generated);
    static const std::string kLabel = "option";
    std::size_t pos = lowered.find(kLabel);
    while (pos != std::string::npos) {
        std::size_t p = pos + kLabel.size();
        while (p < lowered.size() && (lowered[p] == ' ' || lowered[p] == '\t')) ++p;
        if (p < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[p]))) {
            std::size_t value = 0;
            std::size_t digits = 0;
            while (p < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[p])) &&
                   digits < 9) {
                value = value * 10 + static_cast<std::size_t>(lowered[p] - '0');
                ++p;
                ++digits;
            }
            // First occurrence decides; an out-of-range number is unparsable.
            if (value >= 1 && value <= n_options) return value - 1;
            raise(ErrorCode::UnparsableAnswer,
                  "option number " + std::to_string(value) + " outside 1.." +
                      std::to_string(n_options));
        }
        pos = lowered.find(kLabel, pos + 1);
    }
    raise(ErrorCode::UnparsableAnswer, "no \"option <number>\" found in generated text");
}

} // namespace specrag
