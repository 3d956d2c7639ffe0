#include "specrag/dataset.hpp"

#include "specrag/error.hpp"
#include "specrag/text.hpp"

#include <cctype>
#include <fstream>

#include <json.hpp>

namespace specrag {

namespace {

std::size_t parse_answer_field(const nlohmann::json& answer, std::size_t n_options,
                               const std::string& where) {
    long long one_based = -1;
    if (answer.is_number_integer()) {
        one_based = answer.get<long long>();
    } else if (answer.is_string()) {
        // Accept "option k" (case-insensitive) or a bare number string.
        const std::string lowered = to_lower(answer.get<std::string>());
        std::size_t pos = 0;
        const std::string kLabel = "option";
        if (lowered.rfind(kLabel, 0) == 0) pos = kLabel.size();
        while (pos < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[pos]))) ++pos;
        if (pos >= lowered.size() || !std::isdigit(static_cast<unsigned char>(lowered[pos]))) {
            raise(ErrorCode::SchemaError, where + ": unrecognized answer string");
        }
        one_based = 0;
        while (pos < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[pos]))) {
            one_based = one_based * 10 + (lowered[pos] - '0');
            ++pos;
        }
    } else {
        raise(ErrorCode::SchemaError, where + ": answer must be an integer or string");
    }
    if (one_based < 1 || static_cast<std::size_t>(one_based) > n_options) {
        raise(ErrorCode::SchemaError,
              where + ": answer " + std::to_string(one_based) + " outside 1.." +
                  std::to_string(n_options));
    }
    return static_cast<std::size_t>(one_based) - 1;
}

MCQItem parse_item(const nlohmann::ordered_json& node, std::size_t position) {
    const std::string where = "item " + std::to_string(position);
    if (!node.is_object()) raise(ErrorCode::SchemaError, where + ": not an object");
    if (!node.contains("question") || !node["question"].is_string()) {
        raise(ErrorCode::SchemaError, where + ": missing question string");
    }
    if (!node.contains("options") || !node["options"].is_array()) {
        raise(ErrorCode::SchemaError, where + ": missing options array");
    }
    if (!node.contains("answer")) raise(ErrorCode::SchemaError, where + ": missing answer");

    MCQItem item;
    item.question = node["question"].get<std::string>();
    for (const auto& opt : node["options"]) {
        if (!opt.is_string()) raise(ErrorCode::SchemaError, where + ": non-string option");
        item.options.push_back(opt.get<std::string>());
    }
    item.answer_index = parse_answer_field(node["answer"], item.options.size(), where);
    if (node.contains("category") && node["category"].is_string()) {
        item.category = node["category"].get<std::string>();
    }
    try {
        validate(item);
    } catch (const Error& e) {
        raise(ErrorCode::SchemaError, where + ": " + e.what());
    }
    return item;
}

} // namespace

std::vector<MCQItem> load_mcq_dataset(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) raise(ErrorCode::IoError, "cannot open dataset: " + path.string());

    nlohmann::ordered_json doc;
    try {
        input >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::SchemaError, "dataset is not valid JSON: " + std::string(e.what()));
    }

    std::vector<MCQItem> items;
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) items.push_back(parse_item(doc[i], i));
    } else if (doc.is_object()) {
        std::size_t i = 0;
        for (const auto& [key, value] : doc.items()) {
            (void)key;
            items.push_back(parse_item(value, i++));
        }
    } else {
        raise(ErrorCode::SchemaError, "dataset must be a JSON array or object of items");
    }
    return items;
}

void save_mcq_dataset(const std::vector<MCQItem>& items, const std::filesystem::path& path) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& item : items) {
        nlohmann::ordered_json node;
        node["question"] = item.question;
        node["options"] = item.options;
        node["answer"] = item.answer_index + 1; // 1-based on disk
        if (!item.category.empty()) node["category"] = item.category;
        doc.push_back(std::move(node));
    }
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write dataset: " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace specrag
