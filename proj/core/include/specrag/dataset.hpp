#pragma once

#include "specrag/prompt.hpp"

#include <filesystem>
#include <vector>

namespace specrag {

/// Reads MCQ items from a JSON file: either a top-level array of item objects
/// or an object whose values are items (iterated in file order). Each item is
///   {"question": ..., "options": [...], "answer": <1-based int | "option k">,
///    "category": ...?}
/// Answers are normalized to 0-based indices; malformed items raise
/// Error{SchemaError} naming the item position.
std::vector<MCQItem> load_mcq_dataset(const std::filesystem::path& path);

void save_mcq_dataset(const std::vector<MCQItem>& items, const std::filesystem::path& path);

} // namespace specrag
