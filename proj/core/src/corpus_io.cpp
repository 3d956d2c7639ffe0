#include "specrag/corpus_io.hpp"

#include "specrag/error.hpp"
#include "specrag/text.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace specrag {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream input(path, std::ios::binary);
    if (!input) raise(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << input.rdbuf();
    return buf.str();
}

std::vector<Document> load_jsonl_corpus(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) raise(ErrorCode::IoError, "cannot open " + path.string());

    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        if (trim_view(line).empty()) continue;
        nlohmann::json node;
        try {
            node = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::SchemaError,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!node.contains("id") || !node["id"].is_string() || !node.contains("text") ||
            !node["text"].is_string()) {
            raise(ErrorCode::SchemaError, path.string() + ":" + std::to_string(line_no) +
                                              ": expected {\"id\", \"text\"}");
        }
        Document doc;
        doc.id = node["id"].get<std::string>();
        doc.source_path = path.string() + ":" + std::to_string(line_no);
        doc.text = node["text"].get<std::string>();
        if (doc.id.empty()) {
            raise(ErrorCode::SchemaError,
                  path.string() + ":" + std::to_string(line_no) + ": empty document id");
        }
        if (!ids.insert(doc.id).second) {
            raise(ErrorCode::SchemaError, "duplicate document id: " + doc.id);
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

} // namespace

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) raise(ErrorCode::IoError, "no .txt files under " + path.string());

        std::vector<Document> docs;
        std::unordered_set<std::string> ids;
        for (const auto& file : files) {
            Document doc;
            doc.id = file.stem().string();
            doc.source_path = file.string();
            doc.text = read_file(file);
            if (!ids.insert(doc.id).second) {
                raise(ErrorCode::SchemaError, "duplicate document id: " + doc.id);
            }
            docs.push_back(std::move(doc));
        }
        return docs;
    }
    if (std::filesystem::is_regular_file(path)) {
        return load_jsonl_corpus(path);
    }
    raise(ErrorCode::IoError, "corpus path does not exist: " + path.string());
}

void save_corpus_jsonl(const std::vector<Document>& docs, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
    for (const auto& doc : docs) {
        nlohmann::json node;
        node["id"] = doc.id;
        node["text"] = doc.text;
        out << node.dump() << '\n';
    }
}

void dump_chunks_jsonl(const std::vector<Chunk>& chunks, std::ostream& out) {
    for (const auto& chunk : chunks) {
        nlohmann::ordered_json node;
        node["doc_id"] = chunk.doc_id;
        node["chunk_id"] = chunk.chunk_id;
        node["sentence_range"] = {chunk.range_start, chunk.range_end};
        node["text"] = chunk.text;
        out << node.dump() << '\n';
    }
}

} // namespace specrag
