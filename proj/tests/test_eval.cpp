#include "specrag/eval_harness.hpp"
#include "specrag/dataset.hpp"
#include "specrag/error.hpp"
#include "specrag/synth_corpus.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace specrag;

namespace {

std::filesystem::path write_temp(const char* name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

struct PlantedFixture {
    SynthCorpus corpus;
    VectorIndex index{128};
    DeterministicEmbedder embedder{128};
    LexicalScorer scorer;
    std::vector<MCQItem> dataset;
    std::vector<std::string> gold_ids;

    explicit PlantedFixture(std::uint64_t seed = 21, std::size_t n_docs = 6,
                            std::size_t n_questions = 12) {
        PlantedCorpusSpec spec;
        spec.seed = seed;
        spec.n_docs = n_docs;
        spec.n_questions = n_questions;
        corpus = make_planted_corpus(spec);

        ChunkingConfig chunking;
        std::vector<Chunk> all_chunks;
        for (const auto& doc : corpus.documents) {
            auto chunks = semantic_chunk(doc, embedder, chunking);
            all_chunks.insert(all_chunks.end(), chunks.begin(), chunks.end());
        }
        index.insert(entries_from_chunks(all_chunks, embedder));
        gold_ids = resolve_gold_chunk_ids(corpus, all_chunks);
        for (const auto& q : corpus.questions) dataset.push_back(q.item);
    }
};

} // namespace

TEST_CASE("dataset loader accepts arrays and normalizes answers") {
    const auto path = write_temp("specrag_ds_ok.json", R"([
        {"question": "Q1?", "options": ["a", "b", "c"], "answer": 2, "category": "net"},
        {"question": "Q2?", "options": ["x", "y", "z", "w"], "answer": "option 3"}
    ])");
    const auto items = load_mcq_dataset(path);
    REQUIRE(items.size() == 2);
    CHECK(items[0].answer_index == 1);
    CHECK(items[0].category == "net");
    CHECK(items[1].answer_index == 2);
    CHECK(items[1].category.empty());
    std::filesystem::remove(path);
}

TEST_CASE("dataset loader accepts keyed objects in file order") {
    const auto path = write_temp("specrag_ds_obj.json", R"({
        "question 0": {"question": "Q1?", "options": ["a", "b"], "answer": 1},
        "question 1": {"question": "Q2?", "options": ["c", "d"], "answer": 2}
    })");
    const auto items = load_mcq_dataset(path);
    REQUIRE(items.size() == 2);
    CHECK(items[0].question == "Q1?");
    CHECK(items[1].answer_index == 1);
    std::filesystem::remove(path);
}

TEST_CASE("out-of-range answers raise a schema error naming the item") {
    const auto path = write_temp("specrag_ds_bad.json", R"([
        {"question": "Q1?", "options": ["a", "b"], "answer": 1},
        {"question": "Q2?", "options": ["a", "b"], "answer": 5}
    ])");
    try {
        load_mcq_dataset(path);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
        CHECK(std::string(e.what()).find("item 1") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("missing files and malformed JSON are reported") {
    CHECK_THROWS_AS(load_mcq_dataset("/nonexistent/specrag.json"), Error);
    const auto path = write_temp("specrag_ds_nojson.json", "not json at all");
    CHECK_THROWS_AS(load_mcq_dataset(path), Error);
    std::filesystem::remove(path);
}

TEST_CASE("full pipeline on the planted corpus answers every question") {
    PlantedFixture fx;
    AblationConfig arm; // SC + RR + MC=3
    EvalOptions options;
    options.gold_chunk_ids = fx.gold_ids;

    const auto report = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                                 GeneratorChoice::stub(), options);
    CHECK(report.total == fx.dataset.size());
    CHECK(report.correct == report.total);
    CHECK(report.accuracy() == doctest::Approx(1.0));
    CHECK(report.unparsable == 0);
    CHECK(report.has_recall);
    CHECK(report.recall_at_candidates == doctest::Approx(1.0));
    CHECK(report.recall_at_top_m == doctest::Approx(1.0));
}

TEST_CASE("no-context arm scores exactly the enumerated tie-break baseline") {
    PlantedFixture fx;
    AblationConfig arm;
    arm.use_context = false;

    // The stub answers "option 1" with no context, so accuracy is exactly the
    // fraction of items whose gold index is 0.
    std::size_t expected_correct = 0;
    for (const auto& item : fx.dataset) {
        if (item.answer_index == 0) ++expected_correct;
    }

    const auto report = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                                 GeneratorChoice::stub(), {});
    CHECK(report.correct == expected_correct);
    CHECK(report.correct < report.total); // gold indices are spread round-robin
}

TEST_CASE("dataset order does not change the counters") {
    PlantedFixture fx;
    AblationConfig arm;
    const auto forward = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                                  GeneratorChoice::stub(), {});

    auto reversed = fx.dataset;
    std::reverse(reversed.begin(), reversed.end());
    const auto backward = run_eval(fx.index, reversed, arm, fx.embedder, fx.scorer,
                                   GeneratorChoice::stub(), {});
    CHECK(forward.correct == backward.correct);
    CHECK(forward.unparsable == backward.unparsable);
}

TEST_CASE("parallel evaluation matches the sequential counters") {
    PlantedFixture fx;
    AblationConfig arm;
    EvalOptions sequential;
    EvalOptions parallel;
    parallel.jobs = 4;

    const auto a = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                            GeneratorChoice::stub(), sequential);
    const auto b = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                            GeneratorChoice::stub(), parallel);
    CHECK(a.correct == b.correct);
    CHECK(a.unparsable == b.unparsable);
}

TEST_CASE("identical configs produce identical reports") {
    PlantedFixture fx;
    AblationConfig arm;
    const std::vector<AblationConfig> configs = {arm, arm};
    const auto reports = compare_ablations(&fx.index, nullptr, fx.dataset, configs, fx.embedder,
                                           fx.scorer, GeneratorChoice::stub(), {});
    REQUIRE(reports.size() == 2);
    CHECK(report_to_json(reports[0], false) == report_to_json(reports[1], false));
}

TEST_CASE("per-category accuracy partitions the totals") {
    PlantedFixture fx;
    AblationConfig arm;
    const auto report = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                                 GeneratorChoice::stub(), {});
    std::size_t total = 0, correct = 0;
    for (const auto& [name, stat] : report.per_category) {
        total += stat.total;
        correct += stat.correct;
    }
    CHECK(total == report.total);
    CHECK(correct == report.correct);
}

TEST_CASE("synthetic corpus generation is deterministic") {
    const auto a = synth_corpus(77, 5, 10);
    const auto b = synth_corpus(77, 5, 10);
    REQUIRE(a.documents.size() == b.documents.size());
    for (std::size_t i = 0; i < a.documents.size(); ++i) {
        CHECK(a.documents[i].id == b.documents[i].id);
        CHECK(a.documents[i].text == b.documents[i].text);
    }
    REQUIRE(a.questions.size() == b.questions.size());
    for (std::size_t i = 0; i < a.questions.size(); ++i) {
        CHECK(a.questions[i].item.question == b.questions[i].item.question);
        CHECK(a.questions[i].item.options == b.questions[i].item.options);
        CHECK(a.questions[i].fact_text == b.questions[i].fact_text);
    }

    const auto c = synth_corpus(78, 5, 10);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.documents.size(); ++i) {
        any_diff |= (a.documents[i].text != c.documents[i].text);
    }
    CHECK(any_diff);
}

TEST_CASE("every gold sentence resolves to exactly one semantic chunk") {
    PlantedFixture fx(33, 8, 16);
    for (const auto& id : fx.gold_ids) CHECK_FALSE(id.empty());
}

TEST_CASE("single-question corpus has a verifiable gold chunk") {
    PlantedFixture fx(5, 1, 1);
    REQUIRE(fx.dataset.size() == 1);
    REQUIRE_FALSE(fx.gold_ids[0].empty());

    AblationConfig arm;
    EvalOptions options;
    options.gold_chunk_ids = fx.gold_ids;
    const auto report = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                                 GeneratorChoice::stub(), options);
    CHECK(report.correct == 1);
}

TEST_CASE("report JSON serialization is stable and latency is optional") {
    PlantedFixture fx;
    AblationConfig arm;
    const auto report = run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                                 GeneratorChoice::stub(), {});
    const auto with = report_to_json(report, true);
    const auto without = report_to_json(report, false);
    CHECK(with.find("mean_latency_ms") != std::string::npos);
    CHECK(without.find("mean_latency_ms") == std::string::npos);
    CHECK(without.find("\"accuracy\"") != std::string::npos);

    const auto table = format_report_table({report});
    CHECK(table.find("SE") != std::string::npos);
    CHECK(table.find("1.0000") != std::string::npos);
}

TEST_CASE("run_eval validates the arm and gold alignment") {
    PlantedFixture fx;
    AblationConfig arm;
    EvalOptions options;
    options.gold_chunk_ids = {"only one"};
    CHECK_THROWS_AS(run_eval(fx.index, fx.dataset, arm, fx.embedder, fx.scorer,
                             GeneratorChoice::stub(), options),
                    Error);

    AblationConfig se_arm;
    se_arm.use_selfextend = true;
    GeneratorChoice no_extended;
    no_extended.is_stub = false;
    CHECK_THROWS_AS(run_eval(fx.index, fx.dataset, se_arm, fx.embedder, fx.scorer, no_extended,
                             {}),
                    Error);
}

TEST_CASE("compare_ablations needs two configs and the right indexes") {
    PlantedFixture fx;
    AblationConfig arm;
    CHECK_THROWS_AS(compare_ablations(&fx.index, nullptr, fx.dataset, {arm}, fx.embedder,
                                      fx.scorer, GeneratorChoice::stub(), {}),
                    Error);

    AblationConfig fixed_arm;
    fixed_arm.use_semantic_chunking = false;
    CHECK_THROWS_AS(compare_ablations(&fx.index, nullptr, fx.dataset, {arm, fixed_arm},
                                      fx.embedder, fx.scorer, GeneratorChoice::stub(), {}),
                    Error);
}
