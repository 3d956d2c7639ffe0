#include "specrag/chunker.hpp"
#include "specrag/error.hpp"
#include "specrag/synth_corpus.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace specrag;
using namespace specrag::testing;

namespace {

Document make_doc(std::string text) {
    Document d;
    d.id = "doc";
    d.text = std::move(text);
    return d;
}

bool reconstructs(const std::vector<Chunk>& chunks, std::size_t n_sentences) {
    std::size_t expected = 0;
    for (const auto& c : chunks) {
        if (c.range_start != expected) return false;
        if (c.range_end < c.range_start) return false;
        expected = c.range_end + 1;
    }
    return expected == n_sentences;
}

} // namespace

TEST_CASE("split_sentences handles plain terminated prose") {
    const std::string text = "A cell reselects. The UE measures RSRP.";
    const auto s = split_sentences(text);
    REQUIRE(s.size() == 2);
    CHECK(s[0].text == "A cell reselects.");
    CHECK(s[1].text == "The UE measures RSRP.");
    for (const auto& sent : s) {
        CHECK(text.substr(sent.begin, sent.end - sent.begin) == sent.text);
    }
}

TEST_CASE("split_sentences keeps untermininated text as one sentence") {
    const auto s = split_sentences("One sentence without terminator");
    REQUIRE(s.size() == 1);
    CHECK(s[0].text == "One sentence without terminator");
}

TEST_CASE("split_sentences golden case: dotted numerals never split a token") {
    const auto s = split_sentences("See 3GPP TS 38.331 v16.1.0. Next sentence.");
    REQUIRE(s.size() == 2);
    CHECK(s[0].text == "See 3GPP TS 38.331 v16.1.0.");
    CHECK(s[1].text == "Next sentence.");
}

TEST_CASE("split_sentences guards common abbreviations") {
    const auto s = split_sentences("Values differ, e.g. RSRP thresholds. Next rule applies.");
    REQUIRE(s.size() == 2);
    CHECK(s[0].text == "Values differ, e.g. RSRP thresholds.");
}

TEST_CASE("split_sentences treats newlines as hard boundaries") {
    const auto s = split_sentences("5.3.2 Cell reselection\nThe UE shall apply ranking.");
    REQUIRE(s.size() == 2);
    CHECK(s[0].text == "5.3.2 Cell reselection");
}

TEST_CASE("split_sentences needs a semicolon followed by an uppercase start") {
    const auto s = split_sentences("First clause; Second clause starts here; but not here.");
    REQUIRE(s.size() == 2);
    CHECK(s[0].text == "First clause;");
}

TEST_CASE("split_sentences rejects whitespace-only input") {
    CHECK_THROWS_AS(split_sentences("   \n\t  "), Error);
    try {
        split_sentences("");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyDocument);
    }
}

TEST_CASE("sentence spans are disjoint, ordered, and cover non-whitespace") {
    const std::string text = "Alpha beta.  Gamma delta!\nEpsilon zeta; Eta theta.";
    const auto s = split_sentences(text);
    std::size_t prev_end = 0;
    for (const auto& sent : s) {
        CHECK(sent.begin >= prev_end);
        CHECK(sent.end > sent.begin);
        prev_end = sent.end;
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
        bool covered = false;
        for (const auto& sent : s) covered |= (i >= sent.begin && i < sent.end);
        CHECK(covered);
    }
}

TEST_CASE("build_windows forms clamped forward windows") {
    const auto sentences = split_sentences("A one. B two. C three. D four. E five.");
    REQUIRE(sentences.size() == 5);

    const auto windows = build_windows(sentences, 3);
    REQUIRE(windows.size() == 5);
    const std::size_t expected[5][2] = {{0, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 4}};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(windows[i].start == expected[i][0]);
        CHECK(windows[i].end == expected[i][1]);
    }
    CHECK(windows[0].text == "A one. B two. C three.");
}

TEST_CASE("build_windows clamps short documents and handles buffer one") {
    const auto one = build_windows(split_sentences("Only sentence."), 3);
    REQUIRE(one.size() == 1);
    CHECK(one[0].start == 0);
    CHECK(one[0].end == 0);

    const auto four = build_windows(split_sentences("A a. B b. C c. D d."), 1);
    REQUIRE(four.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(four[i].start == i);
        CHECK(four[i].end == i);
    }
}

TEST_CASE("build_windows rejects zero buffer") {
    const auto sentences = split_sentences("A one. B two.");
    CHECK_THROWS_AS(build_windows(sentences, 0), Error);
}

TEST_CASE("consecutive_dissimilarities matches hand values and the oracle") {
    DeterministicEmbedder embedder(64);
    const auto same = embedder.embed({"alpha beta", "alpha beta"});
    const auto d_same = consecutive_dissimilarities(same);
    REQUIRE(d_same.size() == 1);
    // float32 storage leaves the norm within 1e-7 of one, not exact.
    CHECK(std::abs(d_same[0]) < 1e-6);

    // Orthogonal unit vectors, built directly.
    EmbeddingVector ex, ey;
    ex.values.assign(8, 0.0f);
    ey.values.assign(8, 0.0f);
    ex.values[0] = 1.0f;
    ey.values[3] = 1.0f;
    const auto d_orth = consecutive_dissimilarities({ex, ey});
    REQUIRE(d_orth.size() == 1);
    CHECK(d_orth[0] == doctest::Approx(1.0));

    std::mt19937_64 rng(7);
    std::vector<EmbeddingVector> vecs;
    for (int i = 0; i < 3; ++i) {
        std::normal_distribution<double> dist;
        std::vector<double> raw(16);
        double sq = 0.0;
        for (auto& v : raw) {
            v = dist(rng);
            sq += v * v;
        }
        EmbeddingVector e;
        for (double v : raw) e.values.push_back(static_cast<float>(v / std::sqrt(sq)));
        vecs.push_back(std::move(e));
    }
    const auto d = consecutive_dissimilarities(vecs);
    REQUIRE(d.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const double expected = 1.0 - oracle_cosine(vecs[i].values, vecs[i + 1].values);
        CHECK(d[i] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(d[i] >= 0.0);
        CHECK(d[i] <= 2.0);
    }
}

TEST_CASE("consecutive_dissimilarities validates input") {
    EmbeddingVector a, b;
    a.values = {1.0f, 0.0f};
    b.values = {1.0f, 0.0f, 0.0f};
    CHECK_THROWS_AS(consecutive_dissimilarities({a, b}), Error);
    CHECK_THROWS_AS(consecutive_dissimilarities({a}), Error);
}

TEST_CASE("percentile follows the linear-interpolation rule") {
    CHECK(percentile({0.5}, 90.0) == doctest::Approx(0.5));
    CHECK(percentile({0.1, 0.2, 0.3, 0.4, 0.5}, 90.0) == doctest::Approx(0.46));
    CHECK(percentile({0.7, 0.7, 0.7, 0.7}, 35.0) == doctest::Approx(0.7));
    CHECK_THROWS_AS(percentile({}, 50.0), Error);
    CHECK_THROWS_AS(percentile({0.1}, 0.0), Error);
    CHECK_THROWS_AS(percentile({0.1}, 100.0), Error);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> value(0.0, 2.0);
    std::uniform_real_distribution<double> pd(0.5, 99.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> values;
        const std::size_t n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) values.push_back(value(rng));
        const double p = pd(rng);
        CHECK(percentile(values, p) == doctest::Approx(oracle_percentile(values, p)).epsilon(1e-12));
    }
}

TEST_CASE("semantic_chunk degenerate documents become one chunk") {
    DeterministicEmbedder embedder(64);
    ChunkingConfig config;

    const auto single = semantic_chunk(make_doc("Only one sentence here."), embedder, config);
    REQUIRE(single.size() == 1);
    CHECK(single[0].chunk_id == "doc#0");
    CHECK(single[0].range_start == 0);
    CHECK(single[0].range_end == 0);

    // Identical sentences embed identically; zero dissimilarity never exceeds
    // the strict threshold.
    std::string repeated;
    for (int i = 0; i < 6; ++i) repeated += "Same tokens every time. ";
    const auto chunks = semantic_chunk(make_doc(repeated), embedder, config);
    CHECK(chunks.size() == 1);
    CHECK(reconstructs(chunks, 6));
}

TEST_CASE("semantic_chunk matches the independent boundary oracle on a two-topic document") {
    DeterministicEmbedder embedder(384);
    ChunkingConfig config; // percentile 90, buffer 3

    std::string text;
    for (int i = 0; i < 6; ++i) {
        text += "Radio bearer handover measurement cell reselection threshold" +
                std::string(i % 2 == 0 ? " ranking." : " hysteresis.") + " ";
    }
    for (int i = 0; i < 6; ++i) {
        text += "Billing tariff invoice ledger subscriber payment" +
                std::string(i % 2 == 0 ? " account." : " balance.") + " ";
    }
    const auto doc = make_doc(text);
    const auto sentences = split_sentences(doc.text);
    REQUIRE(sentences.size() == 12);

    const auto chunks = semantic_chunk(doc, embedder, config);
    const auto expected = oracle_breakpoints(sentences, embedder, config.buffer_size,
                                             config.breakpoint_percentile);
    CHECK(boundaries_of_chunks(chunks) == expected);
    CHECK(reconstructs(chunks, sentences.size()));
}

TEST_CASE("semantic_chunk boundaries equal the oracle over seeded corpora") {
    DeterministicEmbedder embedder(128);
    ChunkingConfig config;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PlantedCorpusSpec spec;
        spec.seed = seed;
        spec.n_docs = 4;
        spec.n_questions = 8;
        const auto corpus = make_planted_corpus(spec);
        for (const auto& doc : corpus.documents) {
            const auto sentences = split_sentences(doc.text);
            const auto chunks = semantic_chunk(doc, embedder, config);
            const auto expected = oracle_breakpoints(sentences, embedder, config.buffer_size,
                                                     config.breakpoint_percentile);
            CHECK(boundaries_of_chunks(chunks) == expected);
            CHECK(reconstructs(chunks, sentences.size()));
        }
    }
}

TEST_CASE("semantic_chunk with buffer one thresholds per-sentence dissimilarities") {
    DeterministicEmbedder embedder(128);
    ChunkingConfig config;
    config.buffer_size = 1;

    const auto doc = make_doc(
        "Alpha beta gamma delta. Alpha beta gamma epsilon. Zeta eta theta iota. "
        "Zeta eta theta kappa. Lambda mu nu xi. Lambda mu nu omicron.");
    const auto sentences = split_sentences(doc.text);
    const auto chunks = semantic_chunk(doc, embedder, config);
    const auto expected =
        oracle_breakpoints(sentences, embedder, 1, config.breakpoint_percentile);
    CHECK(boundaries_of_chunks(chunks) == expected);
}

TEST_CASE("raising the percentile never adds breakpoints") {
    DeterministicEmbedder embedder(128);
    const auto corpus = make_planted_corpus({.seed = 42, .n_docs = 3, .n_questions = 6});
    for (const auto& doc : corpus.documents) {
        std::size_t prev_chunks = SIZE_MAX;
        for (double p : {50.0, 70.0, 90.0, 97.0}) {
            ChunkingConfig config;
            config.breakpoint_percentile = p;
            const auto chunks = semantic_chunk(doc, embedder, config);
            CHECK(chunks.size() <= prev_chunks);
            prev_chunks = chunks.size();
        }
    }
}

TEST_CASE("semantic_chunk is deterministic") {
    DeterministicEmbedder embedder(128);
    ChunkingConfig config;
    const auto corpus = make_planted_corpus({.seed = 9, .n_docs = 2, .n_questions = 4});
    for (const auto& doc : corpus.documents) {
        const auto a = semantic_chunk(doc, embedder, config);
        const auto b = semantic_chunk(doc, embedder, config);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].chunk_id == b[i].chunk_id);
            CHECK(a[i].text == b[i].text);
            CHECK(a[i].range_start == b[i].range_start);
            CHECK(a[i].range_end == b[i].range_end);
        }
    }
}

TEST_CASE("min_sentences_per_chunk merges short runs without losing sentences") {
    DeterministicEmbedder embedder(128);
    ChunkingConfig config;
    config.min_sentences_per_chunk = 3;
    const auto corpus = make_planted_corpus({.seed = 13, .n_docs = 3, .n_questions = 6});
    for (const auto& doc : corpus.documents) {
        const auto chunks = semantic_chunk(doc, embedder, config);
        const auto sentences = split_sentences(doc.text);
        CHECK(reconstructs(chunks, sentences.size()));
        for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
            CHECK(chunks[i].range_end - chunks[i].range_start + 1 >= 3);
        }
    }
}

TEST_CASE("fixed_chunk splits exact, overlapping, and short documents") {
    const auto doc = make_doc("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9");

    const auto exact = fixed_chunk(doc, 5, 0);
    REQUIRE(exact.size() == 2);
    CHECK(exact[0].text == "t0 t1 t2 t3 t4");
    CHECK(exact[1].text == "t5 t6 t7 t8 t9");

    const auto overlapping = fixed_chunk(doc, 4, 2);
    REQUIRE(overlapping.size() == 4);
    const std::size_t starts[4] = {0, 2, 4, 6};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(overlapping[i].range_start == starts[i]);
        CHECK(overlapping[i].range_end == starts[i] + 3);
    }

    const auto tail = fixed_chunk(make_doc("a b c d e f g h i j k"), 4, 2);
    CHECK(tail.back().range_end == 10); // shorter final window kept

    const auto short_doc = fixed_chunk(make_doc("one two three"), 5, 0);
    REQUIRE(short_doc.size() == 1);
    CHECK(short_doc[0].text == "one two three");
}

TEST_CASE("fixed_chunk covers every token; zero overlap partitions exactly") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        std::string text;
        for (std::size_t i = 0; i < n; ++i) text += "tok" + std::to_string(i) + " ";
        const std::size_t size = 1 + rng() % 8;
        const std::size_t overlap = rng() % size;
        const auto chunks = fixed_chunk(make_doc(text), size, overlap);

        std::vector<bool> covered(n, false);
        for (const auto& c : chunks) {
            for (std::size_t t = c.range_start; t <= c.range_end; ++t) covered[t] = true;
        }
        CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));

        if (overlap == 0) {
            std::size_t expected_start = 0;
            for (const auto& c : chunks) {
                CHECK(c.range_start == expected_start);
                expected_start = c.range_end + 1;
            }
            CHECK(expected_start == n);
        }
    }
}

TEST_CASE("fixed_chunk rejects overlap >= size") {
    CHECK_THROWS_AS(fixed_chunk(make_doc("a b c"), 3, 3), Error);
    try {
        fixed_chunk(make_doc("a b c"), 2, 5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
}
