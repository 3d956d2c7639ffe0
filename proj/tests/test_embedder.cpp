#include "specrag/embedder.hpp"
#include "specrag/error.hpp"
#include "specrag/stable_hash.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace specrag;
using namespace specrag::testing;

TEST_CASE("deterministic embedder is pure") {
    DeterministicEmbedder embedder(384);
    const auto vecs = embedder.embed({"a", "a"});
    REQUIRE(vecs.size() == 2);
    CHECK(vecs[0].values == vecs[1].values);
}

TEST_CASE("distinct token sets separate") {
    DeterministicEmbedder embedder(384);
    const auto vecs = embedder.embed({"alpha", "beta"});
    CHECK(vecs[0].norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(vecs[1].norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cosine_similarity(vecs[0], vecs[1]) < 1.0);
}

TEST_CASE("frozen regression fixture for a known string") {
    // Recorded once from the stable hash at dims=384; must match bit-exactly
    // on every platform.
    const auto v = deterministic_embed("cell reselection", 384);
    REQUIRE(v.dims() == 384);
    const float half_sqrt2 = 0.707106769f;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (i == 21 || i == 88) {
            CHECK(v.values[i] == half_sqrt2);
        } else {
            CHECK(v.values[i] == 0.0f);
        }
    }
}

TEST_CASE("single token embeds one-hot") {
    const auto v = deterministic_embed("handover", 384);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (i == 207) {
            CHECK(v.values[i] == 1.0f);
        } else {
            CHECK(v.values[i] == 0.0f);
        }
    }
}

TEST_CASE("token order does not matter") {
    const auto a = deterministic_embed("x y", 64);
    const auto b = deterministic_embed("y x", 64);
    CHECK(a.values == b.values);
}

TEST_CASE("token overlap orders cosine similarity") {
    const auto base = deterministic_embed("lte handover", 384);
    const auto super = deterministic_embed("lte handover procedure", 384);
    const auto disjoint = deterministic_embed("ip multimedia subsystem", 384);

    const double sim_super = cosine_similarity(base, super);
    const double sim_disjoint = cosine_similarity(base, disjoint);
    CHECK(sim_super > sim_disjoint);
    CHECK(sim_super == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-6));
    CHECK(sim_disjoint == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("all-stopword text falls back to hashing the raw string") {
    const auto v = deterministic_embed("the of and", 64);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-6));
    std::size_t nonzero = 0;
    for (float x : v.values) nonzero += (x != 0.0f) ? 1 : 0;
    CHECK(nonzero == 1);
}

TEST_CASE("every embedded vector is unit norm") {
    DeterministicEmbedder embedder(96);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::string text;
        const std::size_t words = 1 + rng() % 12;
        for (std::size_t w = 0; w < words; ++w) {
            text += "w" + std::to_string(rng() % 50) + " ";
        }
        const auto v = embedder.embed({text}).front();
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(v.dims() == 96);
    }
}

TEST_CASE("cosine similarity identities") {
    const auto v = deterministic_embed("alpha beta gamma", 64);
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-7));

    EmbeddingVector ex, ey;
    ex.values.assign(16, 0.0f);
    ey.values.assign(16, 0.0f);
    ex.values[2] = 1.0f;
    ey.values[9] = 1.0f;
    CHECK(cosine_similarity(ex, ey) == doctest::Approx(0.0));

    EmbeddingVector a, b;
    a.values.assign(16, 0.0f);
    b.values.assign(16, 0.0f);
    const float inv_sqrt2 = static_cast<float>(1.0 / std::sqrt(2.0));
    a.values[0] = inv_sqrt2;
    a.values[1] = inv_sqrt2;
    b.values[0] = 1.0f;
    CHECK(cosine_similarity(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("cosine similarity is exactly symmetric") {
    std::mt19937_64 rng(17);
    DeterministicEmbedder embedder(64);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = embedder.embed({"w" + std::to_string(rng() % 100) + " q" +
                                       std::to_string(rng() % 100)})
                           .front();
        const auto b = embedder.embed({"z" + std::to_string(rng() % 100)}).front();
        CHECK(cosine_similarity(a, b) == cosine_similarity(b, a));
        CHECK(cosine_similarity(a, b) ==
              doctest::Approx(oracle_cosine(a.values, b.values)).epsilon(1e-12));
    }
}

TEST_CASE("embedder rejects bad inputs") {
    CHECK_THROWS_AS(DeterministicEmbedder(4), Error);
    CHECK_THROWS_AS(deterministic_embed("x", 7), Error);

    DeterministicEmbedder embedder(64);
    try {
        embedder.embed({"fine", ""});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyText);
    }

    EmbeddingVector a, b;
    a.values.assign(8, 0.0f);
    b.values.assign(16, 0.0f);
    try {
        cosine_similarity(a, b);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("http embedder config is validated") {
    EmbedderConfig config;
    config.provider = EmbedderProvider::Http;
    CHECK_THROWS_AS([&] { HttpEmbedder embedder(config); }(), Error); // endpoint missing
}
