#include "specrag/chunker.hpp"
#include "specrag/embedder.hpp"
#include "specrag/lora.hpp"
#include "specrag/reranker.hpp"
#include "specrag/selfextend.hpp"
#include "specrag/synth_corpus.hpp"
#include "specrag/vector_index.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace specrag;

EmbeddingVector random_unit(std::mt19937_64& rng, std::size_t dims) {
    std::normal_distribution<double> dist;
    std::vector<double> raw(dims);
    double sq = 0.0;
    for (auto& v : raw) {
        v = dist(rng);
        sq += v * v;
    }
    EmbeddingVector e;
    for (double v : raw) e.values.push_back(static_cast<float>(v / std::sqrt(sq)));
    return e;
}

void BM_DeterministicEmbed(benchmark::State& state) {
    std::string text;
    for (int i = 0; i < 64; ++i) text += "token" + std::to_string(i % 23) + " ";
    for (auto _ : state) {
        benchmark::DoNotOptimize(deterministic_embed(text, 384));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DeterministicEmbed);

void BM_TopK(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    VectorIndex index(384);
    std::vector<IndexEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        IndexEntry e;
        e.chunk_id = "c" + std::to_string(i);
        e.doc_id = "d";
        e.vector = random_unit(rng, 384);
        entries.push_back(std::move(e));
    }
    index.insert(std::move(entries));
    const auto query = random_unit(rng, 384);
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.top_k(query, 150));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TopK)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SemanticChunk(benchmark::State& state) {
    const auto corpus = synth_corpus(1, 1, 2);
    DeterministicEmbedder embedder(384);
    ChunkingConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(semantic_chunk(corpus.documents[0], embedder, config));
    }
}
BENCHMARK(BM_SemanticChunk);

void BM_Bm25Rerank(benchmark::State& state) {
    std::vector<std::string> texts;
    for (int i = 0; i < 150; ++i) {
        std::string t;
        for (int w = 0; w < 40; ++w) t += "w" + std::to_string((i * 7 + w) % 97) + " ";
        texts.push_back(std::move(t));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(bm25_scores("w3 w17 w42 w80", texts));
    }
    state.SetItemsProcessed(state.iterations() * texts.size());
}
BENCHMARK(BM_Bm25Rerank);

void BM_Attention(benchmark::State& state) {
    const std::size_t len = static_cast<std::size_t>(state.range(0));
    const bool extended = state.range(1) != 0;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> dist;
    Matrix q(len, 16), k(len, 16), v(len, 16);
    for (auto& x : q.data) x = dist(rng);
    for (auto& x : k.data) x = dist(rng);
    for (auto& x : v.data) x = dist(rng);

    AttentionConfig config;
    config.n_heads = 1;
    config.head_dim = 16;
    config.pretrain_window = 2048;
    config.neighbor_window = 1024;
    config.group_size = 8;
    config.extended_window = 8192;

    for (auto _ : state) {
        if (extended) {
            benchmark::DoNotOptimize(selfextend_attention(q, k, v, config));
        } else {
            benchmark::DoNotOptimize(standard_causal_attention(q, k, v));
        }
    }
}
BENCHMARK(BM_Attention)->Args({512, 0})->Args({512, 1})->Args({2048, 1})->Args({4096, 1});

void BM_LoraStep(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist(0.0, 0.1);
    Matrix w0(64, 64);
    for (auto& x : w0.data) x = dist(rng);
    auto adapter = make_lora_adapter(std::move(w0), 32, 64.0);
    for (auto& x : adapter.A.data) x = dist(rng);

    MicroBatch batch;
    for (int e = 0; e < 32; ++e) {
        std::vector<double> in(64), up(64);
        for (auto& x : in) x = dist(rng);
        for (auto& x : up) x = dist(rng);
        batch.inputs.push_back(std::move(in));
        batch.upstream_grads.push_back(std::move(up));
    }
    TrainConfig config;
    for (auto _ : state) {
        accumulate_and_step(adapter, {batch}, config);
    }
    state.SetItemsProcessed(state.iterations() * batch.inputs.size());
}
BENCHMARK(BM_LoraStep);

} // namespace

BENCHMARK_MAIN();
