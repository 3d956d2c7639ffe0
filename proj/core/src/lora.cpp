#include "specrag/lora.hpp"

#include "specrag/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace specrag {

namespace {

constexpr char kAdapterMagic[4] = {'S', 'R', 'L', 'A'};
constexpr std::uint32_t kAdapterVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    if (std::fwrite(b, 1, 4, f) != 4) raise(ErrorCode::IoError, "adapter write failed");
}

std::uint32_t read_u32(std::FILE* f) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) raise(ErrorCode::IoError, "adapter read failed");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

void write_f32_block(std::FILE* f, const Matrix& m) {
    for (double v : m.data) {
        const float fv = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &fv, 4);
        write_u32(f, bits);
    }
}

void read_f32_block(std::FILE* f, Matrix& m) {
    for (double& v : m.data) {
        const std::uint32_t bits = read_u32(f);
        float fv;
        std::memcpy(&fv, &bits, 4);
        v = static_cast<double>(fv);
    }
}

} // namespace

LoraAdapter make_lora_adapter(Matrix base_weights, std::size_t rank, double alpha) {
    if (rank == 0) raise(ErrorCode::InvalidConfig, "LoRA rank must be positive");
    if (alpha <= 0.0) raise(ErrorCode::InvalidConfig, "LoRA alpha must be positive");
    if (rank > std::min(base_weights.rows, base_weights.cols)) {
        raise(ErrorCode::InvalidConfig, "LoRA rank exceeds min(d, k)");
    }
    LoraAdapter adapter;
    adapter.A = Matrix(rank, base_weights.cols);
    adapter.B = Matrix(base_weights.rows, rank);
    adapter.W0 = std::move(base_weights);
    adapter.alpha = alpha;
    return adapter;
}

void validate_shapes(const LoraAdapter& adapter) {
    if (adapter.A.rows == 0 || adapter.A.rows != adapter.B.cols ||
        adapter.A.cols != adapter.W0.cols || adapter.B.rows != adapter.W0.rows) {
        raise(ErrorCode::ShapeMismatch, "inconsistent adapter shapes");
    }
    if (adapter.rank() > std::min(adapter.d(), adapter.k())) {
        raise(ErrorCode::ShapeMismatch, "adapter rank exceeds min(d, k)");
    }
}

std::vector<double> lora_forward(const LoraAdapter& adapter, std::span<const double> x) {
    validate_shapes(adapter);
    if (x.size() != adapter.k()) {
        raise(ErrorCode::ShapeMismatch, "input length " + std::to_string(x.size()) +
                                            ", adapter expects " + std::to_string(adapter.k()));
    }
    std::vector<double> out = matvec(adapter.W0, x);
    const std::vector<double> ax = matvec(adapter.A, x);
    const double s = adapter.scale();
    for (std::size_t i = 0; i < adapter.d(); ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < adapter.rank(); ++r) acc += adapter.B(i, r) * ax[r];
        out[i] += s * acc;
    }
    return out;
}

Matrix lora_merge(const LoraAdapter& adapter) {
    validate_shapes(adapter);
    Matrix merged = adapter.W0;
    const Matrix ba = matmul(adapter.B, adapter.A);
    const double s = adapter.scale();
    for (std::size_t i = 0; i < merged.data.size(); ++i) {
        merged.data[i] += s * ba.data[i];
    }
    return merged;
}

LoraGradients lora_gradients(const LoraAdapter& adapter, std::span<const double> x,
                             std::span<const double> upstream) {
    validate_shapes(adapter);
    if (x.size() != adapter.k() || upstream.size() != adapter.d()) {
        raise(ErrorCode::ShapeMismatch, "gradient input/upstream lengths do not match adapter");
    }
    const double s = adapter.scale();
    LoraGradients grads;
    grads.grad_A = Matrix(adapter.rank(), adapter.k());
    grads.grad_B = Matrix(adapter.d(), adapter.rank());

    const std::vector<double> ax = matvec(adapter.A, x);                  // r
    const std::vector<double> btu = matvec(transpose(adapter.B), upstream); // r

    add_outer(grads.grad_B, s, upstream, ax);
    add_outer(grads.grad_A, s, btu, x);
    return grads;
}

void validate(const TrainConfig& config) {
    if (config.learning_rate <= 0.0) raise(ErrorCode::InvalidConfig, "learning_rate must be positive");
    if (config.weight_decay < 0.0) raise(ErrorCode::InvalidConfig, "weight_decay must be non-negative");
    if (!(config.dropout >= 0.0 && config.dropout < 1.0)) {
        raise(ErrorCode::InvalidConfig, "dropout must lie in [0, 1)");
    }
    if (config.batch_size == 0) raise(ErrorCode::InvalidConfig, "batch_size must be positive");
    if (config.accumulation_steps == 0) {
        raise(ErrorCode::InvalidConfig, "accumulation_steps must be positive");
    }
}

void accumulate_and_step(LoraAdapter& adapter, const std::vector<MicroBatch>& micro_batches,
                         const TrainConfig& config) {
    validate(config);
    validate_shapes(adapter);
    if (micro_batches.empty()) {
        raise(ErrorCode::InvalidConfig, "accumulate_and_step needs at least one micro-batch");
    }

    Matrix acc_A(adapter.rank(), adapter.k());
    Matrix acc_B(adapter.d(), adapter.rank());

    for (const auto& mb : micro_batches) {
        if (mb.inputs.empty() || mb.inputs.size() != mb.upstream_grads.size()) {
            raise(ErrorCode::InvalidConfig, "micro-batch inputs and upstream grads must pair up");
        }
        Matrix mean_A(adapter.rank(), adapter.k());
        Matrix mean_B(adapter.d(), adapter.rank());
        for (std::size_t e = 0; e < mb.inputs.size(); ++e) {
            const auto g = lora_gradients(adapter, mb.inputs[e], mb.upstream_grads[e]);
            for (std::size_t i = 0; i < mean_A.data.size(); ++i) mean_A.data[i] += g.grad_A.data[i];
            for (std::size_t i = 0; i < mean_B.data.size(); ++i) mean_B.data[i] += g.grad_B.data[i];
        }
        const double inv = 1.0 / static_cast<double>(mb.inputs.size());
        for (std::size_t i = 0; i < acc_A.data.size(); ++i) acc_A.data[i] += mean_A.data[i] * inv;
        for (std::size_t i = 0; i < acc_B.data.size(); ++i) acc_B.data[i] += mean_B.data[i] * inv;
    }

    const double inv_steps = 1.0 / static_cast<double>(micro_batches.size());
    const double lr = config.learning_rate;
    const double wd = config.weight_decay;
    for (std::size_t i = 0; i < adapter.A.data.size(); ++i) {
        adapter.A.data[i] -= lr * (acc_A.data[i] * inv_steps) + lr * wd * adapter.A.data[i];
    }
    for (std::size_t i = 0; i < adapter.B.data.size(); ++i) {
        adapter.B.data[i] -= lr * (acc_B.data[i] * inv_steps) + lr * wd * adapter.B.data[i];
    }
}

void save_adapter(const LoraAdapter& adapter, const std::filesystem::path& path) {
    validate_shapes(adapter);
    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) raise(ErrorCode::IoError, "cannot open for writing: " + path.string());

    if (std::fwrite(kAdapterMagic, 1, 4, file.get()) != 4) {
        raise(ErrorCode::IoError, "adapter write failed");
    }
    write_u32(file.get(), kAdapterVersion);
    write_u32(file.get(), static_cast<std::uint32_t>(adapter.d()));
    write_u32(file.get(), static_cast<std::uint32_t>(adapter.k()));
    write_u32(file.get(), static_cast<std::uint32_t>(adapter.rank()));
    const float alpha = static_cast<float>(adapter.alpha);
    std::uint32_t alpha_bits;
    std::memcpy(&alpha_bits, &alpha, 4);
    write_u32(file.get(), alpha_bits);
    write_f32_block(file.get(), adapter.A);
    write_f32_block(file.get(), adapter.B);
    if (std::fflush(file.get()) != 0) raise(ErrorCode::IoError, "flush failed for " + path.string());
}

LoraAdapter load_adapter(Matrix base_weights, const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) raise(ErrorCode::IoError, "cannot open for reading: " + path.string());

    char magic[4];
    if (std::fread(magic, 1, 4, file.get()) != 4 || std::memcmp(magic, kAdapterMagic, 4) != 0) {
        raise(ErrorCode::FormatVersionMismatch, "bad adapter magic in " + path.string());
    }
    const std::uint32_t version = read_u32(file.get());
    if (version != kAdapterVersion) {
        raise(ErrorCode::FormatVersionMismatch,
              "unsupported adapter version " + std::to_string(version));
    }
    const std::uint32_t d = read_u32(file.get());
    const std::uint32_t k = read_u32(file.get());
    const std::uint32_t r = read_u32(file.get());
    const std::uint32_t alpha_bits = read_u32(file.get());
    float alpha;
    std::memcpy(&alpha, &alpha_bits, 4);

    if (d != base_weights.rows || k != base_weights.cols) {
        raise(ErrorCode::ShapeMismatch, "adapter file shape does not match base weights");
    }
    LoraAdapter adapter = make_lora_adapter(std::move(base_weights), r, static_cast<double>(alpha));
    read_f32_block(file.get(), adapter.A);
    read_f32_block(file.get(), adapter.B);
    return adapter;
}

double softmax_cross_entropy(std::span<const double> logits, std::size_t target,
                             std::vector<double>& grad_out) {
    if (target >= logits.size()) raise(ErrorCode::InvalidConfig, "cross-entropy target out of range");
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double v : logits) denom += std::exp(v - max_logit);

    grad_out.resize(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        grad_out[i] = std::exp(logits[i] - max_logit) / denom;
    }
    const double loss = -std::log(grad_out[target]);
    grad_out[target] -= 1.0;
    return loss;
}

} // namespace specrag
