#pragma once

#include "specrag/matrix.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace specrag {

/// Low-rank adapter around frozen base weights: the effective weight is
/// W0 + (alpha/r) * B * A with A (r x k) and B (d x r), so only
/// d*r + r*k parameters train while W0 (d x k) stays fixed.
struct LoraAdapter {
    Matrix W0; // d x k, frozen
    Matrix A;  // r x k
    Matrix B;  // d x r
    double alpha = 64.0;

    std::size_t d() const noexcept { return W0.rows; }
    std::size_t k() const noexcept { return W0.cols; }
    std::size_t rank() const noexcept { return A.rows; }
    double scale() const noexcept { return alpha / static_cast<double>(rank()); }
    std::size_t trainable_parameter_count() const noexcept {
        return d() * rank() + rank() * k();
    }
};

/// Zero-initialized adapter (B = 0), so the initial effective weight is W0.
LoraAdapter make_lora_adapter(Matrix base_weights, std::size_t rank, double alpha);

void validate_shapes(const LoraAdapter& adapter);

/// W0*x + (alpha/r) * B*(A*x); the update is applied as two thin products and
/// B*A is never materialized.
std::vector<double> lora_forward(const LoraAdapter& adapter, std::span<const double> x);

/// The merged weight W0 + (alpha/r) * B*A, materialized.
Matrix lora_merge(const LoraAdapter& adapter);

struct LoraGradients {
    Matrix grad_A; // r x k
    Matrix grad_B; // d x r
};

/// Analytic gradients for a loss whose gradient w.r.t. the layer output is
/// upstream: grad_B = (alpha/r) * upstream * (A*x)^T and
/// grad_A = (alpha/r) * (B^T * upstream) * x^T.
LoraGradients lora_gradients(const LoraAdapter& adapter, std::span<const double> x,
                             std::span<const double> upstream);

struct TrainConfig {
    double learning_rate = 1e-4;
    double weight_decay = 0.01;
    double dropout = 0.05;
    std::size_t batch_size = 32;
    std::size_t accumulation_steps = 1;
};

void validate(const TrainConfig& config);

struct MicroBatch {
    std::vector<std::vector<double>> inputs;         // each of length k
    std::vector<std::vector<double>> upstream_grads; // each of length d
};

/// One optimizer step from accumulated gradients: per-micro-batch mean
/// gradients are averaged across all micro-batches, then A and B take a
/// plain SGD step with decoupled weight decay. W0 never moves. Equal-sized
/// micro-batches make the result independent of how a batch is split.
void accumulate_and_step(LoraAdapter& adapter, const std::vector<MicroBatch>& micro_batches,
                         const TrainConfig& config);

/// Adapter serialization: magic "SRLA", version, d, k, r, alpha, then packed
/// little-endian float32 for A then B. W0 is not part of the file.
void save_adapter(const LoraAdapter& adapter, const std::filesystem::path& path);

/// Restores A, B, rank, and alpha onto the supplied frozen base weights.
LoraAdapter load_adapter(Matrix base_weights, const std::filesystem::path& path);

/// Softmax cross-entropy on a logit vector; returns the loss and fills the
/// upstream gradient (softmax - onehot). The loss shipped for toy training.
double softmax_cross_entropy(std::span<const double> logits, std::size_t target,
                             std::vector<double>& grad_out);

} // namespace specrag
