#include "specrag/toy_model.hpp"

#include "specrag/error.hpp"
#include "specrag/stable_hash.hpp"
#include "specrag/text.hpp"

#include <cmath>
#include <random>

namespace specrag {

namespace {

void layer_norm_row(Matrix& x, std::size_t row, const std::vector<double>& gain,
                    const std::vector<double>& bias, std::vector<double>& out) {
    constexpr double kEps = 1e-5;
    const std::size_t dim = x.cols;
    double mean = 0.0;
    for (std::size_t d = 0; d < dim; ++d) mean += x(row, d);
    mean /= static_cast<double>(dim);
    double var = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        const double diff = x(row, d) - mean;
        var += diff * diff;
    }
    var /= static_cast<double>(dim);
    const double inv_std = 1.0 / std::sqrt(var + kEps);
    out.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        out[d] = (x(row, d) - mean) * inv_std * gain[d] + bias[d];
    }
}

Matrix layer_norm(const Matrix& x, const std::vector<double>& gain,
                  const std::vector<double>& bias) {
    Matrix normed = x;
    std::vector<double> row;
    for (std::size_t i = 0; i < x.rows; ++i) {
        layer_norm_row(normed, i, gain, bias, row);
        for (std::size_t d = 0; d < x.cols; ++d) normed(i, d) = row[d];
    }
    return normed;
}

double gelu(double x) {
    return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double stddev) {
    Matrix m(rows, cols);
    std::normal_distribution<double> dist(0.0, stddev);
    for (double& v : m.data) v = dist(rng);
    return m;
}

} // namespace

ToyDecoder::ToyDecoder(ToyDecoderConfig config) : config_(std::move(config)) {
    validate(config_.attention);
    if (config_.n_layers == 0 || config_.vocab_size == 0 || config_.mlp_hidden == 0) {
        raise(ErrorCode::InvalidConfig, "toy decoder needs layers, vocab, and hidden width");
    }
    const std::size_t dim = model_dim();
    std::mt19937_64 rng(config_.seed);
    constexpr double kInitStd = 0.02;

    embedding_ = random_matrix(config_.vocab_size, dim, rng, kInitStd);
    unembed_ = random_matrix(dim, config_.vocab_size, rng, kInitStd);
    blocks_.resize(config_.n_layers);
    for (auto& blk : blocks_) {
        blk.wq = random_matrix(dim, dim, rng, kInitStd);
        blk.wk = random_matrix(dim, dim, rng, kInitStd);
        blk.wv = random_matrix(dim, dim, rng, kInitStd);
        blk.wo = random_matrix(dim, dim, rng, kInitStd);
        blk.mlp_in = random_matrix(dim, config_.mlp_hidden, rng, kInitStd);
        blk.mlp_out = random_matrix(config_.mlp_hidden, dim, rng, kInitStd);
        blk.ln1_gain.assign(dim, 1.0);
        blk.ln1_bias.assign(dim, 0.0);
        blk.ln2_gain.assign(dim, 1.0);
        blk.ln2_bias.assign(dim, 0.0);
    }
    final_gain_.assign(dim, 1.0);
    final_bias_.assign(dim, 0.0);
}

std::size_t ToyDecoder::token_id(const std::string& token) const {
    return static_cast<std::size_t>(stable_hash64(token) % config_.vocab_size);
}

std::vector<std::size_t> ToyDecoder::encode(const std::string& text) const {
    std::vector<std::size_t> ids;
    for (const auto& token : lower_tokens(text)) ids.push_back(token_id(token));
    return ids;
}

Matrix ToyDecoder::forward(const std::vector<std::size_t>& token_ids, bool use_selfextend) const {
    if (token_ids.empty()) raise(ErrorCode::EmptyInput, "toy decoder forward on empty input");
    const std::size_t len = token_ids.size();
    const std::size_t dim = model_dim();
    const std::size_t head_dim = config_.attention.head_dim;
    const std::size_t n_heads = config_.attention.n_heads;

    Matrix x(len, dim);
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t id = token_ids[i] % config_.vocab_size;
        for (std::size_t d = 0; d < dim; ++d) x(i, d) = embedding_(id, d);
    }

    for (const auto& blk : blocks_) {
        const Matrix normed = layer_norm(x, blk.ln1_gain, blk.ln1_bias);
        const Matrix q = matmul(normed, blk.wq);
        const Matrix k = matmul(normed, blk.wk);
        const Matrix v = matmul(normed, blk.wv);

        Matrix attended(len, dim);
        for (std::size_t h = 0; h < n_heads; ++h) {
            Matrix qh(len, head_dim), kh(len, head_dim), vh(len, head_dim);
            const std::size_t off = h * head_dim;
            for (std::size_t i = 0; i < len; ++i) {
                for (std::size_t d = 0; d < head_dim; ++d) {
                    qh(i, d) = q(i, off + d);
                    kh(i, d) = k(i, off + d);
                    vh(i, d) = v(i, off + d);
                }
            }
            const Matrix oh = use_selfextend
                                  ? selfextend_attention(qh, kh, vh, config_.attention)
                                  : standard_causal_attention(qh, kh, vh);
            for (std::size_t i = 0; i < len; ++i) {
                for (std::size_t d = 0; d < head_dim; ++d) attended(i, off + d) = oh(i, d);
            }
        }
        const Matrix projected = matmul(attended, blk.wo);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += projected.data[i];

        const Matrix normed2 = layer_norm(x, blk.ln2_gain, blk.ln2_bias);
        Matrix hidden = matmul(normed2, blk.mlp_in);
        for (double& vv : hidden.data) vv = gelu(vv);
        const Matrix mlp = matmul(hidden, blk.mlp_out);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += mlp.data[i];
    }
    return layer_norm(x, final_gain_, final_bias_);
}

std::vector<double> ToyDecoder::final_logits(const std::vector<std::size_t>& token_ids,
                                             bool use_selfextend) const {
    const Matrix hidden = forward(token_ids, use_selfextend);
    const std::size_t last = hidden.rows - 1;
    std::vector<double> logits(config_.vocab_size, 0.0);
    for (std::size_t t = 0; t < config_.vocab_size; ++t) {
        double acc = 0.0;
        for (std::size_t d = 0; d < hidden.cols; ++d) acc += hidden(last, d) * unembed_(d, t);
        logits[t] = acc;
    }
    return logits;
}

std::vector<std::size_t> ToyDecoder::greedy_generate(std::vector<std::size_t> token_ids,
                                                     std::size_t max_new_tokens,
                                                     bool use_selfextend) const {
    std::vector<std::size_t> generated;
    for (std::size_t step = 0; step < max_new_tokens; ++step) {
        const auto logits = final_logits(token_ids, use_selfextend);
        std::size_t best = 0;
        for (std::size_t t = 1; t < logits.size(); ++t) {
            if (logits[t] > logits[best]) best = t;
        }
        generated.push_back(best);
        token_ids.push_back(best);
    }
    return generated;
}

std::string ToyDecoder::render_ids(const std::vector<std::size_t>& ids) {
    std::string out;
    for (std::size_t id : ids) {
        out.push_back(static_cast<char>(' ' + id % 95)); // printable ASCII
    }
    return out;
}

} // namespace specrag
