#include "specrag/selfextend.hpp"

#include "specrag/error.hpp"

#include <cmath>
#include <vector>

namespace specrag {

namespace {

constexpr double kRotaryBase = 10000.0;

// Per-pair inverse frequencies theta_m = base^(-2m/head_dim).
std::vector<double> rotary_frequencies(std::size_t head_dim) {
    std::vector<double> freqs(head_dim / 2);
    for (std::size_t m = 0; m < freqs.size(); ++m) {
        freqs[m] = std::pow(kRotaryBase, -2.0 * static_cast<double>(m) /
                                             static_cast<double>(head_dim));
    }
    return freqs;
}

void check_qkv(const Matrix& q, const Matrix& k, const Matrix& v) {
    if (q.rows != k.rows || q.rows != v.rows || q.cols != k.cols || q.cols != v.cols) {
        raise(ErrorCode::ShapeMismatch, "Q, K, V must share one L x head_dim shape");
    }
    if (q.cols == 0 || q.cols % 2 != 0) {
        raise(ErrorCode::ShapeMismatch, "head_dim must be positive and even for rotary phases");
    }
    if (q.rows == 0) raise(ErrorCode::EmptyInput, "attention over an empty sequence");
}

// scores[0..i] hold the causal row; softmax them and accumulate into out row i.
void softmax_row_apply(const std::vector<double>& scores, std::size_t i, const Matrix& v,
                       Matrix& out) {
    double max_score = scores[0];
    for (std::size_t j = 1; j <= i; ++j) max_score = std::max(max_score, scores[j]);
    double denom = 0.0;
    std::vector<double> weights(i + 1);
    for (std::size_t j = 0; j <= i; ++j) {
        weights[j] = std::exp(scores[j] - max_score);
        denom += weights[j];
    }
    for (std::size_t j = 0; j <= i; ++j) {
        const double w = weights[j] / denom;
        for (std::size_t d = 0; d < v.cols; ++d) {
            out(i, d) += w * v(j, d);
        }
    }
}

} // namespace

bool selfextend_admissible(const AttentionConfig& config) {
    if (config.group_size < 1 || config.neighbor_window == 0) return false;
    if (config.neighbor_window >= config.pretrain_window) return false;
    if (config.extended_window < config.neighbor_window) return false;
    // (L_e - w_n)/G + w_n <= L_p, kept in exact integer arithmetic.
    return config.extended_window - config.neighbor_window <=
           (config.pretrain_window - config.neighbor_window) * config.group_size;
}

void validate(const AttentionConfig& config) {
    if (config.n_heads == 0 || config.head_dim == 0 || config.head_dim % 2 != 0) {
        raise(ErrorCode::InvalidConfig, "n_heads must be positive and head_dim positive and even");
    }
    if (!selfextend_admissible(config)) {
        raise(ErrorCode::InadmissibleConfig,
              "mapped positions would exceed the pretraining window; need "
              "(extended - neighbor)/group + neighbor <= pretrain");
    }
}

std::size_t selfextend_position_map(std::size_t query_pos, std::size_t key_pos,
                                    std::size_t neighbor_window, std::size_t group_size) {
    if (key_pos > query_pos) {
        raise(ErrorCode::CausalityViolation, "key position " + std::to_string(key_pos) +
                                                 " is ahead of query position " +
                                                 std::to_string(query_pos));
    }
    if (group_size == 0) raise(ErrorCode::InvalidConfig, "group_size must be >= 1");
    const std::size_t rel = query_pos - key_pos;
    if (rel < neighbor_window) return rel;
    return rel / group_size + neighbor_window - neighbor_window / group_size;
}

Matrix standard_causal_attention(const Matrix& q, const Matrix& k, const Matrix& v) {
    check_qkv(q, k, v);
    const std::size_t len = q.rows;
    const std::size_t dim = q.cols;
    const auto freqs = rotary_frequencies(dim);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dim));

    // Rotate queries and keys by their absolute positions.
    Matrix qr = q;
    Matrix kr = k;
    for (std::size_t pos = 0; pos < len; ++pos) {
        for (std::size_t m = 0; m < freqs.size(); ++m) {
            const double angle = static_cast<double>(pos) * freqs[m];
            const double c = std::cos(angle);
            const double s = std::sin(angle);
            const double q0 = q(pos, 2 * m), q1 = q(pos, 2 * m + 1);
            qr(pos, 2 * m) = q0 * c - q1 * s;
            qr(pos, 2 * m + 1) = q0 * s + q1 * c;
            const double k0 = k(pos, 2 * m), k1 = k(pos, 2 * m + 1);
            kr(pos, 2 * m) = k0 * c - k1 * s;
            kr(pos, 2 * m + 1) = k0 * s + k1 * c;
        }
    }

    Matrix out(len, dim);
    std::vector<double> scores(len);
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += qr(i, d) * kr(j, d);
            scores[j] = dot * inv_sqrt_d;
        }
        softmax_row_apply(scores, i, v, out);
    }
    return out;
}

Matrix selfextend_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                            const AttentionConfig& config) {
    validate(config);
    check_qkv(q, k, v);
    if (q.cols != config.head_dim) {
        raise(ErrorCode::ShapeMismatch, "Q width does not match config.head_dim");
    }
    const std::size_t len = q.rows;
    if (len > config.extended_window) {
        raise(ErrorCode::InadmissibleConfig, "sequence length " + std::to_string(len) +
                                                 " exceeds the extended window " +
                                                 std::to_string(config.extended_window));
    }
    const std::size_t dim = q.cols;
    const auto freqs = rotary_frequencies(dim);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dim));

    // Cos/sin for every mapped phase that can occur at this length.
    const std::size_t max_mapped =
        len == 0 ? 0
                 : selfextend_position_map(len - 1, 0, config.neighbor_window, config.group_size);
    std::vector<double> cos_table((max_mapped + 1) * freqs.size());
    std::vector<double> sin_table((max_mapped + 1) * freqs.size());
    for (std::size_t p = 0; p <= max_mapped; ++p) {
        for (std::size_t m = 0; m < freqs.size(); ++m) {
            const double angle = static_cast<double>(p) * freqs[m];
            cos_table[p * freqs.size() + m] = std::cos(angle);
            sin_table[p * freqs.size() + m] = std::sin(angle);
        }
    }

    // score(i, j) = q_i . R(-(mapped rel)) k_j, matching the phase the
    // standard path produces for rel when the pair is in the neighbor regime.
    Matrix out(len, dim);
    std::vector<double> scores(len);
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const std::size_t mapped =
                selfextend_position_map(i, j, config.neighbor_window, config.group_size);
            const double* c_row = cos_table.data() + mapped * freqs.size();
            const double* s_row = sin_table.data() + mapped * freqs.size();
            double dot = 0.0;
            for (std::size_t m = 0; m < freqs.size(); ++m) {
                const double k0 = k(j, 2 * m), k1 = k(j, 2 * m + 1);
                const double rk0 = k0 * c_row[m] + k1 * s_row[m];
                const double rk1 = -k0 * s_row[m] + k1 * c_row[m];
                dot += q(i, 2 * m) * rk0 + q(i, 2 * m + 1) * rk1;
            }
            scores[j] = dot * inv_sqrt_d;
        }
        softmax_row_apply(scores, i, v, out);
    }
    return out;
}

} // namespace specrag
