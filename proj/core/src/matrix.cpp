#include "specrag/matrix.hpp"

#include "specrag/error.hpp"

#include <cmath>

namespace specrag {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        raise(ErrorCode::ShapeMismatch, "matmul " + std::to_string(a.rows) + "x" +
                                            std::to_string(a.cols) + " by " + std::to_string(b.rows) +
                                            "x" + std::to_string(b.cols));
    }
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
    if (m.cols != x.size()) {
        raise(ErrorCode::ShapeMismatch, "matvec " + std::to_string(m.rows) + "x" +
                                            std::to_string(m.cols) + " by vector of length " +
                                            std::to_string(x.size()));
    }
    std::vector<double> out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += m(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
    }
    return out;
}

void add_outer(Matrix& out, double scale, std::span<const double> col, std::span<const double> row) {
    if (out.rows != col.size() || out.cols != row.size()) {
        raise(ErrorCode::ShapeMismatch, "outer product target shape mismatch");
    }
    for (std::size_t i = 0; i < col.size(); ++i) {
        const double s = scale * col[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
            out(i, j) += s * row[j];
        }
    }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        raise(ErrorCode::ShapeMismatch, "max_abs_diff shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    }
    return m;
}

} // namespace specrag
