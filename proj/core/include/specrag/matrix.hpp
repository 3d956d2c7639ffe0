#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specrag {

/// Dense row-major double matrix, sized for the desk-scale numerical core.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
Matrix transpose(const Matrix& m);

/// out += scale * (col * row^T), the rank-1 update both LoRA gradients reduce to.
void add_outer(Matrix& out, double scale, std::span<const double> col, std::span<const double> row);

double max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace specrag
