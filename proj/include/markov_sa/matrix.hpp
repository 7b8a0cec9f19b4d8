#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace markov_sa {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this project is desk scale (a few
// hundred rows at most), so no sparse or blocked storage.
struct Matrix {
    int rows = 0;
    int cols = 0;
    Vec a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    Matrix(std::initializer_list<std::initializer_list<double>> init);

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    std::span<const double> row(int i) const {
        return {a.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
    }

    bool square() const { return rows == cols && rows >= 1; }
    bool finite() const;

    static Matrix identity(int n);
    static Matrix constant(int r, int c, double value);
};

Matrix transpose(const Matrix& m);
Matrix mat_mul(const Matrix& lhs, const Matrix& rhs);
Matrix mat_sub(const Matrix& lhs, const Matrix& rhs);
Matrix mat_scale(const Matrix& m, double c);

Vec mat_vec(const Matrix& m, std::span<const double> v);
// m^T v without forming the transpose.
Vec tmat_vec(const Matrix& m, std::span<const double> v);

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, Vec& y);
double norm_linf(std::span<const double> v);
double norm_l1(std::span<const double> v);
double norm_l2(std::span<const double> v);
Vec vec_sub(std::span<const double> x, std::span<const double> y);

double max_abs_entry(const Matrix& m);

}  // namespace markov_sa
