#include "markov_sa/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace markov_sa {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows = static_cast<int>(init.size());
    cols = rows > 0 ? static_cast<int>(init.begin()->size()) : 0;
    a.reserve(static_cast<std::size_t>(rows) * cols);
    for (const auto& r : init) {
        if (static_cast<int>(r.size()) != cols)
            throw std::invalid_argument("matrix initializer rows have unequal lengths");
        a.insert(a.end(), r.begin(), r.end());
    }
}

bool Matrix::finite() const {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::constant(int r, int c, double value) {
    Matrix m(r, c);
    for (double& v : m.a) v = value;
    return m;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Matrix mat_mul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols != rhs.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
    Matrix out(lhs.rows, rhs.cols);
    for (int i = 0; i < lhs.rows; ++i) {
        for (int k = 0; k < lhs.cols; ++k) {
            const double lik = lhs(i, k);
            if (lik == 0.0) continue;
            for (int j = 0; j < rhs.cols; ++j) out(i, j) += lik * rhs(k, j);
        }
    }
    return out;
}

Matrix mat_sub(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.rows != rhs.rows || lhs.cols != rhs.cols)
        throw std::invalid_argument("mat_sub: dimension mismatch");
    Matrix out = lhs;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] -= rhs.a[i];
    return out;
}

Matrix mat_scale(const Matrix& m, double c) {
    Matrix out = m;
    for (double& v : out.a) v *= c;
    return out;
}

Vec mat_vec(const Matrix& m, std::span<const double> v) {
    if (static_cast<int>(v.size()) != m.cols) throw std::invalid_argument("mat_vec: dimension mismatch");
    Vec out(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        const double* row = m.a.data() + static_cast<std::size_t>(i) * m.cols;
        for (int j = 0; j < m.cols; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

Vec tmat_vec(const Matrix& m, std::span<const double> v) {
    if (static_cast<int>(v.size()) != m.rows) throw std::invalid_argument("tmat_vec: dimension mismatch");
    Vec out(m.cols, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        const double* row = m.a.data() + static_cast<std::size_t>(i) * m.cols;
        for (int j = 0; j < m.cols; ++j) out[j] += vi * row[j];
    }
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

void axpy(double alpha, std::span<const double> x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm_linf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm_l1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double norm_l2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vec vec_sub(std::span<const double> x, std::span<const double> y) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

double max_abs_entry(const Matrix& m) {
    double v = 0.0;
    for (double x : m.a) v = std::max(v, std::abs(x));
    return v;
}

}  // namespace markov_sa
