#pragma once

#include "markov_sa/matrix.hpp"

namespace markov_sa::spectral {

// Dominant eigenpair of an irreducible nonnegative matrix, with the left and
// right vectors jointly normalized: ||right||_1 = 1 and sum_i left_i*right_i = 1.
struct PerronPair {
    double value = 0.0;
    Vec right;
    Vec left;
    // max over the two sides of ||A v - value v||_inf after normalization.
    double residual = 0.0;
};

inline constexpr double kDefaultTol = 1e-12;
inline constexpr long kDefaultMaxIters = 100000;

// True when every state of the nonzero-pattern digraph can reach every other.
bool is_irreducible(const Matrix& a);

// Power iteration on A + cI with c = 1 + max diagonal, which converges for
// periodic irreducible matrices as well. Throws NotIrreducibleError or
// NoConvergenceError.
PerronPair perron(const Matrix& a, double tol = kDefaultTol, long max_iters = kDefaultMaxIters);

// Induced l1 operator norm, i.e. the maximum absolute column sum.
double operator_norm_l1(const Matrix& a);

// Gaussian elimination with partial pivoting plus one step of iterative
// refinement. Throws SingularMatrixError when a pivot falls below 1e-12.
Vec solve_linear(const Matrix& a, std::span<const double> b);

// Product of pivots with sign tracking; returns 0 when elimination breaks down.
double determinant(const Matrix& a);

// Stationary distribution pi of a row-stochastic irreducible matrix:
// pi^T P = pi^T, sum pi = 1, residual <= 1e-10.
Vec stationary(const Matrix& p, double tol = 1e-12, long max_iters = kDefaultMaxIters);

// Dominant (largest-modulus, real) eigenvalue of a nonnegative matrix that may
// be reducible. Shifted power iteration with a seeded random positive start;
// on stagnation falls back to the characteristic polynomial for n <= 4.
double dominant_eigenvalue(const Matrix& q, double tol = 1e-12, long max_iters = kDefaultMaxIters);

// Largest real root of the characteristic polynomial, via Faddeev-LeVerrier
// coefficients and Durand-Kerner root finding. Intended for n <= 4 fallback use.
double char_poly_dominant_root(const Matrix& a);

// Smallest and largest eigenvalue of a symmetric matrix (two power iterations
// on spectral shifts).
struct SymmetricExtremes {
    double min = 0.0;
    double max = 0.0;
};
SymmetricExtremes symmetric_extreme_eigenvalues(const Matrix& s, double tol = 1e-10,
                                                long max_iters = kDefaultMaxIters);

// Conjugate gradients for a symmetric positive semidefinite system with a
// consistent right-hand side; from x0 = 0 it converges to the minimum-norm
// solution, which is the one the projected recursions actually track.
Vec conjugate_gradient_solve(const Matrix& c, std::span<const double> rhs, double tol = 1e-13);

// l1 condition number estimate ||A||_1 * ||A^-1||_1 (inverse built column by
// column; desk-scale matrices only).
double condition_number_l1(const Matrix& a);

}  // namespace markov_sa::spectral
