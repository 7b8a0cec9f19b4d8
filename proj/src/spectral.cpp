#include "markov_sa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "markov_sa/errors.hpp"
#include "markov_sa/rng.hpp"

namespace markov_sa::spectral {

namespace {

void require_square(const Matrix& a, const char* who) {
    if (!a.square()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

void require_nonnegative(const Matrix& a, const char* who) {
    for (double v : a.a)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": matrix must be nonnegative and finite");
}

// BFS over the nonzero pattern, forward or along the transpose.
std::vector<char> reachable(const Matrix& a, bool transposed) {
    const int n = a.rows;
    std::vector<char> seen(n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        const int u = queue.back();
        queue.pop_back();
        for (int v = 0; v < n; ++v) {
            const double w = transposed ? a(v, u) : a(u, v);
            if (w != 0.0 && !seen[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

struct PowerResult {
    double value = 0.0;
    Vec vector;
    double residual = 0.0;
    bool converged = false;
};

// Power iteration for the dominant eigenvalue of shifted = A + shift*I.
// The iterate is kept l1-normalized; the value estimate is the l1 mass of the
// image, which for nonnegative matrices and positive iterates converges to the
// Perron root of the shifted matrix.
PowerResult shifted_power(const Matrix& a, double shift, Vec start, double tol, long max_iters,
                          bool transposed) {
    const int n = a.rows;
    Vec x = std::move(start);
    const double mass = norm_l1(x);
    for (double& v : x) v /= mass;

    PowerResult out;
    out.vector = x;
    for (long iter = 0; iter < max_iters; ++iter) {
        Vec y = transposed ? tmat_vec(a, x) : mat_vec(a, x);
        for (int i = 0; i < n; ++i) y[i] += shift * x[i];
        const double norm = norm_l1(y);
        if (norm == 0.0) throw NoConvergenceError("power iteration collapsed to zero vector");
        for (double& v : y) v /= norm;
        x.swap(y);

        // Residual against the unshifted matrix, with the current estimate.
        const double value = norm - shift;
        Vec ax = transposed ? tmat_vec(a, x) : mat_vec(a, x);
        double resid = 0.0;
        for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(ax[i] - value * x[i]));
        out.value = value;
        out.vector = x;
        out.residual = resid;
        if (resid <= tol) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

double max_diagonal(const Matrix& a) {
    double d = 0.0;
    for (int i = 0; i < a.rows; ++i) d = std::max(d, a(i, i));
    return d;
}

struct LuFactors {
    Matrix lu;            // combined L (unit lower) and U
    std::vector<int> piv; // row permutation
    double det_sign = 1.0;
    bool singular = false;
};

LuFactors lu_factor(const Matrix& a, double pivot_floor) {
    const int n = a.rows;
    LuFactors f{a, std::vector<int>(n), 1.0, false};
    for (int i = 0; i < n; ++i) f.piv[i] = i;
    for (int k = 0; k < n; ++k) {
        int best = k;
        double best_mag = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double mag = std::abs(f.lu(i, k));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        if (best_mag < pivot_floor) {
            f.singular = true;
            return f;
        }
        if (best != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(best, j));
            std::swap(f.piv[k], f.piv[best]);
            f.det_sign = -f.det_sign;
        }
        const double pivot = f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double m = f.lu(i, k) / pivot;
            f.lu(i, k) = m;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

Vec lu_solve(const LuFactors& f, std::span<const double> b) {
    const int n = f.lu.rows;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.piv[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

}  // namespace

bool is_irreducible(const Matrix& a) {
    const auto fwd = reachable(a, false);
    const auto bwd = reachable(a, true);
    for (int i = 0; i < a.rows; ++i)
        if (!fwd[i] || !bwd[i]) return false;
    return true;
}

PerronPair perron(const Matrix& a, double tol, long max_iters) {
    require_square(a, "perron");
    require_nonnegative(a, "perron");
    if (!is_irreducible(a)) throw NotIrreducibleError("perron: nonzero pattern is not irreducible");

    const int n = a.rows;
    const double shift = 1.0 + max_diagonal(a);
    Vec start(n, 1.0);

    PowerResult right = shifted_power(a, shift, start, tol, max_iters, false);
    PowerResult left = shifted_power(a, shift, start, tol, max_iters, true);
    if (!right.converged || !left.converged)
        throw NoConvergenceError("perron: residual above tolerance after max_iters");

    PerronPair pair;
    pair.value = right.value;
    pair.right = std::move(right.vector);  // already ||.||_1 = 1, positive
    pair.left = std::move(left.vector);
    const double cross = dot(pair.left, pair.right);
    if (cross <= 0.0) throw NoConvergenceError("perron: left/right vectors not positive");
    for (double& v : pair.left) v /= cross;

    Vec ar = mat_vec(a, pair.right);
    Vec la = tmat_vec(a, pair.left);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
        resid = std::max(resid, std::abs(ar[i] - pair.value * pair.right[i]));
        resid = std::max(resid, std::abs(la[i] - pair.value * pair.left[i]));
    }
    pair.residual = resid;
    return pair;
}

double operator_norm_l1(const Matrix& a) {
    if (!a.finite()) throw std::invalid_argument("operator_norm_l1: entries must be finite");
    double best = 0.0;
    for (int j = 0; j < a.cols; ++j) {
        double col = 0.0;
        for (int i = 0; i < a.rows; ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

Vec solve_linear(const Matrix& a, std::span<const double> b) {
    require_square(a, "solve_linear");
    if (static_cast<int>(b.size()) != a.rows)
        throw std::invalid_argument("solve_linear: rhs size mismatch");
    LuFactors f = lu_factor(a, 1e-12);
    if (f.singular) throw SingularMatrixError("solve_linear: pivot below 1e-12");
    Vec x = lu_solve(f, b);
    // One refinement pass tightens the residual on mildly ill-conditioned systems.
    Vec r = mat_vec(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    Vec dx = lu_solve(f, r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
}

double determinant(const Matrix& a) {
    require_square(a, "determinant");
    LuFactors f = lu_factor(a, 0.0);
    if (f.singular) return 0.0;
    double det = f.det_sign;
    for (int i = 0; i < a.rows; ++i) det *= f.lu(i, i);
    return det;
}

Vec stationary(const Matrix& p, double tol, long max_iters) {
    require_square(p, "stationary");
    require_nonnegative(p, "stationary");
    for (int i = 0; i < p.rows; ++i) {
        double row = 0.0;
        for (int j = 0; j < p.cols; ++j) row += p(i, j);
        if (std::abs(row - 1.0) > 1e-12)
            throw NotStochasticError("stationary: row sums must equal 1 within 1e-12");
    }
    if (!is_irreducible(p)) throw NotIrreducibleError("stationary: kernel is not irreducible");

    const double shift = 1.0 + max_diagonal(p);
    Vec start(p.rows, 1.0);
    PowerResult left = shifted_power(p, shift, start, tol, max_iters, true);
    Vec pi = std::move(left.vector);

    Vec piP = tmat_vec(p, pi);
    double resid = 0.0;
    for (int i = 0; i < p.rows; ++i) resid = std::max(resid, std::abs(piP[i] - pi[i]));
    if (resid > 1e-10) throw NoConvergenceError("stationary: residual above 1e-10");
    return pi;
}

double dominant_eigenvalue(const Matrix& q, double tol, long max_iters) {
    require_square(q, "dominant_eigenvalue");
    const int n = q.rows;
    const double shift = 1.0 + max_diagonal(q);

    // Random positive start; a fixed seed keeps results reproducible.
    Rng rng(0x5EED5EEDULL);
    Vec x(n);
    for (double& v : x) v = 0.5 + rng.next_double();
    double mass = norm_l1(x);
    for (double& v : x) v /= mass;

    // Q may be reducible, so the eigenvector can fail to settle even though the
    // value estimate converges; track the value increment instead of the residual.
    double value = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    long stable = 0;
    for (long iter = 0; iter < max_iters; ++iter) {
        Vec y = mat_vec(q, x);
        for (int i = 0; i < n; ++i) y[i] += shift * x[i];
        const double norm = norm_l1(y);
        if (norm == 0.0) return -shift;
        for (double& v : y) v /= norm;
        x.swap(y);
        value = norm - shift;
        if (std::abs(value - prev) <= tol * (1.0 + std::abs(value))) {
            if (++stable >= 8) return value;
        } else {
            stable = 0;
        }
        prev = value;
    }
    if (n <= 4) return char_poly_dominant_root(q);
    throw NoConvergenceError("dominant_eigenvalue: value estimate did not settle");
}

double char_poly_dominant_root(const Matrix& a) {
    require_square(a, "char_poly_dominant_root");
    const int n = a.rows;
    // Faddeev-LeVerrier: coefficients of lambda^n + c1 lambda^(n-1) + ... + cn.
    Vec c(n + 1, 0.0);
    c[0] = 1.0;
    Matrix m = Matrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        m = mat_mul(a, m);
        double trace = 0.0;
        for (int i = 0; i < n; ++i) trace += m(i, i);
        c[k] = -trace / k;
        for (int i = 0; i < n; ++i) m(i, i) += c[k];
    }

    // Durand-Kerner on the monic polynomial.
    using C = std::complex<double>;
    std::vector<C> roots(n);
    C seed(0.4, 0.9);
    C acc(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        roots[i] = acc;
    }
    auto eval = [&](C z) {
        C v(1.0, 0.0);
        for (int k = 1; k <= n; ++k) v = v * z + c[k];
        return v;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            C denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const C delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const C& r : roots) {
        if (std::abs(r.imag()) <= 1e-8 * (1.0 + std::abs(r.real()))) best = std::max(best, r.real());
    }
    if (!std::isfinite(best))
        throw NoConvergenceError("char_poly_dominant_root: no real root found");
    return best;
}

SymmetricExtremes symmetric_extreme_eigenvalues(const Matrix& s, double tol, long max_iters) {
    require_square(s, "symmetric_extreme_eigenvalues");
    const int n = s.rows;
    const double sigma = operator_norm_l1(s) + 1.0;  // >= spectral radius

    auto extreme = [&](bool largest) {
        // Power iteration on s + sigma*I (largest) or sigma*I - s (smallest);
        // both are PSD with the target eigenvalue dominant.
        Rng rng(largest ? 0xABCD1234ULL : 0x1234ABCDULL);
        Vec x(n);
        for (double& v : x) v = rng.next_double() - 0.5;
        double nrm = norm_l2(x);
        for (double& v : x) v /= nrm;
        double value = 0.0;
        for (long iter = 0; iter < max_iters; ++iter) {
            Vec y = mat_vec(s, x);
            for (int i = 0; i < n; ++i) y[i] = largest ? y[i] + sigma * x[i] : sigma * x[i] - y[i];
            const double norm = norm_l2(y);
            if (norm == 0.0) return largest ? -sigma : sigma;
            for (double& v : y) v /= norm;
            double resid = 0.0;
            Vec sy = mat_vec(s, y);
            const double ray = dot(y, sy);
            for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(sy[i] - ray * y[i]));
            x.swap(y);
            value = ray;
            if (resid <= tol * (1.0 + std::abs(ray))) return value;
        }
        return value;
    };

    SymmetricExtremes out;
    out.max = extreme(true);
    out.min = extreme(false);
    return out;
}

Vec conjugate_gradient_solve(const Matrix& c, std::span<const double> rhs, double tol) {
    const int n = c.rows;
    Vec x(n, 0.0);
    Vec r(rhs.begin(), rhs.end());
    Vec p = r;
    double rr = dot(r, r);
    const double stop = tol * tol * std::max(1.0, dot(rhs, rhs));
    for (int iter = 0; iter < 20 * n && rr > stop; ++iter) {
        Vec cp = mat_vec(c, p);
        const double pcp = dot(p, cp);
        if (pcp <= 0.0) break;  // rhs component outside range(C)
        const double alpha = rr / pcp;
        axpy(alpha, p, x);
        axpy(-alpha, cp, r);
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return x;
}

double condition_number_l1(const Matrix& a) {
    require_square(a, "condition_number_l1");
    const int n = a.rows;
    Matrix inv(n, n);
    Vec e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        Vec col = solve_linear(a, e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return operator_norm_l1(a) * operator_norm_l1(inv);
}

}  // namespace markov_sa::spectral
