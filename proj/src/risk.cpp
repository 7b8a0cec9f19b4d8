#include "markov_sa/risk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "markov_sa/errors.hpp"
#include "markov_sa/rng.hpp"

namespace markov_sa::risk {

namespace {

constexpr double kEqualityTol = 1e-9;

void require_model_shapes(const Matrix& P, const Matrix& cost, const Matrix& features, int i0) {
    if (!P.square()) throw std::invalid_argument("risk model: P must be square");
    if (cost.rows != P.rows || cost.cols != P.cols)
        throw std::invalid_argument("risk model: cost must match P");
    if (features.rows != P.rows)
        throw std::invalid_argument("risk model: features need one row per state");
    if (features.cols < 1) throw std::invalid_argument("risk model: features need a column");
    if (i0 < 0 || i0 >= P.rows) throw std::invalid_argument("risk model: i0 out of range");
    for (double v : features.a)
        if (v < 0.0) throw std::invalid_argument("risk model: features must be nonnegative");
    if (!cost.finite()) throw std::invalid_argument("risk model: costs must be finite");
}

double row_sum(const Matrix& m, int i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j);
    return s;
}

}  // namespace

RiskModel make_risk_model(Matrix P, Matrix cost, Matrix features, int i0) {
    require_model_shapes(P, cost, features, i0);
    RiskModel model;
    model.pi = spectral::stationary(P);  // also checks stochasticity and irreducibility
    model.P = std::move(P);
    model.cost = std::move(cost);
    model.features = std::move(features);
    model.i0 = i0;
    return model;
}

Matrix cost_weighted_kernel(const RiskModel& model) {
    const int s = model.n_states();
    Matrix m(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = std::exp(model.cost(i, j)) * model.P(i, j);
    return m;
}

int star_column(const Matrix& features, int i) {
    int col = -1;
    for (int j = 0; j < features.cols; ++j) {
        const double v = features(i, j);
        if (v > 0.0) {
            if (col >= 0) return -1;
            col = j;
        } else if (v != 0.0) {
            return -1;
        }
    }
    return col;
}

bool star_condition_holds(const Matrix& features) {
    for (int i = 0; i < features.rows; ++i)
        if (star_column(features, i) < 0) return false;
    return true;
}

RiskCost risk_cost(const RiskModel& model) {
    const Matrix m = cost_weighted_kernel(model);
    const spectral::PerronPair pair = spectral::perron(m);
    RiskCost out;
    out.lambda = pair.value;
    out.V = pair.right;
    out.log_cost = std::log(pair.value);
    const Vec mv = mat_vec(m, out.V);
    double resid = 0.0;
    for (int i = 0; i < m.rows; ++i)
        resid = std::max(resid, std::abs(out.V[i] - mv[i] / pair.value));
    out.poisson_residual = resid;
    return out;
}

ProjectedMu projected_mu(const RiskModel& model) {
    const int s = model.n_states();
    const int mdim = model.n_features();
    const Matrix m = cost_weighted_kernel(model);
    const Matrix& phi = model.features;

    // gram = Phi^T D Phi
    Matrix gram(mdim, mdim);
    for (int i = 0; i < s; ++i) {
        const auto row = phi.row(i);
        for (int a = 0; a < mdim; ++a)
            for (int b = 0; b < mdim; ++b) gram(a, b) += model.pi[i] * row[a] * row[b];
    }

    // rhs = Phi^T D M, solved column by column for W = gram^-1 rhs.
    Matrix rhs(mdim, s);
    for (int i = 0; i < s; ++i) {
        const auto row = phi.row(i);
        for (int a = 0; a < mdim; ++a)
            for (int j = 0; j < s; ++j) rhs(a, j) += model.pi[i] * row[a] * m(i, j);
    }
    Matrix w(mdim, s);
    Vec col(mdim);
    for (int j = 0; j < s; ++j) {
        for (int a = 0; a < mdim; ++a) col[a] = rhs(a, j);
        Vec x;
        try {
            x = spectral::solve_linear(gram, col);
        } catch (const SingularMatrixError&) {
            throw SingularMatrixError("projected_mu: Phi^T D Phi is singular");
        }
        for (int a = 0; a < mdim; ++a) w(a, j) = x[a];
    }

    ProjectedMu out;
    out.Q = mat_mul(phi, w);
    for (double v : out.Q.a)
        if (v < -1e-12)
            throw std::domain_error("projected_mu: projection produced a negative entry beyond -1e-12");
    out.mu = spectral::dominant_eigenvalue(out.Q);
    return out;
}

double bound_spectral(const Matrix& A, const Matrix& B, double mu) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::invalid_argument("bound_spectral: shape mismatch");
    if (!(mu > 0.0)) throw std::invalid_argument("bound_spectral: mu must be positive");
    const double s = static_cast<double>(A.rows);
    const double sum_norm = spectral::operator_norm_l1(A) + spectral::operator_norm_l1(B);
    const double diff_norm = spectral::operator_norm_l1(mat_sub(A, B));
    return std::log(1.0 + std::pow(sum_norm, 1.0 - 1.0 / s) * std::pow(diff_norm, 1.0 / s) / mu);
}

BapatBounds bound_bapat(const Matrix& A, const Matrix& B, const spectral::PerronPair& pair,
                        double mu) {
    const int s = A.rows;
    const double rA = pair.value;
    BapatBounds out;

    bool logs_ok = true;        // every log term finite, incl. the diagonal (for b1)
    bool offdiag_logs_ok = true;  // only off-diagonal logs (for L)
    double b1_sum = 0.0;
    double L = 0.0;
    for (int i = 0; i < s; ++i) {
        const double xy = pair.left[i] * pair.right[i];
        L += xy * (A(i, i) - B(i, i));
        for (int j = 0; j < s; ++j) {
            const double aij = A(i, j);
            if (aij <= 0.0) continue;  // zero exponent, term drops
            const double bij = B(i, j);
            const double weight = aij * pair.left[i] * pair.right[j];
            if (bij <= 0.0) {
                logs_ok = false;
                if (i != j) offdiag_logs_ok = false;
                continue;
            }
            const double lg = std::log(aij / bij);
            b1_sum += (weight / rA) * lg;
            if (i != j) L += weight * lg;
        }
    }
    out.L = L;

    if (logs_ok)
        out.b1 = BoundValue::ok(b1_sum);
    else
        out.b1 = BoundValue::invalid("log term undefined: B has a nonpositive entry on the support of A");

    if (!offdiag_logs_ok) {
        out.b2 = BoundValue::invalid("log term undefined: B has a nonpositive off-diagonal entry on the support of A");
        out.b3 = out.b2;
        return out;
    }
    out.condn_holds = rA > L;
    if (out.condn_holds)
        out.b2 = BoundValue::ok(std::log(rA / (rA - L)));
    else
        out.b2 = BoundValue::invalid("r(A) <= L, the bound's validity condition fails");
    if (1.0 + L / mu > 0.0)
        out.b3 = BoundValue::ok(std::log1p(L / mu));
    else
        out.b3 = BoundValue::invalid("1 + L/r(B) not positive");
    return out;
}

BoundValue bound_invert(const Matrix& A, const Matrix& B, double mu) {
    if (A.rows != B.rows || A.cols != B.cols || !A.square())
        return BoundValue::invalid("shape mismatch");
    const double det = spectral::determinant(A);
    if (det == 0.0) return BoundValue::invalid("A is singular");

    const int n = A.rows;
    Matrix sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (A(i, j) + A(j, i));
    const auto extremes = spectral::symmetric_extreme_eigenvalues(sym);
    if (extremes.min < -1e-10) return BoundValue::invalid("A is not positive semidefinite");
    if (det <= 0.0) return BoundValue::invalid("det(A) not positive");

    spectral::PerronPair pair;
    try {
        pair = spectral::perron(A);
    } catch (const NotIrreducibleError&) {
        return BoundValue::invalid("A is not irreducible");
    }
    double alpha = 0.0;
    for (double v : pair.right) alpha = std::max(alpha, 1.0 / v);

    const double gap = mu - alpha * spectral::operator_norm_l1(mat_sub(A, B));
    if (!(gap > 0.0)) return BoundValue::invalid("mu - alpha(A)||A-B|| not positive");
    return BoundValue::ok(std::log(det / (mu * gap)));
}

namespace {

// delta_ij of Q = Pi M under the star condition, written out entrywise:
// phi_k(i) * sum_l phi_k(l) pi_l gamma_lj / sum_m phi_k(m)^2 pi_m with k = k(i).
double star_delta(const RiskModel& model, const Matrix& m, int i, int j) {
    const int k = star_column(model.features, i);
    double num = 0.0, den = 0.0;
    for (int l = 0; l < model.n_states(); ++l) {
        const double f = model.features(l, k);
        num += f * model.pi[l] * m(l, j);
        den += f * f * model.pi[l];
    }
    return model.features(i, k) * num / den;
}

ConditionProbes evaluate_probes(const RiskModel& model, const Matrix& m,
                                const spectral::PerronPair& pair) {
    ConditionProbes probes;
    if (!star_condition_holds(model.features)) return probes;
    probes.applicable = true;
    const int s = model.n_states();

    // Scale for the equality probes.
    double scale = 1.0;
    for (int i = 0; i < s; ++i) scale = std::max(scale, row_sum(m, i));

    double as2_resid = 0.0, as3_resid = 0.0;
    for (int i = 0; i < s; ++i) {
        const int k = star_column(model.features, i);
        double s2 = 0.0;
        for (int mm = 0; mm < s; ++mm)
            s2 += model.features(mm, k) * model.features(mm, k) * model.pi[mm];
        const double lhs_weight = s2 - model.features(i, k) * model.features(i, k) * model.pi[i];
        for (int j = 0; j < s; ++j) {
            double rhs = 0.0;
            for (int l = 0; l < s; ++l)
                if (l != i) rhs += model.features(l, k) * model.pi[l] * m(l, j);
            rhs *= model.features(i, k);
            const double resid = std::abs(m(i, j) * lhs_weight - rhs);
            if (i == j)
                as2_resid = std::max(as2_resid, resid);
            else
                as3_resid = std::max(as3_resid, resid);
        }
    }
    probes.as2_residual = as2_resid;
    probes.as3_residual = as3_resid;
    probes.as2 = as2_resid <= kEqualityTol * scale;
    probes.as3 = as3_resid <= kEqualityTol * scale;

    for (int i = 0; i < s && !(probes.as5 && probes.as6); ++i) {
        double col_max = -std::numeric_limits<double>::infinity();
        double col_min = std::numeric_limits<double>::infinity();
        for (int l = 0; l < s; ++l) {
            if (l == i) continue;
            col_max = std::max(col_max, m(l, i));
            col_min = std::min(col_min, m(l, i));
        }
        if (m(i, i) > col_max) probes.as5 = true;
        if (m(i, i) < col_min) probes.as6 = true;
    }

    // as1 is the validity condition of the second bound written in model terms:
    // min_i sum_j gamma_ij must exceed L formed against the projected entries.
    Matrix q(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) q(i, j) = star_delta(model, m, i, j);
    const BapatBounds bounds = bound_bapat(m, q, pair, 1.0);
    double min_row = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s; ++i) min_row = std::min(min_row, row_sum(m, i));
    probes.as1_margin = min_row - bounds.L;
    probes.as1 = probes.as1_margin > 0.0;
    return probes;
}

}  // namespace

ZeroErrorReport zero_error_conditions(const RiskModel& model) {
    ZeroErrorReport report;
    const Matrix m = cost_weighted_kernel(model);
    const spectral::PerronPair pair = spectral::perron(m);
    const ProjectedMu proj = projected_mu(model);
    report.lambda = pair.value;
    report.mu = proj.mu;
    report.actual_error = std::log(pair.value) - std::log(proj.mu);
    report.star_holds = star_condition_holds(model.features);

    const int s = model.n_states();
    if (model.features.cols == 1) {
        // phi_i = kappa * x_i / pi_i for some positive kappa?
        double ratio = 0.0;
        double spread = 0.0;
        bool positive = true;
        for (int i = 0; i < s; ++i) {
            const double f = model.features(i, 0);
            if (f <= 0.0) {
                positive = false;
                break;
            }
            const double r = f * model.pi[i] / pair.left[i];
            if (i == 0)
                ratio = r;
            else
                spread = std::max(spread, std::abs(r - ratio) / ratio);
        }
        report.condition1_residual = positive ? spread : 1.0;
        report.condition1_shape = positive && spread <= 1e-8;
    } else {
        report.condition1_shape = false;
        report.condition1_residual = 1.0;
    }

    // Condition 2 needs the projected entries positive on the support; its
    // first equality asks for delta_ij = lambda0 gamma_ij beta_i / beta_j.
    bool support_positive = true;
    for (int i = 0; i < s && support_positive; ++i)
        for (int j = 0; j < s; ++j)
            if (m(i, j) > 0.0 && proj.Q(i, j) <= 0.0) {
                support_positive = false;
                break;
            }
    bool full_support = true;
    for (double v : m.a)
        if (v <= 0.0) full_support = false;

    if (support_positive && full_support) {
        // Fit t_ij = ln(delta_ij/gamma_ij) = u + v_i - v_j exactly from the
        // first row/column and measure the residual of the remaining entries.
        Matrix t(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) t(i, j) = std::log(proj.Q(i, j) / m(i, j));
        const double u = t(0, 0);
        Vec v(s, 0.0);
        for (int i = 1; i < s; ++i) v[i] = t(i, 0) - u;
        double resid = 0.0;
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                resid = std::max(resid, std::abs(t(i, j) - (u + v[i] - v[j])));
        report.condition2_eq1_residual = resid;
        report.condition2_eq1 = resid <= 1e-8;

        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                const double w = m(i, j) * pair.left[i] * pair.right[j];
                lhs += w * std::log(proj.Q(i, j));
                rhs += w * std::log(m(i, j));
            }
        report.condition2_eq2_residual = std::abs(lhs - rhs);
        report.condition2_eq2 = report.condition2_eq2_residual <= 1e-8;
    } else {
        report.condition2_eq1 = false;
        report.condition2_eq2 = false;
        report.condition2_eq1_residual = std::numeric_limits<double>::quiet_NaN();
        report.condition2_eq2_residual = std::numeric_limits<double>::quiet_NaN();
    }

    report.probes = evaluate_probes(model, m, pair);
    return report;
}

BoundReport bound_report(const RiskModel& model) {
    BoundReport report;
    const RiskCost rc = risk_cost(model);
    const Matrix m = cost_weighted_kernel(model);
    const spectral::PerronPair pair = spectral::perron(m);
    const ProjectedMu proj = projected_mu(model);

    report.lambda = rc.lambda;
    report.mu = proj.mu;
    report.poisson_residual = rc.poisson_residual;
    report.actual_error = std::log(rc.lambda) - std::log(proj.mu);

    if (proj.mu > 0.0) {
        report.spect = BoundValue::ok(bound_spectral(m, proj.Q, proj.mu));
        const BapatBounds bapat = bound_bapat(m, proj.Q, pair, proj.mu);
        report.bapat1 = bapat.b1;
        report.bapat2 = bapat.b2;
        report.bapat3 = bapat.b3;
        report.condn_holds = bapat.condn_holds;
        report.invert = bound_invert(m, proj.Q, proj.mu);
    } else {
        const auto why = BoundValue::invalid("projected eigenvalue mu is not positive");
        report.spect = report.bapat1 = report.bapat2 = report.bapat3 = report.invert = why;
    }
    report.conditions = zero_error_conditions(model);
    return report;
}

LspeResult lspe_iterate(const RiskModel& model, double eps_floor, const StepSchedule& schedule,
                        long steps, std::uint64_t seed, const Vec& r0) {
    const int mdim = model.n_features();
    if (static_cast<int>(r0.size()) != mdim)
        throw std::invalid_argument("lspe: r0 size must match feature count");
    if (!(dot(model.features.row(model.i0), r0) > 0.0))
        throw std::invalid_argument("lspe: phi(i0)^T r0 must be positive");
    if (!(eps_floor > 0.0)) throw std::invalid_argument("lspe: eps_floor must be positive");

    Matrix a_acc(mdim, mdim);
    Matrix b_acc(mdim, mdim);
    Vec r = r0;
    LspeResult out;
    out.trace.resize(static_cast<std::size_t>(steps));
    bool warm = true;

    Rng rng(seed);
    int state = model.i0;
    Vec gr(mdim);
    for (long n = 1; n <= steps; ++n) {
        const int next = rng.sample(model.P.row(state));
        const double weight = std::exp(model.cost(state, next));
        const auto phi_i = model.features.row(state);
        const auto phi_j = model.features.row(next);
        for (int a = 0; a < mdim; ++a)
            for (int b = 0; b < mdim; ++b) {
                a_acc(a, b) += weight * phi_i[a] * phi_j[b];
                b_acc(a, b) += phi_i[a] * phi_i[b];
            }
        state = next;

        if (warm) {
            try {
                (void)spectral::solve_linear(b_acc, r);
                warm = false;
                out.warmup_steps = n;
            } catch (const SingularMatrixError&) {
                out.trace[n - 1] = dot(model.features.row(model.i0), r);
                continue;
            }
        }

        // gr = B^-1 A r.
        const Vec ar = mat_vec(a_acc, r);
        gr = spectral::solve_linear(b_acc, ar);
        const double denom = std::max(dot(model.features.row(model.i0), r), eps_floor);
        const double a_n = schedule.at(n);
        for (int idx = 0; idx < mdim; ++idx) r[idx] += a_n * (gr[idx] / denom - r[idx]);
        if (norm_linf(r) > kDivergenceGuard)
            throw DivergedError("lspe: iterate magnitude crossed 1e12");
        out.trace[n - 1] = dot(model.features.row(model.i0), r);
    }
    if (warm) throw SingularMatrixError("lspe: B_n never became invertible");
    out.r_final = std::move(r);
    return out;
}

Vec risk_td_step(Vec theta, int i, int j, const RiskModel& model, double a_n, double eps_floor) {
    const auto phi_i = model.features.row(i);
    const auto phi_j = model.features.row(j);
    const double denom = std::max(dot(model.features.row(model.i0), theta), eps_floor);
    const double drive =
        std::exp(model.cost(i, j)) * dot(phi_j, theta) / denom - dot(phi_i, theta);
    axpy(a_n * drive, phi_i, theta);
    return theta;
}

RiskTdResult risk_td_iterate(const RiskModel& model, const Vec& theta0,
                             const StepSchedule& schedule, long steps, std::uint64_t seed,
                             double eps_floor) {
    if (!(dot(model.features.row(model.i0), theta0) > 0.0))
        throw std::invalid_argument("risk_td: phi(i0)^T theta0 must be positive");
    RiskTdResult out;
    out.trace.resize(static_cast<std::size_t>(steps));
    Vec theta = theta0;
    Rng rng(seed);
    int state = model.i0;
    for (long n = 1; n <= steps; ++n) {
        const int next = rng.sample(model.P.row(state));
        theta = risk_td_step(std::move(theta), state, next, model, schedule.at(n), eps_floor);
        if (norm_linf(theta) > kDivergenceGuard)
            throw DivergedError("risk_td: iterate magnitude crossed 1e12");
        out.trace[n - 1] = dot(model.features.row(model.i0), theta);
        state = next;
    }
    out.theta_final = std::move(theta);
    return out;
}

Matrix doubly_stochastic_td_features(const RiskModel& model) {
    const int s = model.n_states();
    for (int j = 0; j < s; ++j) {
        double col = 0.0;
        for (int i = 0; i < s; ++i) col += model.P(i, j);
        if (std::abs(col - 1.0) > 1e-10)
            throw NotStochasticError("doubly_stochastic_td_features: column sums must equal 1");
    }
    return mat_scale(Matrix::identity(s), std::sqrt(static_cast<double>(s)));
}

Vec risk_td_expected_increment(const RiskModel& model, const Vec& theta, double eps_floor) {
    const int s = model.n_states();
    Vec out(theta.size(), 0.0);
    const double denom = std::max(dot(model.features.row(model.i0), theta), eps_floor);
    for (int i = 0; i < s; ++i) {
        const auto phi_i = model.features.row(i);
        const double vi = dot(phi_i, theta);
        for (int j = 0; j < s; ++j) {
            const double w = model.pi[i] * model.P(i, j);
            if (w == 0.0) continue;
            const double drive =
                std::exp(model.cost(i, j)) * dot(model.features.row(j), theta) / denom - vi;
            axpy(w * drive, phi_i, out);
        }
    }
    return out;
}

}  // namespace markov_sa::risk
