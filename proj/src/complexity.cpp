#include "markov_sa/complexity.hpp"

#include <cmath>
#include <stdexcept>

namespace markov_sa::complexity {

TailSum tail_sum(const StepSchedule& schedule, long n0) {
    TailSum out;
    switch (schedule.kind()) {
        case StepSchedule::Kind::Explicit: {
            if (n0 < 1) throw std::out_of_range("tail_sum: n0 must be >= 1");
            const auto& v = schedule.values();
            for (std::size_t i = static_cast<std::size_t>(n0 - 1); i < v.size(); ++i)
                out.value += v[i] * v[i];
            out.analytic_bound = out.value;
            return out;
        }
        case StepSchedule::Kind::Power: {
            if (n0 < 2) throw std::out_of_range("tail_sum: n0 must be >= 2 for the closed form");
            const double k = schedule.exponent();
            const double two_k = 2.0 * k;
            if (two_k <= 1.0) throw std::domain_error("tail_sum: a(n)^2 not summable for k <= 1/2");
            const double scale2 = schedule.scale() * schedule.scale();

            // Direct sum over a window, then an Euler-Maclaurin tail:
            // sum_{m=N}^inf m^-2k = N^(1-2k)/(2k-1) + N^-2k/2 + 2k N^-(2k+1)/12 + O(N^-(2k+3)).
            const long window_end = n0 + 200000;
            double s = 0.0;
            for (long m = window_end - 1; m >= n0; --m) s += std::pow(static_cast<double>(m), -two_k);
            const double N = static_cast<double>(window_end);
            s += std::pow(N, 1.0 - two_k) / (two_k - 1.0) + 0.5 * std::pow(N, -two_k) +
                 (two_k / 12.0) * std::pow(N, -(two_k + 1.0));
            out.value = scale2 * s;
            out.analytic_bound =
                scale2 / ((two_k - 1.0) * std::pow(static_cast<double>(n0 - 1), two_k - 1.0));
            return out;
        }
        case StepSchedule::Kind::Constant:
            throw std::domain_error("tail_sum: constant steps are not square summable");
        default:
            throw std::invalid_argument("tail_sum: only power and explicit kinds supported");
    }
}

double lockin_lower_bound(int d, double delta_B, double K_hat, double C_hat, double s_n0) {
    if (d < 1 || delta_B <= 0.0 || K_hat <= 0.0 || C_hat <= 0.0 || s_n0 <= 0.0)
        throw std::invalid_argument("lockin_lower_bound: all inputs must be positive");
    const double dd = static_cast<double>(d);
    const double exponent_scale = delta_B * delta_B / (dd * s_n0);
    const double raw =
        1.0 - 2.0 * dd * std::exp(-K_hat * exponent_scale) - 2.0 * dd * std::exp(-C_hat * exponent_scale);
    return std::min(1.0, std::max(0.0, raw));
}

TimeConstant lockin_time_constant(double alpha_contract) {
    if (!(alpha_contract > 0.0 && alpha_contract < 1.0))
        throw std::domain_error("lockin_time_constant: alpha must lie in (0,1)");
    const double rate = 1.0 - alpha_contract;
    auto g = [rate](double t) { return (t + 1.0) / (1.0 - std::exp(-rate * t)); };

    // Golden section on (0, 200].
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-9, hi = 200.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double gc = g(c), gd = g(d);
    while (hi - lo > 1e-6) {
        if (gc < gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
    }
    TimeConstant out;
    out.t_star = 0.5 * (lo + hi);
    out.value = g(out.t_star);
    return out;
}

SampleComplexity sample_complexity(const Inputs& in) {
    if (!(in.k > 0.5 && in.k < 1.0))
        throw std::domain_error("sample_complexity: k must lie in (1/2, 1)");
    if (std::abs(in.alpha_contract - 0.9) > 1e-12)
        throw std::invalid_argument(
            "sample_complexity: closed form is anchored to alpha = 0.9 (its 15.16 constant); "
            "use fixed_point_iterates_to_go for other contraction moduli");
    if (!(in.M_const > 0.0 && in.eps > 0.0))
        throw std::invalid_argument("sample_complexity: M and eps must be positive");
    if (!(in.confidence_gamma > 0.0 && in.confidence_gamma < 1.0))
        throw std::invalid_argument("sample_complexity: gamma must lie in (0,1)");

    const double M = in.M_const, eps = in.eps, k = in.k;
    const double two_k1 = 2.0 * k - 1.0;
    SampleComplexity out;
    out.terms[0] = std::pow(M / eps, 1.0 / k);
    out.terms[1] = std::pow(M / (eps * two_k1), 1.0 / two_k1);
    out.terms[2] = std::pow(M / (eps * eps * two_k1), 1.0 / two_k1);
    out.terms[3] = std::pow(M / eps, 2.0 / k);
    out.terms[4] = std::pow(M * std::log(1.0 / in.confidence_gamma) / (eps * eps * two_k1), 1.0 / two_k1);
    out.terms[5] = std::pow(2.0 * M * k / (eps * two_k1), 1.0 / two_k1);

    double max_term = 0.0;
    for (double t : out.terms) max_term = std::max(max_term, t);
    out.n0 = std::max(1.0, std::ceil(max_term));
    out.n0_prime =
        std::ceil(std::pow(std::pow(out.n0, 1.0 - k) + 15.16 * (1.0 - k), 1.0 / (1.0 - k)));
    return out;
}

std::vector<SweepRow> n0_sweep(const Inputs& inputs, const std::vector<double>& k_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(k_grid.size());
    for (double k : k_grid) {
        Inputs point = inputs;
        point.k = k;
        const SampleComplexity sc = sample_complexity(point);
        rows.push_back({k, sc.n0, sc.n0_prime});
    }
    return rows;
}

long iterates_to_reach(const StepSchedule& schedule, long n0, double threshold) {
    double acc = 0.0;
    constexpr long kCap = 2000000000L;
    for (long n = n0 + 1; n <= n0 + kCap; ++n) {
        acc += schedule.at(n);
        if (acc >= threshold) return n - n0;
    }
    throw std::runtime_error("iterates_to_reach: threshold unreachable within 2e9 iterates");
}

long fixed_point_iterates_to_go(long n0, double k, double T_horizon, double alpha_contract) {
    if (!(alpha_contract > 0.0 && alpha_contract < 1.0))
        throw std::domain_error("fixed_point_iterates_to_go: alpha must lie in (0,1)");
    double threshold;
    if (T_horizon > 0.0) {
        const double rate = 1.0 - alpha_contract;
        threshold = (T_horizon + 1.0) / (1.0 - std::exp(-rate * T_horizon));
    } else {
        threshold = lockin_time_constant(alpha_contract).value;
    }
    return iterates_to_reach(StepSchedule::power(k), n0, threshold);
}

}  // namespace markov_sa::complexity
