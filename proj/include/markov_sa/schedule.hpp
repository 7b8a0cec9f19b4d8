#pragma once

#include <vector>

namespace markov_sa {

// Step-size sequence a(n), n >= 1. The power/log kinds are the standard
// Robbins-Monro families; Explicit wraps a finite user-supplied list.
class StepSchedule {
  public:
    enum class Kind { Constant, Power, LogPower, InvNLogN, Explicit };

    static StepSchedule constant(double c);
    static StepSchedule power(double k, double scale = 1.0);        // scale / n^k
    static StepSchedule log_power(double p, double scale = 1.0);    // scale / (n (log n)^p), n >= 2
    static StepSchedule inv_nlogn(double scale = 1.0);              // scale / (1 + n log n)
    static StepSchedule explicit_list(std::vector<double> values);

    // Value at index n (1-based). Throws std::out_of_range for n < 1, for
    // n < 2 on the log kind, and past the end of an explicit list.
    double at(long n) const;

    Kind kind() const { return kind_; }
    double exponent() const { return param_; }
    double scale() const { return scale_; }
    const std::vector<double>& values() const { return values_; }

    // sum_{n=1}^N a(n).
    double partial_sum(long n_max) const;

  private:
    Kind kind_ = Kind::Constant;
    double scale_ = 1.0;
    double param_ = 0.0;
    std::vector<double> values_;
};

}  // namespace markov_sa
