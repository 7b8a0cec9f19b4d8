#include "markov_sa/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace markov_sa {

StepSchedule StepSchedule::constant(double c) {
    if (c <= 0.0) throw std::invalid_argument("schedule: constant step must be positive");
    StepSchedule s;
    s.kind_ = Kind::Constant;
    s.scale_ = c;
    return s;
}

StepSchedule StepSchedule::power(double k, double scale) {
    if (k <= 0.0) throw std::invalid_argument("schedule: power exponent must be positive");
    if (scale <= 0.0) throw std::invalid_argument("schedule: scale must be positive");
    StepSchedule s;
    s.kind_ = Kind::Power;
    s.param_ = k;
    s.scale_ = scale;
    return s;
}

StepSchedule StepSchedule::log_power(double p, double scale) {
    if (scale <= 0.0) throw std::invalid_argument("schedule: scale must be positive");
    StepSchedule s;
    s.kind_ = Kind::LogPower;
    s.param_ = p;
    s.scale_ = scale;
    return s;
}

StepSchedule StepSchedule::inv_nlogn(double scale) {
    if (scale <= 0.0) throw std::invalid_argument("schedule: scale must be positive");
    StepSchedule s;
    s.kind_ = Kind::InvNLogN;
    s.scale_ = scale;
    return s;
}

StepSchedule StepSchedule::explicit_list(std::vector<double> values) {
    for (double v : values)
        if (v <= 0.0) throw std::invalid_argument("schedule: explicit values must be positive");
    StepSchedule s;
    s.kind_ = Kind::Explicit;
    s.values_ = std::move(values);
    return s;
}

double StepSchedule::at(long n) const {
    if (n < 1) throw std::out_of_range("schedule: index must be >= 1");
    switch (kind_) {
        case Kind::Constant:
            return scale_;
        case Kind::Power:
            return scale_ / std::pow(static_cast<double>(n), param_);
        case Kind::LogPower:
            if (n < 2) throw std::out_of_range("schedule: log kind needs n >= 2");
            return scale_ / (static_cast<double>(n) * std::pow(std::log(static_cast<double>(n)), param_));
        case Kind::InvNLogN:
            return scale_ / (1.0 + static_cast<double>(n) * std::log(static_cast<double>(n)));
        case Kind::Explicit:
            if (n > static_cast<long>(values_.size()))
                throw std::out_of_range("schedule: index past end of explicit list");
            return values_[static_cast<std::size_t>(n - 1)];
    }
    throw std::logic_error("schedule: unknown kind");
}

double StepSchedule::partial_sum(long n_max) const {
    double s = 0.0;
    const long start = (kind_ == Kind::LogPower) ? 2 : 1;
    for (long n = start; n <= n_max; ++n) s += at(n);
    return s;
}

}  // namespace markov_sa
