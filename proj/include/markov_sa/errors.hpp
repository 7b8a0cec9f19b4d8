#pragma once

#include <stdexcept>
#include <string>

namespace markov_sa {

struct NotIrreducibleError : std::runtime_error {
    explicit NotIrreducibleError(const std::string& what) : std::runtime_error(what) {}
};

struct NotStochasticError : std::runtime_error {
    explicit NotStochasticError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterate crosses the 1e12 magnitude guard in a context that
// cannot record the event in-band.
struct DivergedError : std::runtime_error {
    explicit DivergedError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace markov_sa
