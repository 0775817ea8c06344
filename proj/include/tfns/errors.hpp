#pragma once

#include <stdexcept>
#include <string>

namespace tfns {

// Series or quadrature failed to settle within its iteration budget.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Per-step fixed-point iteration exceeded its budget; the usual cause is a
// time step too large for the data.
struct picard_divergence_error : std::runtime_error {
    explicit picard_divergence_error(const std::string& what) : std::runtime_error(what) {}
};

struct quadrature_error : std::runtime_error {
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfns
