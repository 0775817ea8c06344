#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tfns/field.hpp"
#include "tfns/fracops.hpp"
#include "tfns/specfun.hpp"
#include "tfns/spectral.hpp"

namespace tfns::solver {

struct SolverConfig {
    double alpha = 1.0;
    fracops::TimeGrid time{};
    double picard_tol = 1e-12;
    int picard_max_iters = 50;
    specfun::EvalPolicy ml_policy{};
    // Stokes mode: the memory term is dropped entirely, leaving the pure
    // propagator. Used by the linear-exactness checks.
    bool linear_only = false;
};

void validate(const SolverConfig& cfg);

struct StepDiagnostics {
    int step = 0;
    int picard_iters = 0;
    double picard_residual = 0.0;
};

struct SolveResult {
    spectral::Trajectory trajectory;
    std::vector<StepDiagnostics> diagnostics;  // one entry per step, steps total
};

// Per-eigenvalue tables of the propagator decay factors E_alpha(-lambda t^alpha)
// and the integrated memory primitive W(lambda, s) = s^alpha E_{alpha,alpha+1}(-lambda s^alpha).
// lambda = |xi|^2 takes few distinct integer values on the torus, so tables are
// built per distinct eigenvalue and shared across modes.
class PropagatorTable {
  public:
    PropagatorTable(const TorusGrid& grid, double alpha, const fracops::TimeGrid& time,
                    const specfun::EvalPolicy& policy = {});

    // E_alpha(-lambda(flat) t_node^alpha).
    double decay(std::size_t flat, int node) const { return e_[slot_[flat] * stride_ + node]; }
    // W(lambda(flat), t_node).
    double primitive(std::size_t flat, int node) const { return w_[slot_[flat] * stride_ + node]; }
    // Weight of the subinterval [t_a, t_{a+1}] in the memory integral ending at
    // t_n: W(lambda, t_n - t_a) - W(lambda, t_n - t_{a+1}). Nonnegative.
    double interval_weight(std::size_t flat, int n, int a) const {
        const double* w = w_.data() + slot_[flat] * stride_;
        return w[n - a] - w[n - a - 1];
    }

    std::size_t distinct_eigenvalues() const { return lambdas_.size(); }
    const std::vector<double>& eigenvalues() const { return lambdas_; }

  private:
    std::size_t stride_ = 0;
    std::vector<double> lambdas_;
    std::vector<std::uint32_t> slot_;
    std::vector<double> e_;
    std::vector<double> w_;
};

// Homogeneous propagator: each mode scaled by E_alpha(-|xi|^2 t^alpha).
SpectralField linear_propagate(const SpectralField& u0, double alpha, double t,
                               const specfun::EvalPolicy& policy = {});

// Exact kernel weights for the memory integral ending at node n, one entry per
// subinterval [t_k, t_{k+1}], k < n. Entry k equals
// W(lambda, t_n - t_k) - W(lambda, t_n - t_{k+1}); the sum telescopes to
// W(lambda, t_n) and every entry is nonnegative.
std::vector<double> memory_weights(double alpha, double lambda, const fracops::TimeGrid& time,
                                   int n, const specfun::EvalPolicy& policy = {});

// Marching solver for the mild form: at node n the history contributes frozen
// per-interval densities, and the current interval's density is closed
// implicitly by Picard iteration in the L2 field norm. Full history is
// retained; total cost is O(steps^2) mode multiplications.
SolveResult solve_mild(const SpectralField& u0, const SolverConfig& cfg);

// Per-step exponential integrator for the classical (first-order-in-time)
// equation, built directly on exp with the same implicit current-interval
// closure. Shares no Mittag-Leffler code with solve_mild; at alpha = 1 the two
// coincide analytically, which is the classical-limit check.
SolveResult classical_reference(const SpectralField& u0, const fracops::TimeGrid& time,
                                double picard_tol = 1e-12, int picard_max_iters = 50);

// Convenience initializations for picard_pair.
spectral::Trajectory zero_trajectory(const TorusGrid& grid, const fracops::TimeGrid& time,
                                     int n_comps);
spectral::Trajectory linear_trajectory(const SpectralField& u0, double alpha,
                                       const fracops::TimeGrid& time,
                                       const specfun::EvalPolicy& policy = {});

struct PicardPairResult {
    spectral::Trajectory a;
    spectral::Trajectory b;
    int sweeps_a = 0;
    int sweeps_b = 0;
    // sup over nodes of the L2 distance between the converged trajectories.
    double sup_gap = 0.0;
};

// Global fixed-point iteration of the mild map with left-endpoint interval
// densities, run independently from two initial trajectory guesses. The map
// forgets its initialization one node per sweep, so both branches converge to
// the same trajectory; the gap between them is the uniqueness observable.
PicardPairResult picard_pair(const SpectralField& u0, const SolverConfig& cfg,
                             const spectral::Trajectory& init_a,
                             const spectral::Trajectory& init_b);

// Driven linear problem with zero initial data: forcing is Leray-projected and
// treated as piecewise constant per interval (left endpoint), so the discrete
// sum is the exact mild solution of that piecewise-constant problem.
spectral::Trajectory solve_forced_linear(const spectral::Trajectory& forcing,
                                         const SolverConfig& cfg);

}  // namespace tfns::solver
