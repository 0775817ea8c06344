#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tfns/errors.hpp"
#include "tfns/field.hpp"
#include "tfns/fracops.hpp"
#include "tfns/grid.hpp"
#include "tfns/solver.hpp"
#include "tfns/specfun.hpp"
#include "tfns/spectral.hpp"

using namespace tfns;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double max_mode_gap(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (int c = 0; c < a.n_comps(); ++c)
        for (std::size_t i = 0; i < a.grid.size(); ++i)
            m = std::max(m, std::abs(a.comps[static_cast<std::size_t>(c)][i] -
                                     b.comps[static_cast<std::size_t>(c)][i]));
    return m;
}

// W(lambda, s) through the mean-value-form series, independent of the
// complement identity the production table uses.
double primitive_direct(double alpha, double lambda, double s) {
    if (s == 0.0) return 0.0;
    return std::pow(s, alpha) *
           specfun::mittag_leffler({alpha, alpha + 1.0}, -lambda * std::pow(s, alpha), {}, 0.0);
}

}  // namespace

TEST_CASE("solver config validation") {
    solver::SolverConfig cfg;
    cfg.time = {1.0, 8};
    CHECK_NOTHROW(solver::validate(cfg));
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(solver::validate(cfg), std::domain_error);
    cfg.alpha = 0.5;
    cfg.picard_tol = 0.0;
    CHECK_THROWS_AS(solver::validate(cfg), std::domain_error);
}

TEST_CASE("propagator table against direct evaluations") {
    const auto grid = TorusGrid::make(2, 16);
    const fracops::TimeGrid time{0.8, 32};
    for (const double alpha : {0.3, 0.6, 0.9, 1.0}) {
        const solver::PropagatorTable table(grid, alpha, time);
        for (const std::size_t flat : {std::size_t{0}, grid.stride(0), grid.stride(0) + grid.stride(1),
                                       5 * grid.stride(0) + 3 * grid.stride(1)}) {
            const double lam = grid.lambda(flat);
            for (const int n : {0, 1, 7, 32}) {
                const double t = time.node(n);
                const double e_want =
                    specfun::mittag_leffler({alpha, 1.0}, -lam * std::pow(t, alpha), {}, 0.0);
                CHECK(std::abs(table.decay(flat, n) - e_want) < 1e-12);
                CHECK(std::abs(table.primitive(flat, n) - primitive_direct(alpha, lam, t)) <
                      1e-11);
            }
        }
    }
}

TEST_CASE("memory weights are nonnegative and telescope") {
    const fracops::TimeGrid time{1.0, 64};
    for (const double alpha : {0.3, 0.6, 0.9})
        for (const double lambda : {0.0, 1.0, 4.0, 25.0, 1000.0}) {
            for (const int n : {1, 5, 64}) {
                const auto w = solver::memory_weights(alpha, lambda, time, n);
                REQUIRE(static_cast<int>(w.size()) == n);
                double sum = 0.0;
                for (const double x : w) {
                    CHECK(x >= 0.0);
                    sum += x;
                }
                const double want = primitive_direct(alpha, lambda, time.node(n));
                CHECK(std::abs(sum - want) <= 1e-11 * std::max(1.0, want));
            }
        }
    // lambda = 0 falls back to the plain power kernel.
    const auto w0 = solver::memory_weights(0.5, 0.0, time, 1);
    const double want0 = std::pow(time.dt(), 0.5) * specfun::reciprocal_gamma(1.5);
    CHECK(std::abs(w0[0] - want0) < 1e-14);
}

TEST_CASE("stokes mode reproduces the homogeneous propagator") {
    const auto grid = TorusGrid::make(2, 16);
    const auto u0 = spectral::random_bandlimited(grid, 3, 4, 1.0);
    solver::SolverConfig cfg;
    cfg.alpha = 0.6;
    cfg.time = {0.5, 16};
    cfg.linear_only = true;
    const auto res = solver::solve_mild(u0, cfg);
    for (int n = 0; n <= cfg.time.steps; ++n) {
        const auto want = solver::linear_propagate(u0, cfg.alpha, cfg.time.node(n));
        CHECK(max_mode_gap(res.trajectory.fields[static_cast<std::size_t>(n)], want) < 1e-13);
    }
    for (const auto& d : res.diagnostics) CHECK(d.picard_iters == 0);
}

TEST_CASE("uncertified data is rejected") {
    const auto grid = TorusGrid::make(2, 8);
    SpectralField u0 = SpectralField::zeros(grid, 2);
    u0.comps[0][grid.stride(0)] = Complex{0.1, 0.0};  // no div_free certificate
    solver::SolverConfig cfg;
    cfg.time = {0.5, 4};
    CHECK_THROWS_AS(solver::solve_mild(u0, cfg), std::domain_error);
}

TEST_CASE("order one agrees with the exponential integrator") {
    const auto grid = TorusGrid::make(2, 16);
    const auto u0 = spectral::random_bandlimited(grid, 17, 3, 0.8);
    solver::SolverConfig cfg;
    cfg.alpha = 1.0;
    cfg.time = {0.5, 64};
    const auto mild = solver::solve_mild(u0, cfg);
    const auto classical = solver::classical_reference(u0, cfg.time);
    double gap = 0.0;
    for (int n = 0; n <= cfg.time.steps; ++n)
        gap = std::max(gap, spectral::l2_norm(spectral::subtract(
                                mild.trajectory.fields[static_cast<std::size_t>(n)],
                                classical.trajectory.fields[static_cast<std::size_t>(n)])));
    CHECK(gap < 1e-10);
}

TEST_CASE("taylor-green decays in closed form at order one") {
    const auto grid = TorusGrid::make(2, 16);
    const auto u0 = spectral::taylor_green(grid);
    solver::SolverConfig cfg;
    cfg.alpha = 1.0;
    cfg.time = {1.0, 64};
    const auto res = solver::solve_mild(u0, cfg);
    const auto want = spectral::scale(Complex{std::exp(-2.0), 0.0}, u0);
    const double rel = spectral::l2_norm(spectral::subtract(res.trajectory.fields.back(), want)) /
                       spectral::l2_norm(want);
    CHECK(rel < 1e-12);
}

TEST_CASE("classical trajectory dissipates energy") {
    const auto grid = TorusGrid::make(2, 16);
    const auto u0 = spectral::perturbed_taylor_green(grid, 0.2);
    const auto res = solver::classical_reference(u0, {1.0, 32});
    double prev = spectral::energy(res.trajectory.fields.front());
    for (std::size_t n = 1; n < res.trajectory.fields.size(); ++n) {
        const double e = spectral::energy(res.trajectory.fields[n]);
        CHECK(e <= prev * (1.0 + 1e-12));
        prev = e;
    }
}

TEST_CASE("forced linear problem matches the primitive on constant forcing") {
    const auto grid = TorusGrid::make(2, 16);
    solver::SolverConfig cfg;
    cfg.alpha = 0.6;
    cfg.time = {0.75, 24};
    // Divergence-free single-mode forcing: component 1 driven by mode e_1.
    SpectralField f = SpectralField::zeros(grid, 2);
    f.comps[1][grid.stride(0)] = Complex{0.3, 0.0};
    f.comps[1][static_cast<std::size_t>(grid.m - 1) * grid.stride(0)] = Complex{0.3, 0.0};
    const spectral::Trajectory forcing{
        cfg.time,
        std::vector<SpectralField>(static_cast<std::size_t>(cfg.time.n_nodes()), f)};
    const auto u = solver::solve_forced_linear(forcing, cfg);
    for (const int n : {1, 8, 24}) {
        const double want = 0.3 * primitive_direct(cfg.alpha, 1.0, cfg.time.node(n));
        const Complex got = u.fields[static_cast<std::size_t>(n)].comps[1][grid.stride(0)];
        CHECK(std::abs(got - Complex{want, 0.0}) < 1e-11);
    }
    CHECK(spectral::max_divergence(u.fields.back()) < 1e-13);
}

TEST_CASE("fixed-point branches with identical initializations stay identical") {
    const auto grid = TorusGrid::make(2, 8);
    const auto u0 = spectral::perturbed_taylor_green(grid, 0.1);
    solver::SolverConfig cfg;
    cfg.alpha = 0.7;
    cfg.time = {0.25, 12};
    const auto init = solver::linear_trajectory(u0, cfg.alpha, cfg.time);
    const auto pair = solver::picard_pair(u0, cfg, init, init);
    CHECK(pair.sup_gap == 0.0);
    CHECK(pair.sweeps_a == pair.sweeps_b);
}

TEST_CASE("fixed-point branches forget distinct initializations") {
    const auto grid = TorusGrid::make(2, 8);
    const auto u0 = spectral::perturbed_taylor_green(grid, 0.1);
    solver::SolverConfig cfg;
    cfg.alpha = 0.7;
    cfg.time = {0.25, 12};
    const auto warm = solver::linear_trajectory(u0, cfg.alpha, cfg.time);
    const auto cold = solver::zero_trajectory(grid, cfg.time, 2);
    const auto pair = solver::picard_pair(u0, cfg, warm, cold);
    CHECK(pair.sup_gap == 0.0);  // bitwise convergence of both branches
    CHECK(pair.sweeps_a <= cfg.time.steps + 2);
    CHECK(pair.sweeps_b <= cfg.time.steps + 2);
    // Both equal the marching solution at the shared nodes.
    const auto march = solver::solve_mild(u0, cfg);
    double gap = 0.0;
    for (int n = 0; n <= cfg.time.steps; ++n)
        gap = std::max(gap, spectral::l2_norm(spectral::subtract(
                                pair.a.fields[static_cast<std::size_t>(n)],
                                march.trajectory.fields[static_cast<std::size_t>(n)])));
    // Per-interval closure differs (implicit current density vs left endpoint),
    // so agreement is first order in dt, not exact.
    CHECK(gap < 0.05);
}

TEST_CASE("iteration budget exhaustion is reported") {
    const auto grid = TorusGrid::make(2, 8);
    const auto u0 = spectral::random_bandlimited(grid, 4, 2, 50.0);
    solver::SolverConfig cfg;
    cfg.alpha = 0.9;
    cfg.time = {2.0, 2};  // huge step on strong data
    cfg.picard_tol = 1e-15;
    cfg.picard_max_iters = 2;
    CHECK_THROWS_AS(solver::solve_mild(u0, cfg), picard_divergence_error);
}

TEST_CASE("propagator composition fails except at order one") {
    const double t1 = 0.5, t2 = 0.5, lambda = 1.0;
    const auto e = [&](double alpha, double t) {
        return specfun::mittag_leffler({alpha, 1.0}, -lambda * std::pow(t, alpha), {}, 0.0);
    };
    CHECK(std::abs(e(0.5, t1 + t2) - e(0.5, t1) * e(0.5, t2)) > 1e-3);
    CHECK(std::abs(e(1.0, t1 + t2) - e(1.0, t1) * e(1.0, t2)) < 1e-14);
}
