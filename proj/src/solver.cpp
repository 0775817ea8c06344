#include "tfns/solver.hpp"

#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "tfns/errors.hpp"
#include "tfns/parallel.hpp"

namespace tfns::solver {

namespace {

// acc += w .* x, elementwise over modes. Each flat index is written by exactly
// one thread, so results do not depend on the thread count.
void add_scaled(SpectralField& acc, const std::vector<double>& w, const SpectralField& x) {
    const std::size_t size = acc.grid.size();
    for (int c = 0; c < acc.n_comps(); ++c) {
        Complex* a = acc.comps[static_cast<std::size_t>(c)].data();
        const Complex* b = x.comps[static_cast<std::size_t>(c)].data();
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
            a[i] += w[static_cast<std::size_t>(i)] * b[i];
    }
}

SpectralField checked_velocity(const SpectralField& u0) {
    validate(u0);
    if (u0.n_comps() != u0.grid.dim)
        throw std::domain_error("solver: velocity field needs one component per axis");
    if (!u0.div_free)
        throw std::domain_error("solver: initial data lacks the divergence-free certificate; project it first");
    return spectral::dealias(u0);
}

struct PicardOutcome {
    SpectralField state;
    SpectralField density;
    int iters = 0;
    double residual = 0.0;
};

// Closes u = known + w .* F(u) by fixed-point iteration from the warm start.
// The committed density is the one that produced the accepted state, so the
// identity between state, known part and density holds exactly.
PicardOutcome close_step(const SpectralField& known, const std::vector<double>& w,
                         const SpectralField& warm, double tol, int max_iters, int step) {
    SpectralField iter = warm;
    for (int it = 1; it <= max_iters; ++it) {
        SpectralField density = spectral::nonlinear_term(iter);
        SpectralField next = known;
        add_scaled(next, w, density);
        next.div_free = true;
        const double residual = spectral::l2_norm(spectral::subtract(next, iter));
        if (!std::isfinite(residual) || residual > 1e100)
            throw picard_divergence_error("solver: fixed-point iteration diverged at step " +
                                          std::to_string(step));
        iter = std::move(next);
        if (residual <= tol) return {std::move(iter), std::move(density), it, residual};
    }
    throw picard_divergence_error("solver: fixed-point budget exhausted at step " + std::to_string(step) +
                                  "; reduce the time step or raise picard_max_iters");
}

}  // namespace

void validate(const SolverConfig& cfg) {
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
        throw std::domain_error("SolverConfig: alpha must lie in (0, 1]");
    fracops::validate(cfg.time);
    if (!(cfg.picard_tol > 0.0)) throw std::domain_error("SolverConfig: picard_tol must be positive");
    if (cfg.picard_max_iters < 1) throw std::domain_error("SolverConfig: picard_max_iters must be >= 1");
}

PropagatorTable::PropagatorTable(const TorusGrid& grid, double alpha, const fracops::TimeGrid& time,
                                 const specfun::EvalPolicy& policy) {
    fracops::validate(time);
    const std::size_t size = grid.size();
    stride_ = static_cast<std::size_t>(time.n_nodes());

    std::map<long, std::uint32_t> first_seen;
    slot_.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        const long lam = std::lround(grid.lambda(i));
        auto [it, fresh] = first_seen.emplace(lam, static_cast<std::uint32_t>(first_seen.size()));
        slot_[i] = it->second;
    }
    lambdas_.resize(first_seen.size());
    for (const auto& [lam, s] : first_seen) lambdas_[s] = static_cast<double>(lam);

    e_.assign(lambdas_.size() * stride_, 0.0);
    w_.assign(lambdas_.size() * stride_, 0.0);
    const double inv_gamma_a1 = specfun::reciprocal_gamma(alpha + 1.0);

    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(lambdas_.size()); ++s) {
        try {
            const double lam = lambdas_[static_cast<std::size_t>(s)];
            double* erow = e_.data() + static_cast<std::size_t>(s) * stride_;
            double* wrow = w_.data() + static_cast<std::size_t>(s) * stride_;
            for (std::size_t j = 0; j < stride_; ++j) {
                const double t = time.node(static_cast<int>(j));
                const double ta = std::pow(t, alpha);
                const double e = specfun::mittag_leffler({alpha, 1.0}, -lam * ta, policy, 0.0);
                erow[j] = e;
                // W(lambda, t) = t^alpha E_{alpha,alpha+1}(-lambda t^alpha) through
                // the complement identity; differences of adjacent entries then
                // telescope exactly and stay nonnegative.
                wrow[j] = lam > 0.0 ? (1.0 - e) / lam : ta * inv_gamma_a1;
            }
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

SpectralField linear_propagate(const SpectralField& u0, double alpha, double t,
                               const specfun::EvalPolicy& policy) {
    validate(u0);
    if (!(t >= 0.0)) throw std::domain_error("linear_propagate: need t >= 0");
    const std::size_t size = u0.grid.size();
    const double ta = std::pow(t, alpha);

    std::map<long, double> factor;
    for (std::size_t i = 0; i < size; ++i) {
        const long lam = std::lround(u0.grid.lambda(i));
        if (factor.count(lam)) continue;
        factor[lam] = specfun::mittag_leffler({alpha, 1.0}, -static_cast<double>(lam) * ta, policy, 0.0);
    }

    SpectralField out = u0;
    for (auto& comp : out.comps)
        for (std::size_t i = 0; i < size; ++i)
            comp[i] *= factor.at(std::lround(u0.grid.lambda(i)));
    return out;
}

std::vector<double> memory_weights(double alpha, double lambda, const fracops::TimeGrid& time, int n,
                                   const specfun::EvalPolicy& policy) {
    fracops::validate(time);
    if (lambda < 0.0) throw std::domain_error("memory_weights: need lambda >= 0");
    if (n < 1 || n > time.steps) throw std::domain_error("memory_weights: node out of range");

    const double inv_gamma_a1 = specfun::reciprocal_gamma(alpha + 1.0);
    std::vector<double> prim(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double ta = std::pow(time.node(j), alpha);
        prim[static_cast<std::size_t>(j)] =
            lambda > 0.0
                ? (1.0 - specfun::mittag_leffler({alpha, 1.0}, -lambda * ta, policy, 0.0)) / lambda
                : ta * inv_gamma_a1;
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = prim[static_cast<std::size_t>(n - k)] - prim[static_cast<std::size_t>(n - k - 1)];
    return out;
}

SolveResult solve_mild(const SpectralField& u0, const SolverConfig& cfg) {
    validate(cfg);
    const SpectralField u0d = checked_velocity(u0);
    const TorusGrid& grid = u0d.grid;
    const std::size_t size = grid.size();
    const int steps = cfg.time.steps;

    const PropagatorTable table(grid, cfg.alpha, cfg.time, cfg.ml_policy);

    // The current-interval weight W(lambda, dt) is shared by every step.
    std::vector<double> w_dt(size);
    for (std::size_t i = 0; i < size; ++i) w_dt[i] = table.interval_weight(i, 1, 0);

    SolveResult res;
    res.trajectory.time = cfg.time;
    res.trajectory.fields.reserve(static_cast<std::size_t>(cfg.time.n_nodes()));
    res.trajectory.fields.push_back(u0d);
    res.diagnostics.reserve(static_cast<std::size_t>(steps));

    std::vector<SpectralField> densities;  // frozen per-interval values of F
    densities.reserve(static_cast<std::size_t>(steps));
    std::vector<double> w_hist(size);

    for (int n = 1; n <= steps; ++n) {
        SpectralField known = SpectralField::zeros(grid, grid.dim);
        for (int c = 0; c < grid.dim; ++c) {
            Complex* dst = known.comps[static_cast<std::size_t>(c)].data();
            const Complex* src = u0d.comps[static_cast<std::size_t>(c)].data();
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
                dst[i] = table.decay(static_cast<std::size_t>(i), n) * src[i];
        }
        known.div_free = true;

        if (cfg.linear_only) {
            res.trajectory.fields.push_back(std::move(known));
            res.diagnostics.push_back({n, 0, 0.0});
            continue;
        }

        for (int k = 0; k + 1 < n; ++k) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
                w_hist[static_cast<std::size_t>(i)] = table.interval_weight(static_cast<std::size_t>(i), n, k);
            add_scaled(known, w_hist, densities[static_cast<std::size_t>(k)]);
        }

        PicardOutcome out = close_step(known, w_dt, res.trajectory.fields.back(), cfg.picard_tol,
                                       cfg.picard_max_iters, n);
        densities.push_back(std::move(out.density));
        res.diagnostics.push_back({n, out.iters, out.residual});
        res.trajectory.fields.push_back(std::move(out.state));
    }
    return res;
}

SolveResult classical_reference(const SpectralField& u0, const fracops::TimeGrid& time,
                                double picard_tol, int picard_max_iters) {
    fracops::validate(time);
    if (!(picard_tol > 0.0) || picard_max_iters < 1)
        throw std::domain_error("classical_reference: bad iteration budget");
    const SpectralField u0d = checked_velocity(u0);
    const TorusGrid& grid = u0d.grid;
    const std::size_t size = grid.size();
    const double dt = time.dt();

    // Step factors of the heat semigroup; no Mittag-Leffler code involved.
    std::vector<double> decay(size), w_dt(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double lam = grid.lambda(i);
        decay[i] = std::exp(-lam * dt);
        w_dt[i] = lam > 0.0 ? (1.0 - decay[i]) / lam : dt;
    }

    SolveResult res;
    res.trajectory.time = time;
    res.trajectory.fields.reserve(static_cast<std::size_t>(time.n_nodes()));
    res.trajectory.fields.push_back(u0d);
    res.diagnostics.reserve(static_cast<std::size_t>(time.steps));

    for (int n = 1; n <= time.steps; ++n) {
        const SpectralField& prev = res.trajectory.fields.back();
        SpectralField known = SpectralField::zeros(grid, grid.dim);
        for (int c = 0; c < grid.dim; ++c) {
            Complex* dst = known.comps[static_cast<std::size_t>(c)].data();
            const Complex* src = prev.comps[static_cast<std::size_t>(c)].data();
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
                dst[i] = decay[static_cast<std::size_t>(i)] * src[i];
        }
        known.div_free = true;

        PicardOutcome out = close_step(known, w_dt, prev, picard_tol, picard_max_iters, n);
        res.diagnostics.push_back({n, out.iters, out.residual});
        res.trajectory.fields.push_back(std::move(out.state));
    }
    return res;
}

spectral::Trajectory zero_trajectory(const TorusGrid& grid, const fracops::TimeGrid& time, int n_comps) {
    fracops::validate(time);
    spectral::Trajectory traj;
    traj.time = time;
    SpectralField z = SpectralField::zeros(grid, n_comps);
    z.div_free = true;
    traj.fields.assign(static_cast<std::size_t>(time.n_nodes()), z);
    return traj;
}

spectral::Trajectory linear_trajectory(const SpectralField& u0, double alpha,
                                       const fracops::TimeGrid& time,
                                       const specfun::EvalPolicy& policy) {
    validate(u0);
    fracops::validate(time);
    const std::size_t size = u0.grid.size();
    const PropagatorTable table(u0.grid, alpha, time, policy);

    spectral::Trajectory traj;
    traj.time = time;
    traj.fields.reserve(static_cast<std::size_t>(time.n_nodes()));
    for (int n = 0; n < time.n_nodes(); ++n) {
        SpectralField f = u0;
        for (auto& comp : f.comps)
            for (std::size_t i = 0; i < size; ++i) comp[i] *= table.decay(i, n);
        traj.fields.push_back(std::move(f));
    }
    return traj;
}

namespace {

bool same_bits(const SpectralField& a, const SpectralField& b) { return a.comps == b.comps; }

struct SweepResult {
    spectral::Trajectory traj;
    int sweeps = 0;
};

// One branch of the global fixed-point iteration. Every sweep applies the full
// mild map to the previous iterate (left-endpoint interval densities). The map
// forgets its initialization one node per sweep, so a growing prefix of nodes
// is reproduced bitwise; once a node sits in that prefix its inputs never
// change again, and its density is folded into a running base sum.
SweepResult run_branch(const spectral::Trajectory& lin, const PropagatorTable& table,
                       const spectral::Trajectory& init, int max_sweeps) {
    const TorusGrid& grid = lin.fields.front().grid;
    const std::size_t size = grid.size();
    const int steps = lin.time.steps;

    spectral::Trajectory prev = init;
    std::vector<SpectralField> fhat(static_cast<std::size_t>(steps));
    spectral::Trajectory base = lin;
    int stable = 0;  // nodes below this index were reproduced bitwise by the last sweep
    int folded = 0;  // densities below this index live inside base
    std::vector<double> w(size);

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        // Densities of stable nodes were computed from values that no sweep
        // will change; only the rest need refreshing.
        for (int k = folded; k < steps; ++k)
            fhat[static_cast<std::size_t>(k)] = spectral::nonlinear_term(prev.fields[static_cast<std::size_t>(k)]);

        bool changed = false;
        bool prefix = true;
        int new_stable = stable;
        for (int n = stable; n <= steps; ++n) {
            SpectralField acc = base.fields[static_cast<std::size_t>(n)];
            for (int k = folded; k < n; ++k) {
#pragma omp parallel for schedule(static)
                for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
                    w[static_cast<std::size_t>(i)] = table.interval_weight(static_cast<std::size_t>(i), n, k);
                add_scaled(acc, w, fhat[static_cast<std::size_t>(k)]);
            }
            acc.div_free = true;
            if (same_bits(acc, prev.fields[static_cast<std::size_t>(n)])) {
                if (prefix) new_stable = n + 1;
            } else {
                changed = true;
                prefix = false;
                prev.fields[static_cast<std::size_t>(n)] = std::move(acc);
            }
        }
        if (!changed) return {std::move(prev), sweep};

        stable = std::min(new_stable, steps);
        for (int n = stable; n <= steps; ++n) {
            for (int k = folded; k < stable; ++k) {
#pragma omp parallel for schedule(static)
                for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
                    w[static_cast<std::size_t>(i)] = table.interval_weight(static_cast<std::size_t>(i), n, k);
                add_scaled(base.fields[static_cast<std::size_t>(n)], w, fhat[static_cast<std::size_t>(k)]);
            }
        }
        folded = stable;
    }
    throw convergence_error("picard_pair: sweep budget exhausted without a bitwise fixed point");
}

}  // namespace

PicardPairResult picard_pair(const SpectralField& u0, const SolverConfig& cfg,
                             const spectral::Trajectory& init_a, const spectral::Trajectory& init_b) {
    validate(cfg);
    const SpectralField u0d = checked_velocity(u0);
    const TorusGrid& grid = u0d.grid;
    for (const spectral::Trajectory* init : {&init_a, &init_b}) {
        spectral::validate(*init);
        if (init->time != cfg.time) throw std::domain_error("picard_pair: initialization on a different time grid");
        if (init->fields.front().grid != grid || init->fields.front().n_comps() != grid.dim)
            throw std::domain_error("picard_pair: initialization on a different spatial grid");
    }

    const PropagatorTable table(grid, cfg.alpha, cfg.time, cfg.ml_policy);
    spectral::Trajectory lin = linear_trajectory(u0d, cfg.alpha, cfg.time, cfg.ml_policy);
    lin.time = cfg.time;

    const int max_sweeps = cfg.time.steps + 2;
    SweepResult a = run_branch(lin, table, init_a, max_sweeps);
    SweepResult b = run_branch(lin, table, init_b, max_sweeps);

    PicardPairResult res;
    res.sup_gap = 0.0;
    for (int n = 0; n <= cfg.time.steps; ++n) {
        const double gap = spectral::l2_norm(spectral::subtract(a.traj.fields[static_cast<std::size_t>(n)],
                                                                b.traj.fields[static_cast<std::size_t>(n)]));
        if (gap > res.sup_gap) res.sup_gap = gap;
    }
    res.a = std::move(a.traj);
    res.b = std::move(b.traj);
    res.sweeps_a = a.sweeps;
    res.sweeps_b = b.sweeps;
    return res;
}

spectral::Trajectory solve_forced_linear(const spectral::Trajectory& forcing, const SolverConfig& cfg) {
    validate(cfg);
    spectral::validate(forcing);
    if (forcing.time != cfg.time)
        throw std::domain_error("solve_forced_linear: forcing sampled on a different time grid");
    const TorusGrid& grid = forcing.fields.front().grid;
    if (forcing.fields.front().n_comps() != grid.dim)
        throw std::domain_error("solve_forced_linear: forcing needs one component per axis");
    const std::size_t size = grid.size();
    const int steps = cfg.time.steps;

    const PropagatorTable table(grid, cfg.alpha, cfg.time, cfg.ml_policy);

    std::vector<SpectralField> proj;
    proj.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k)
        proj.push_back(spectral::leray_project(spectral::dealias(forcing.fields[static_cast<std::size_t>(k)])));

    spectral::Trajectory out;
    out.time = cfg.time;
    out.fields.reserve(static_cast<std::size_t>(cfg.time.n_nodes()));
    SpectralField zero = SpectralField::zeros(grid, grid.dim);
    zero.div_free = true;
    out.fields.push_back(zero);

    std::vector<double> w(size);
    for (int n = 1; n <= steps; ++n) {
        SpectralField acc = zero;
        for (int k = 0; k < n; ++k) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
                w[static_cast<std::size_t>(i)] = table.interval_weight(static_cast<std::size_t>(i), n, k);
            add_scaled(acc, w, proj[static_cast<std::size_t>(k)]);
        }
        acc.div_free = true;
        out.fields.push_back(std::move(acc));
    }
    return out;
}

}  // namespace tfns::solver
