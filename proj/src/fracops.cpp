#include "tfns/fracops.hpp"

#include <cmath>
#include <stdexcept>

#include "tfns/field.hpp"
#include "tfns/specfun.hpp"

namespace tfns::fracops {

void validate(const TimeGrid& grid) {
    if (!(grid.t_end > 0.0) || !std::isfinite(grid.t_end))
        throw std::domain_error("TimeGrid: need finite t_end > 0");
    if (grid.steps < 1) throw std::domain_error("TimeGrid: need steps >= 1");
}

void validate(const SampledSignal& h) {
    validate(h.grid);
    if (h.values.size() != static_cast<std::size_t>(h.grid.n_nodes()))
        throw std::domain_error("SampledSignal: value count does not match grid");
    for (double v : h.values)
        if (!std::isfinite(v)) throw std::domain_error("SampledSignal: non-finite value");
}

SampledSignal rl_integral(const SampledSignal& h, double alpha) {
    validate(h);
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("rl_integral: alpha must lie in (0, 1]");

    const int nodes = h.grid.n_nodes();
    const double dt = h.grid.dt();
    const double inv_gamma = 1.0 / std::tgamma(alpha);
    SampledSignal out{h.grid, std::vector<double>(static_cast<std::size_t>(nodes), 0.0)};

    // Kernel moments over [t_k, t_{k+1}] as seen from t_n, with r = t_n - tau:
    // C1 = int r^(alpha-1), C2 = int r^alpha. The hat-function weights follow
    // in closed form, so piecewise-linear inputs are integrated exactly.
    for (int n = 1; n < nodes; ++n) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double r0 = dt * (n - k);
            const double r1 = dt * (n - k - 1);
            const double c1 = (std::pow(r0, alpha) - std::pow(r1, alpha)) / alpha;
            const double c2 = (std::pow(r0, alpha + 1.0) - std::pow(r1, alpha + 1.0)) / (alpha + 1.0);
            const double w_right = (r0 * c1 - c2) / dt;
            const double w_left = (c2 - r1 * c1) / dt;
            acc += w_left * h.values[static_cast<std::size_t>(k)] +
                   w_right * h.values[static_cast<std::size_t>(k + 1)];
        }
        out.values[static_cast<std::size_t>(n)] = inv_gamma * acc;
    }
    return out;
}

SampledSignal caputo_derivative(const SampledSignal& h, double alpha) {
    validate(h);
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::domain_error("caputo_derivative: alpha must lie in (0, 1)");
    if (h.values.size() < 2) throw std::domain_error("caputo_derivative: need at least two nodes");

    const int nodes = h.grid.n_nodes();
    const double dt = h.grid.dt();
    const double inv_gamma = 1.0 / std::tgamma(2.0 - alpha);
    SampledSignal out{h.grid, std::vector<double>(static_cast<std::size_t>(nodes), 0.0)};

    // L1: difference quotients against the exactly integrated kernel
    // (t_n - tau)^(-alpha). Node 0 carries the t -> 0+ limit, zero for
    // differentiable signals.
    for (int n = 1; n < nodes; ++n) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double r0 = dt * (n - k);
            const double r1 = dt * (n - k - 1);
            const double kernel = (std::pow(r0, 1.0 - alpha) - std::pow(r1, 1.0 - alpha)) / dt;
            acc += kernel * (h.values[static_cast<std::size_t>(k + 1)] -
                             h.values[static_cast<std::size_t>(k)]);
        }
        out.values[static_cast<std::size_t>(n)] = inv_gamma * acc;
    }
    return out;
}

double frac_laplacian_constant(int dim, double s) {
    if (dim < 1) throw std::domain_error("frac_laplacian_constant: need dim >= 1");
    if (!(s > 0.0) || s >= 1.0)
        throw std::domain_error("frac_laplacian_constant: s must lie in (0, 1)");
    const double half_dim = 0.5 * dim;
    return std::pow(4.0, s) * s * specfun::gamma_fn(s + half_dim) /
           (std::pow(std::acos(-1.0), half_dim) * specfun::gamma_fn(1.0 - s));
}

SpectralField frac_laplacian_apply(const SpectralField& u, double s) {
    if (!(s > 0.0) || s > 1.0)
        throw std::domain_error("frac_laplacian_apply: s must lie in (0, 1]");
    tfns::validate(u);
    SpectralField out = u;
    const std::size_t size = u.grid.size();
    for (auto& c : out.comps) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i) {
            const double lam = u.grid.lambda(static_cast<std::size_t>(i));
            c[static_cast<std::size_t>(i)] *= lam == 0.0 ? 0.0 : std::pow(lam, s);
        }
    }
    return out;
}

}  // namespace tfns::fracops
