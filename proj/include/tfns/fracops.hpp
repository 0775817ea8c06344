#pragma once

#include <vector>

namespace tfns {
struct SpectralField;
}

namespace tfns::fracops {

// Uniform grid on [0, t_end] with steps+1 nodes.
struct TimeGrid {
    double t_end = 1.0;
    int steps = 1;

    double dt() const { return t_end / steps; }
    int n_nodes() const { return steps + 1; }
    double node(int i) const { return t_end * (static_cast<double>(i) / steps); }
    bool operator==(const TimeGrid&) const = default;
};

void validate(const TimeGrid& grid);

struct SampledSignal {
    TimeGrid grid;
    std::vector<double> values;  // one per node
};

void validate(const SampledSignal& h);

// Riemann-Liouville integral I^alpha h, alpha in (0, 1]. Product integration:
// the kernel (t - tau)^(alpha-1) is integrated exactly against the piecewise
// linear interpolant of h, so alpha = 1 reduces to the running trapezoid rule.
SampledSignal rl_integral(const SampledSignal& h, double alpha);

// Caputo derivative of order alpha in (0, 1), L1 scheme. Node 0 carries the
// t -> 0+ limit, which is zero for differentiable h.
SampledSignal caputo_derivative(const SampledSignal& h, double alpha);

// Normalization constant of the singular-integral form of (-Delta)^s in
// dimension dim: 4^s s Gamma(s + dim/2) / (pi^(dim/2) Gamma(1 - s)).
double frac_laplacian_constant(int dim, double s);

// Spectral fractional Laplacian: multiplier |xi|^(2s) per mode, s in (0, 1].
SpectralField frac_laplacian_apply(const SpectralField& u, double s);

}  // namespace tfns::fracops
