#pragma once

#include <cstdint>
#include <vector>

#include "tfns/field.hpp"
#include "tfns/fracops.hpp"
#include "tfns/grid.hpp"

namespace tfns::spectral {

// Physical samples are component-major, row-major within a component, on the
// uniform grid x_i = 2 pi i / m. Forward normalizes so coefficients are
// Fourier-series coefficients: cos(x_1) has value 1/2 at modes +-e_1.
SpectralField forward(const TorusGrid& grid, const std::vector<double>& samples, int n_comps);
std::vector<double> inverse(const SpectralField& u);

// Sharp 2/3-rule truncation; returns a copy with masked modes zeroed.
SpectralField dealias(const SpectralField& u);

// Leray projector I - xi xi^T / |xi|^2 per mode; identity on the mean mode.
SpectralField leray_project(const SpectralField& u);

// i xi . u_hat as a one-component field.
SpectralField divergence(const SpectralField& u);

double max_divergence(const SpectralField& u);

// F(u) = -P div(u (x) u), computed pseudospectrally: dealias, transform to
// physical, pointwise tensor products, transform back, divergence, project,
// negate, dealias. Output carries the div_free certificate.
SpectralField nonlinear_term(const SpectralField& u);

// Scalar potential of the gradient part of div(u (x) u): grad p is exactly
// the complement (I - P) div(u (x) u), zero-mean gauge. The momentum-equation
// pressure is the negative of this potential.
SpectralField pressure_recover(const SpectralField& u);

SpectralField laplacian(const SpectralField& u);
SpectralField gradient(const SpectralField& scalar);  // one component in -> dim components out

// Linear combination helpers; grids must match.
SpectralField axpy(Complex a, const SpectralField& x, const SpectralField& y);  // a*x + y
SpectralField scale(Complex a, const SpectralField& x);
SpectralField subtract(const SpectralField& x, const SpectralField& y);

// Spatial L^p norm on the physical grid; the pointwise magnitude of a vector
// field is Euclidean. p = infinity() gives the grid maximum.
double lp_norm(const SpectralField& u, double p);

// L^2 norm evaluated spectrally through the Parseval identity.
double l2_norm(const SpectralField& u);

double energy(const SpectralField& u);  // 0.5 ||u||_{L^2}^2

// Real L^2 inner product (2pi)^dim sum Re(u_hat conj(v_hat)).
double inner_product_l2(const SpectralField& u, const SpectralField& v);

struct Trajectory {
    fracops::TimeGrid time;
    std::vector<SpectralField> fields;  // one per node
};

void validate(const Trajectory& traj);

struct NormSpec {
    double p = 2.0;  // spatial exponent, in (1, inf]
    double q = 2.0;  // temporal exponent, in [1, inf]
    double t_end = 1.0;
};

// Mixed norm (int_0^t_end ||u(t)||_{L^p}^q dt)^(1/q); trapezoid in time with
// linear interpolation on a partial final interval, max over nodes for
// q = infinity.
double norm_pqT(const Trajectory& traj, const NormSpec& spec);

// Divergence-free initial data.
SpectralField taylor_green(const TorusGrid& grid);

// Taylor-Green plus a small second-shell divergence-free component; activates
// the nonlinearity, which exact Taylor-Green data does not.
SpectralField perturbed_taylor_green(const TorusGrid& grid, double epsilon);

// Hermitian-symmetrized random coefficients on 0 < |xi|_inf <= band, Leray
// projected and rescaled to the requested L^2 norm. Deterministic in seed.
SpectralField random_bandlimited(const TorusGrid& grid, std::uint64_t seed, int band,
                                 double amplitude);

}  // namespace tfns::spectral
