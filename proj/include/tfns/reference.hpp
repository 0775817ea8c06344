#pragma once

#include <vector>

#include "tfns/field.hpp"
#include "tfns/spectral.hpp"

// Deliberately slow, structurally independent reference implementations. Each
// exists to validate a production kernel through a different algorithm; none
// is reachable from the production call graph.
namespace tfns::ref {

// Direct O(size^2) discrete Fourier sum over the full N-dimensional index set,
// same normalization contract as spectral::forward / spectral::inverse.
SpectralField dft_forward(const TorusGrid& grid, const std::vector<std::vector<double>>& samples);
std::vector<std::vector<double>> dft_inverse(const SpectralField& u);

// Nonlinear term by explicit mode-pair convolution over unwrapped integer
// wavenumbers (no FFT, no aliasing by construction), then divergence,
// dealiasing, projection. Cost O(size^2) per tensor entry; small grids only.
SpectralField convolution_nonlinear_term(const SpectralField& u);

// 1D fractional Laplacian at one physical point by principal-value quadrature
// of the singular integral, with the periodic images summed explicitly up to
// the given window and the remainder corrected in closed form. The field is
// evaluated between grid nodes by exact mode summation.
double frac_laplacian_pointwise_1d(const SpectralField& u, double s, double x,
                                   int image_window = 64, int quad_points = 20000);

}  // namespace tfns::ref
