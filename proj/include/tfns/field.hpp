#pragma once

#include <complex>
#include <vector>

#include "tfns/grid.hpp"

namespace tfns {

using Complex = std::complex<double>;

// Fourier coefficients of a real field on the torus, component-major. A
// scalar is the n_comps() == 1 case; velocity fields carry grid.dim
// components. div_free is a certificate set by the projector and preserved
// by the solver, not a request.
struct SpectralField {
    TorusGrid grid;
    std::vector<std::vector<Complex>> comps;
    bool div_free = false;

    int n_comps() const { return static_cast<int>(comps.size()); }

    static SpectralField zeros(const TorusGrid& grid, int n_comps);
};

void validate(const SpectralField& u);

// Largest |u_hat(xi) - conj(u_hat(-xi))| over modes and components; zero for
// fields that are real in physical space.
double conjugate_symmetry_error(const SpectralField& u);

double max_abs_coeff(const SpectralField& u);

}  // namespace tfns
