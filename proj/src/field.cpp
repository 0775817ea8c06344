#include "tfns/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tfns/grid.hpp"
#include "tfns/parallel.hpp"

namespace tfns {

TorusGrid TorusGrid::make(int dim, int m) {
    if (dim < 1 || dim > 3) throw std::domain_error("TorusGrid: dim must be 1, 2, or 3");
    if (m < 4 || m % 2 != 0) throw std::domain_error("TorusGrid: need even m >= 4");
    return TorusGrid{dim, m};
}

SpectralField SpectralField::zeros(const TorusGrid& grid, int n_comps) {
    SpectralField u;
    u.grid = grid;
    u.comps.assign(static_cast<std::size_t>(n_comps),
                   std::vector<Complex>(grid.size(), Complex{0.0, 0.0}));
    return u;
}

void validate(const SpectralField& u) {
    if (u.grid.m == 0) throw std::domain_error("SpectralField: uninitialized grid");
    if (u.comps.empty()) throw std::domain_error("SpectralField: no components");
    for (const auto& c : u.comps) {
        if (c.size() != u.grid.size())
            throw std::domain_error("SpectralField: component size " + std::to_string(c.size()) +
                                    " does not match grid size " + std::to_string(u.grid.size()));
        for (const Complex& z : c) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::domain_error("SpectralField: non-finite coefficient");
        }
    }
}

double conjugate_symmetry_error(const SpectralField& u) {
    double worst = 0.0;
    for (const auto& c : u.comps) {
        const double e = deterministic_max(u.grid.size(), [&](std::size_t i) {
            return std::abs(c[i] - std::conj(c[u.grid.reflect(i)]));
        });
        if (e > worst) worst = e;
    }
    return worst;
}

double max_abs_coeff(const SpectralField& u) {
    double worst = 0.0;
    for (const auto& c : u.comps) {
        const double e = deterministic_max(u.grid.size(), [&](std::size_t i) { return std::abs(c[i]); });
        if (e > worst) worst = e;
    }
    return worst;
}

}  // namespace tfns
