#pragma once

#include <cstddef>

namespace tfns {

// Uniform grid on the 2pi-periodic torus. Wavenumbers are integers in
// [-m/2, m/2) per axis, in standard transform ordering (0..m/2-1, -m/2..-1).
struct TorusGrid {
    int dim = 2;
    int m = 0;  // points per axis, even

    static TorusGrid make(int dim, int m);  // validates dim in {1,2,3}, even m >= 4

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(m);
        return s;
    }

    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int a = axis + 1; a < dim; ++a) s *= static_cast<std::size_t>(m);
        return s;
    }

    int axis_index(std::size_t flat, int axis) const {
        return static_cast<int>((flat / stride(axis)) % static_cast<std::size_t>(m));
    }

    int wavenumber(std::size_t flat, int axis) const {
        const int i = axis_index(flat, axis);
        return i < m / 2 ? i : i - m;
    }

    // |xi|^2; integer-valued since the period is 2pi.
    double lambda(std::size_t flat) const {
        long acc = 0;
        for (int a = 0; a < dim; ++a) {
            const long k = wavenumber(flat, a);
            acc += k * k;
        }
        return static_cast<double>(acc);
    }

    int dealias_limit() const { return m / 3; }  // sharp 2/3-rule cutoff

    bool dealias_keep(std::size_t flat) const {
        for (int a = 0; a < dim; ++a) {
            const int k = wavenumber(flat, a);
            if (k > dealias_limit() || k < -dealias_limit()) return false;
        }
        return true;
    }

    // Flat index of -xi (mod m per axis); pairs conjugate modes of real fields.
    std::size_t reflect(std::size_t flat) const {
        std::size_t out = 0;
        for (int a = 0; a < dim; ++a) {
            const int i = axis_index(flat, a);
            const int j = i == 0 ? 0 : m - i;
            out += static_cast<std::size_t>(j) * stride(a);
        }
        return out;
    }

    bool operator==(const TorusGrid&) const = default;
};

}  // namespace tfns
