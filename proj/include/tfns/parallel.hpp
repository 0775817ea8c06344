#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tfns {

// Sums f(0) + ... + f(n-1) with a fixed chunk decomposition: chunks are
// accumulated in parallel, then combined in index order. The result is
// bit-identical for any thread count, which the reproducibility contract of
// the CLI relies on.
template <typename F>
double deterministic_sum(std::size_t n, F&& f) {
    constexpr std::size_t chunk = 1024;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// Max-reduction with the same fixed decomposition; max is order-insensitive,
// the chunking just keeps the loop shape uniform with deterministic_sum.
template <typename F>
double deterministic_max(std::size_t n, F&& f) {
    constexpr std::size_t chunk = 1024;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = f(i);
            if (v > m) m = v;
        }
        partial[static_cast<std::size_t>(c)] = m;
    }
    double total = 0.0;
    for (double m : partial) {
        if (m > total) total = m;
    }
    return total;
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace tfns
