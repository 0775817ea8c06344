#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include "tfns/parallel.hpp"
#include "tfns/reference.hpp"
#include "tfns/spectral.hpp"

// Production kernels against the slow reference implementations the tests
// lean on, plus the serial/parallel split of the pseudospectral pipeline.
// Differences are printed alongside the timings; the parallel gap must be
// exactly zero because reductions are chunked independently of thread count.

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_mode_gap(const tfns::SpectralField& a, const tfns::SpectralField& b) {
    double m = 0.0;
    for (int c = 0; c < a.n_comps(); ++c) {
        const auto& ac = a.comps[static_cast<std::size_t>(c)];
        const auto& bc = b.comps[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < ac.size(); ++i) m = std::max(m, std::abs(ac[i] - bc[i]));
    }
    return m;
}

void bench_transform() {
    const auto grid = tfns::TorusGrid::make(2, 32);
    std::vector<double> samples(grid.size());
    std::mt19937_64 eng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& s : samples) s = dist(eng);

    const int reps = 50;
    tfns::SpectralField fast = tfns::spectral::forward(grid, samples, 1);
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fast = tfns::spectral::forward(grid, samples, 1);
    const double fast_s = seconds_since(t0) / reps;

    const auto t1 = Clock::now();
    const tfns::SpectralField slow = tfns::ref::dft_forward(grid, {samples});
    const double slow_s = seconds_since(t1);

    std::printf("transform       m=32 dim=2   fft %10.6f s   direct %10.6f s   speedup %7.1fx   max gap %.3g\n",
                fast_s, slow_s, slow_s / fast_s, max_mode_gap(fast, slow));
}

void bench_nonlinear_reference() {
    const auto grid = tfns::TorusGrid::make(2, 16);
    const tfns::SpectralField u = tfns::spectral::random_bandlimited(grid, 5, 3, 1.0);

    const int reps = 50;
    tfns::SpectralField fast = tfns::spectral::nonlinear_term(u);
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fast = tfns::spectral::nonlinear_term(u);
    const double fast_s = seconds_since(t0) / reps;

    const auto t1 = Clock::now();
    const tfns::SpectralField slow = tfns::ref::convolution_nonlinear_term(u);
    const double slow_s = seconds_since(t1);

    std::printf("nonlinear term  m=16 dim=2   pseudospectral %10.6f s   convolution %10.6f s   max gap %.3g\n",
                fast_s, slow_s, max_mode_gap(fast, slow));
}

void bench_threading() {
    const auto grid = tfns::TorusGrid::make(2, 64);
    const tfns::SpectralField u = tfns::spectral::random_bandlimited(grid, 7, 8, 1.0);
    const int reps = 200;

    tfns::set_threads(1);
    tfns::SpectralField serial = tfns::spectral::nonlinear_term(u);
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) serial = tfns::spectral::nonlinear_term(u);
    const double serial_s = seconds_since(t0) / reps;

    const int full = tfns::max_threads();
    tfns::set_threads(full);
    tfns::SpectralField parallel = tfns::spectral::nonlinear_term(u);
    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) parallel = tfns::spectral::nonlinear_term(u);
    const double parallel_s = seconds_since(t0) / reps;

    std::printf("nonlinear term  m=64 dim=2   1 thread %10.6f s   %d threads %10.6f s   max gap %.3g\n",
                serial_s, full, parallel_s, max_mode_gap(serial, parallel));
}

}  // namespace

int main() {
    bench_transform();
    bench_nonlinear_reference();
    bench_threading();
    return 0;
}
