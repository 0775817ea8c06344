#include "tfns/reference.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tfns::ref {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{i 2 pi q / m} with the angle reduced in exact integer arithmetic first.
std::complex<long double> unit_root(long long q, int m) {
    long long r = q % m;
    if (r < 0) r += m;
    const long double ang = 2.0L * std::numbers::pi_v<long double> *
                            static_cast<long double>(r) / static_cast<long double>(m);
    return {std::cos(ang), std::sin(ang)};
}

long long index_dot(const TorusGrid& grid, std::size_t a, std::size_t b) {
    long long dot = 0;
    for (int ax = 0; ax < grid.dim; ++ax)
        dot += static_cast<long long>(grid.axis_index(a, ax)) *
               static_cast<long long>(grid.axis_index(b, ax));
    return dot;
}

}  // namespace

SpectralField dft_forward(const TorusGrid& grid, const std::vector<std::vector<double>>& samples) {
    const std::size_t size = grid.size();
    if (samples.empty()) throw std::domain_error("dft_forward: no components");
    for (const auto& s : samples)
        if (s.size() != size) throw std::domain_error("dft_forward: sample count does not match grid");

    SpectralField out = SpectralField::zeros(grid, static_cast<int>(samples.size()));
    for (std::size_t c = 0; c < samples.size(); ++c) {
        for (std::size_t k = 0; k < size; ++k) {
            long double re = 0.0L, im = 0.0L;
            for (std::size_t x = 0; x < size; ++x) {
                const auto w = unit_root(-index_dot(grid, k, x), grid.m);
                re += samples[c][x] * w.real();
                im += samples[c][x] * w.imag();
            }
            out.comps[c][k] = Complex{static_cast<double>(re / static_cast<long double>(size)),
                                      static_cast<double>(im / static_cast<long double>(size))};
        }
    }
    return out;
}

std::vector<std::vector<double>> dft_inverse(const SpectralField& u) {
    validate(u);
    const std::size_t size = u.grid.size();
    std::vector<std::vector<double>> out(u.comps.size(), std::vector<double>(size));
    for (std::size_t c = 0; c < u.comps.size(); ++c) {
        for (std::size_t x = 0; x < size; ++x) {
            long double re = 0.0L;
            for (std::size_t k = 0; k < size; ++k) {
                const auto w = unit_root(index_dot(u.grid, k, x), u.grid.m);
                re += static_cast<long double>(u.comps[c][k].real()) * w.real() -
                      static_cast<long double>(u.comps[c][k].imag()) * w.imag();
            }
            out[c][x] = static_cast<double>(re);
        }
    }
    return out;
}

SpectralField convolution_nonlinear_term(const SpectralField& u) {
    validate(u);
    const TorusGrid& grid = u.grid;
    const int dim = grid.dim;
    if (u.n_comps() != dim) throw std::domain_error("convolution_nonlinear_term: component count must equal dim");
    const std::size_t size = grid.size();
    const int limit = grid.dealias_limit();

    // Work on the dealiased field so the mode-pair sums see exactly the data
    // the production pipeline multiplies.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < size; ++i)
        if (grid.dealias_keep(i)) kept.push_back(i);
    std::vector<std::vector<Complex>> v(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c) v[static_cast<std::size_t>(c)] = u.comps[static_cast<std::size_t>(c)];

    // True (unwrapped) convolution of the tensor u_j u_l, kept only where the
    // output mode survives the 2/3 mask; wrapped images of in-band pairs land
    // outside the mask, so this coincides with the cyclic product pipeline.
    std::vector<std::vector<Complex>> tensor(static_cast<std::size_t>(dim * dim),
                                             std::vector<Complex>(size, Complex{0.0, 0.0}));
    std::vector<int> q(static_cast<std::size_t>(dim));
    for (std::size_t a : kept) {
        for (std::size_t b : kept) {
            bool in_band = true;
            for (int ax = 0; ax < dim; ++ax) {
                q[static_cast<std::size_t>(ax)] = grid.wavenumber(a, ax) + grid.wavenumber(b, ax);
                if (q[static_cast<std::size_t>(ax)] < -limit || q[static_cast<std::size_t>(ax)] > limit)
                    in_band = false;
            }
            if (!in_band) continue;
            std::size_t flat = 0;
            for (int ax = 0; ax < dim; ++ax) {
                const int idx = q[static_cast<std::size_t>(ax)] >= 0
                                    ? q[static_cast<std::size_t>(ax)]
                                    : q[static_cast<std::size_t>(ax)] + grid.m;
                flat += static_cast<std::size_t>(idx) * grid.stride(ax);
            }
            for (int j = 0; j < dim; ++j)
                for (int l = 0; l < dim; ++l)
                    tensor[static_cast<std::size_t>(j * dim + l)][flat] +=
                        v[static_cast<std::size_t>(j)][a] * v[static_cast<std::size_t>(l)][b];
        }
    }

    // Divergence, projection, sign; all inline so nothing here shares code
    // with the spectral kernels under test.
    SpectralField out = SpectralField::zeros(grid, dim);
    for (std::size_t i = 0; i < size; ++i) {
        if (!grid.dealias_keep(i)) continue;
        double lambda = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
            const double k = grid.wavenumber(i, ax);
            lambda += k * k;
        }
        std::vector<Complex> d(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
        for (int j = 0; j < dim; ++j) {
            Complex acc{0.0, 0.0};
            for (int l = 0; l < dim; ++l)
                acc += Complex{0.0, static_cast<double>(grid.wavenumber(i, l))} *
                       tensor[static_cast<std::size_t>(j * dim + l)][i];
            d[static_cast<std::size_t>(j)] = acc;
        }
        if (lambda > 0.0) {
            Complex dot{0.0, 0.0};
            for (int ax = 0; ax < dim; ++ax)
                dot += static_cast<double>(grid.wavenumber(i, ax)) * d[static_cast<std::size_t>(ax)];
            for (int ax = 0; ax < dim; ++ax)
                d[static_cast<std::size_t>(ax)] -= static_cast<double>(grid.wavenumber(i, ax)) * dot / lambda;
        }
        for (int ax = 0; ax < dim; ++ax)
            out.comps[static_cast<std::size_t>(ax)][i] = -d[static_cast<std::size_t>(ax)];
    }
    out.div_free = true;
    return out;
}

double frac_laplacian_pointwise_1d(const SpectralField& u, double s, double x, int image_window,
                                   int quad_points) {
    validate(u);
    if (u.grid.dim != 1 || u.n_comps() != 1)
        throw std::domain_error("frac_laplacian_pointwise_1d: expects a 1D scalar field");
    if (!(s > 0.0) || !(s < 1.0)) throw std::domain_error("frac_laplacian_pointwise_1d: s must lie in (0,1)");
    if (image_window < 1 || quad_points < 8)
        throw std::domain_error("frac_laplacian_pointwise_1d: window/quad budget too small");

    const int m = u.grid.m;
    const auto& c = u.comps[0];

    // Band-limited evaluation between nodes by direct mode summation.
    const auto eval = [&](double y) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
            const double k = u.grid.wavenumber(i, 0);
            acc += static_cast<long double>(c[i].real()) * std::cos(k * y) -
                   static_cast<long double>(c[i].imag()) * std::sin(k * y);
        }
        return static_cast<double>(acc);
    };

    const double ux = eval(x);
    // Periodicity folds the half-line integral onto [0, 2 pi] against the
    // image sum S(r) = sum_n (2 pi n + r)^(-1-2s).
    const auto images = [&](double r) {
        long double acc = 0.0L;
        for (int n = image_window; n >= 0; --n)
            acc += std::pow(static_cast<long double>(kTwoPi * n + r), static_cast<long double>(-1.0 - 2.0 * s));
        return static_cast<double>(acc);
    };
    const auto defect = [&](double r) { return 2.0 * ux - eval(x + r) - eval(x - r); };

    // [0, pi] under r = pi sigma^gamma: the integrand vanishes linearly at the
    // origin, so plain composite Simpson converges cleanly.
    const double gamma_sub = 2.0 / (2.0 - 2.0 * s);
    long long n1 = quad_points / 2;
    if (n1 % 2 != 0) ++n1;
    long double acc1 = 0.0L;
    const auto f1 = [&](double sigma) {
        if (sigma <= 0.0) return 0.0;
        const double r = std::numbers::pi * std::pow(sigma, gamma_sub);
        return defect(r) * images(r) * std::numbers::pi * gamma_sub * std::pow(sigma, gamma_sub - 1.0);
    };
    const double h1 = 1.0 / static_cast<double>(n1);
    for (long long i = 0; i <= n1; ++i) {
        const double w = (i == 0 || i == n1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc1 += w * f1(static_cast<double>(i) * h1);
    }
    acc1 *= h1 / 3.0L;

    // [pi, 2 pi]: smooth, plain Simpson.
    long long n2 = quad_points / 2;
    if (n2 % 2 != 0) ++n2;
    long double acc2 = 0.0L;
    const double h2 = std::numbers::pi / static_cast<double>(n2);
    for (long long i = 0; i <= n2; ++i) {
        const double w = (i == 0 || i == n2) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double r = std::numbers::pi + static_cast<double>(i) * h2;
        acc2 += w * defect(r) * images(r);
    }
    acc2 *= h2 / 3.0L;

    // Truncated images beyond the window, integrated exactly against the mean
    // of the defect: sum_{n>W} int_0^{2pi} (2 pi n + r)^(-1-2s) dr telescopes.
    const double mean_defect = 2.0 * (ux - c[0].real());
    const double tail = std::pow(kTwoPi * (image_window + 1), -2.0 * s) / (2.0 * s) * mean_defect;

    // Normalization 4^s s Gamma(s + 1/2) / (sqrt(pi) Gamma(1 - s)), written out
    // directly so this path does not depend on the production constant.
    const double cns = std::pow(4.0, s) * s * std::tgamma(s + 0.5) /
                       (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s));
    return cns * (static_cast<double>(acc1 + acc2) + tail);
}

}  // namespace tfns::ref
