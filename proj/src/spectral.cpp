#include "tfns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tfns/errors.hpp"
#include "tfns/fft.hpp"
#include "tfns/parallel.hpp"

namespace tfns::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cell_volume(const TorusGrid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= kTwoPi / g.m;
    return v;
}

double torus_volume(const TorusGrid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= kTwoPi;
    return v;
}

// Forward transform of one scalar component already in a complex buffer.
void forward_scalar(const TorusGrid& g, std::vector<Complex>& buf) {
    fft::transform_cube(buf.data(), g.dim, g.m, false);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (Complex& z : buf) z *= inv;
}

std::vector<Complex> to_complex(const double* samples, std::size_t n) {
    std::vector<Complex> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = Complex{samples[i], 0.0};
    return buf;
}

}  // namespace

SpectralField forward(const TorusGrid& grid, const std::vector<double>& samples, int n_comps) {
    if (n_comps < 1) throw std::domain_error("forward: need at least one component");
    const std::size_t size = grid.size();
    if (samples.size() != static_cast<std::size_t>(n_comps) * size)
        throw std::domain_error("forward: sample count does not match grid");
    SpectralField u = SpectralField::zeros(grid, n_comps);
    for (int c = 0; c < n_comps; ++c) {
        auto buf = to_complex(samples.data() + static_cast<std::size_t>(c) * size, size);
        forward_scalar(grid, buf);
        u.comps[static_cast<std::size_t>(c)] = std::move(buf);
    }
    return u;
}

std::vector<double> inverse(const SpectralField& u) {
    const std::size_t size = u.grid.size();
    std::vector<double> out(static_cast<std::size_t>(u.n_comps()) * size);
    for (int c = 0; c < u.n_comps(); ++c) {
        std::vector<Complex> buf = u.comps[static_cast<std::size_t>(c)];
        fft::transform_cube(buf.data(), u.grid.dim, u.grid.m, true);
        double* dst = out.data() + static_cast<std::size_t>(c) * size;
        for (std::size_t i = 0; i < size; ++i) dst[i] = buf[i].real();
    }
    return out;
}

SpectralField dealias(const SpectralField& u) {
    SpectralField out = u;
    const std::size_t size = u.grid.size();
    for (auto& c : out.comps) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i) {
            if (!u.grid.dealias_keep(static_cast<std::size_t>(i)))
                c[static_cast<std::size_t>(i)] = Complex{0.0, 0.0};
        }
    }
    return out;
}

SpectralField leray_project(const SpectralField& u) {
    if (u.n_comps() != u.grid.dim)
        throw std::domain_error("leray_project: component count must equal dim");
    SpectralField out = u;
    const std::size_t size = u.grid.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(size); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double lam = u.grid.lambda(i);
        if (lam == 0.0) continue;  // projector is the identity on the mean mode
        Complex dot{0.0, 0.0};
        for (int j = 0; j < u.grid.dim; ++j)
            dot += static_cast<double>(u.grid.wavenumber(i, j)) * out.comps[static_cast<std::size_t>(j)][i];
        dot /= lam;
        for (int j = 0; j < u.grid.dim; ++j)
            out.comps[static_cast<std::size_t>(j)][i] -= static_cast<double>(u.grid.wavenumber(i, j)) * dot;
    }
    out.div_free = true;
    return out;
}

SpectralField divergence(const SpectralField& u) {
    if (u.n_comps() != u.grid.dim)
        throw std::domain_error("divergence: component count must equal dim");
    SpectralField out = SpectralField::zeros(u.grid, 1);
    const std::size_t size = u.grid.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(size); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        Complex dot{0.0, 0.0};
        for (int j = 0; j < u.grid.dim; ++j)
            dot += static_cast<double>(u.grid.wavenumber(i, j)) * u.comps[static_cast<std::size_t>(j)][i];
        out.comps[0][i] = Complex{0.0, 1.0} * dot;
    }
    return out;
}

double max_divergence(const SpectralField& u) {
    if (u.n_comps() != u.grid.dim)
        throw std::domain_error("max_divergence: component count must equal dim");
    return deterministic_max(u.grid.size(), [&](std::size_t i) {
        Complex dot{0.0, 0.0};
        for (int j = 0; j < u.grid.dim; ++j)
            dot += static_cast<double>(u.grid.wavenumber(i, j)) * u.comps[static_cast<std::size_t>(j)][i];
        return std::abs(dot);
    });
}

SpectralField nonlinear_term(const SpectralField& u) {
    if (u.n_comps() != u.grid.dim)
        throw std::domain_error("nonlinear_term: component count must equal dim");
    const TorusGrid& g = u.grid;
    const std::size_t size = g.size();
    const int d = g.dim;

    const SpectralField ud = dealias(u);
    const std::vector<double> phys = inverse(ud);

    // T_hat[j][k], exploiting symmetry of the tensor.
    std::vector<std::vector<Complex>> tensor(static_cast<std::size_t>(d * d));
    std::vector<double> prod(size);
    for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) {
            const double* pj = phys.data() + static_cast<std::size_t>(j) * size;
            const double* pk = phys.data() + static_cast<std::size_t>(k) * size;
            for (std::size_t i = 0; i < size; ++i) prod[i] = pj[i] * pk[i];
            auto buf = to_complex(prod.data(), size);
            forward_scalar(g, buf);
            tensor[static_cast<std::size_t>(j * d + k)] = buf;
            if (k != j) tensor[static_cast<std::size_t>(k * d + j)] = std::move(buf);
        }
    }

    SpectralField div_t = SpectralField::zeros(g, d);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(size); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        if (!g.dealias_keep(i)) continue;
        for (int j = 0; j < d; ++j) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < d; ++k)
                acc += static_cast<double>(g.wavenumber(i, k)) * tensor[static_cast<std::size_t>(j * d + k)][i];
            div_t.comps[static_cast<std::size_t>(j)][i] = Complex{0.0, 1.0} * acc;
        }
    }

    SpectralField out = leray_project(div_t);
    for (auto& c : out.comps)
        for (Complex& z : c) z = -z;
    out.div_free = true;
    return out;
}

SpectralField pressure_recover(const SpectralField& u) {
    if (u.n_comps() != u.grid.dim)
        throw std::domain_error("pressure_recover: component count must equal dim");
    const TorusGrid& g = u.grid;
    const std::size_t size = g.size();
    const int d = g.dim;

    const SpectralField ud = dealias(u);
    const std::vector<double> phys = inverse(ud);

    std::vector<std::vector<Complex>> tensor(static_cast<std::size_t>(d * d));
    std::vector<double> prod(size);
    for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) {
            const double* pj = phys.data() + static_cast<std::size_t>(j) * size;
            const double* pk = phys.data() + static_cast<std::size_t>(k) * size;
            for (std::size_t i = 0; i < size; ++i) prod[i] = pj[i] * pk[i];
            auto buf = to_complex(prod.data(), size);
            forward_scalar(g, buf);
            tensor[static_cast<std::size_t>(j * d + k)] = buf;
            if (k != j) tensor[static_cast<std::size_t>(k * d + j)] = std::move(buf);
        }
    }

    SpectralField p = SpectralField::zeros(g, 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(size); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double lam = g.lambda(i);
        if (lam == 0.0 || !g.dealias_keep(i)) continue;  // zero-mean gauge
        Complex acc{0.0, 0.0};
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                acc += static_cast<double>(g.wavenumber(i, j)) * static_cast<double>(g.wavenumber(i, k)) *
                       tensor[static_cast<std::size_t>(j * d + k)][i];
        p.comps[0][i] = acc / lam;
    }
    return p;
}

SpectralField laplacian(const SpectralField& u) {
    SpectralField out = u;
    const std::size_t size = u.grid.size();
    for (auto& c : out.comps) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
            c[static_cast<std::size_t>(i)] *= -u.grid.lambda(static_cast<std::size_t>(i));
    }
    return out;
}

SpectralField gradient(const SpectralField& scalar) {
    if (scalar.n_comps() != 1) throw std::domain_error("gradient: expects a scalar field");
    const TorusGrid& g = scalar.grid;
    SpectralField out = SpectralField::zeros(g, g.dim);
    const std::size_t size = g.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(size); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const Complex v = Complex{0.0, 1.0} * scalar.comps[0][i];
        for (int j = 0; j < g.dim; ++j)
            out.comps[static_cast<std::size_t>(j)][i] = static_cast<double>(g.wavenumber(i, j)) * v;
    }
    return out;
}

SpectralField axpy(Complex a, const SpectralField& x, const SpectralField& y) {
    if (!(x.grid == y.grid) || x.n_comps() != y.n_comps())
        throw std::domain_error("axpy: field shapes differ");
    SpectralField out = y;
    const std::size_t size = x.grid.size();
    for (int c = 0; c < x.n_comps(); ++c) {
        const auto& xc = x.comps[static_cast<std::size_t>(c)];
        auto& oc = out.comps[static_cast<std::size_t>(c)];
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(size); ++i)
            oc[static_cast<std::size_t>(i)] += a * xc[static_cast<std::size_t>(i)];
    }
    out.div_free = x.div_free && y.div_free;
    return out;
}

SpectralField scale(Complex a, const SpectralField& x) {
    SpectralField out = x;
    for (auto& c : out.comps)
        for (Complex& z : c) z *= a;
    return out;
}

SpectralField subtract(const SpectralField& x, const SpectralField& y) {
    return axpy(Complex{-1.0, 0.0}, y, x);
}

double lp_norm(const SpectralField& u, double p) {
    if (p < 1.0) throw std::domain_error("lp_norm: need p >= 1");
    const std::size_t size = u.grid.size();
    const std::vector<double> phys = inverse(u);
    const int n = u.n_comps();
    const auto magnitude = [&](std::size_t i) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) {
            const double v = phys[static_cast<std::size_t>(c) * size + i];
            s += v * v;
        }
        return std::sqrt(s);
    };
    if (std::isinf(p)) return deterministic_max(size, magnitude);
    const double sum = deterministic_sum(size, [&](std::size_t i) { return std::pow(magnitude(i), p); });
    return std::pow(cell_volume(u.grid) * sum, 1.0 / p);
}

double l2_norm(const SpectralField& u) {
    const std::size_t size = u.grid.size();
    double acc = 0.0;
    for (const auto& c : u.comps)
        acc += deterministic_sum(size, [&](std::size_t i) { return std::norm(c[i]); });
    return std::sqrt(torus_volume(u.grid) * acc);
}

double energy(const SpectralField& u) {
    const double n = l2_norm(u);
    return 0.5 * n * n;
}

double inner_product_l2(const SpectralField& u, const SpectralField& v) {
    if (!(u.grid == v.grid) || u.n_comps() != v.n_comps())
        throw std::domain_error("inner_product_l2: field shapes differ");
    const std::size_t size = u.grid.size();
    double acc = 0.0;
    for (int c = 0; c < u.n_comps(); ++c) {
        const auto& uc = u.comps[static_cast<std::size_t>(c)];
        const auto& vc = v.comps[static_cast<std::size_t>(c)];
        acc += deterministic_sum(size, [&](std::size_t i) {
            return uc[i].real() * vc[i].real() + uc[i].imag() * vc[i].imag();
        });
    }
    return torus_volume(u.grid) * acc;
}

void validate(const Trajectory& traj) {
    fracops::validate(traj.time);
    if (traj.fields.size() != static_cast<std::size_t>(traj.time.n_nodes()))
        throw std::domain_error("Trajectory: field count does not match time grid");
    for (const auto& f : traj.fields) {
        tfns::validate(f);
        if (!(f.grid == traj.fields.front().grid))
            throw std::domain_error("Trajectory: fields on mixed grids");
    }
}

double norm_pqT(const Trajectory& traj, const NormSpec& spec) {
    if (spec.p < 1.0 || spec.q < 1.0) throw std::domain_error("norm_pqT: need p, q >= 1");
    if (!(spec.t_end > 0.0)) throw std::domain_error("norm_pqT: need t_end > 0");
    if (spec.t_end > traj.time.t_end * (1.0 + 1e-12))
        throw std::domain_error("norm_pqT: t_end exceeds trajectory span");

    std::vector<double> s(traj.fields.size());
    for (std::size_t n = 0; n < traj.fields.size(); ++n) s[n] = lp_norm(traj.fields[n], spec.p);

    const double t_end = std::min(spec.t_end, traj.time.t_end);
    if (std::isinf(spec.q)) {
        double m = 0.0;
        for (std::size_t n = 0; n < s.size(); ++n) {
            if (traj.time.node(static_cast<int>(n)) > t_end * (1.0 + 1e-12)) break;
            m = std::max(m, s[n]);
        }
        return m;
    }

    double acc = 0.0;
    for (int n = 0; n + 1 < traj.time.n_nodes(); ++n) {
        const double t0 = traj.time.node(n), t1 = traj.time.node(n + 1);
        const double a = std::pow(s[static_cast<std::size_t>(n)], spec.q);
        const double b = std::pow(s[static_cast<std::size_t>(n + 1)], spec.q);
        if (t1 <= t_end) {
            acc += 0.5 * (t1 - t0) * (a + b);
        } else {
            // partial final interval: interpolate the norm itself linearly
            const double w = (t_end - t0) / (t1 - t0);
            const double s_mid = (1.0 - w) * s[static_cast<std::size_t>(n)] +
                                 w * s[static_cast<std::size_t>(n + 1)];
            acc += 0.5 * (t_end - t0) * (a + std::pow(s_mid, spec.q));
            break;
        }
    }
    return std::pow(acc, 1.0 / spec.q);
}

SpectralField taylor_green(const TorusGrid& grid) {
    if (grid.dim != 2) throw std::domain_error("taylor_green: 2D profile");
    const std::size_t size = grid.size();
    std::vector<double> samples(2 * size);
    for (std::size_t i = 0; i < size; ++i) {
        const double x1 = kTwoPi * grid.axis_index(i, 0) / grid.m;
        const double x2 = kTwoPi * grid.axis_index(i, 1) / grid.m;
        samples[i] = std::sin(x1) * std::cos(x2);
        samples[size + i] = -std::cos(x1) * std::sin(x2);
    }
    return leray_project(forward(grid, samples, 2));
}

SpectralField perturbed_taylor_green(const TorusGrid& grid, double epsilon) {
    if (grid.dim != 2) throw std::domain_error("perturbed_taylor_green: 2D profile");
    const std::size_t size = grid.size();
    std::vector<double> samples(2 * size);
    for (std::size_t i = 0; i < size; ++i) {
        const double x1 = kTwoPi * grid.axis_index(i, 0) / grid.m;
        const double x2 = kTwoPi * grid.axis_index(i, 1) / grid.m;
        // second-shell divergence-free component; the quadratic term no
        // longer vanishes on this profile
        samples[i] = std::sin(x1) * std::cos(x2) + epsilon * std::sin(2.0 * x1) * std::cos(x2);
        samples[size + i] = -std::cos(x1) * std::sin(x2) - epsilon * 2.0 * std::cos(2.0 * x1) * std::sin(x2);
    }
    return leray_project(forward(grid, samples, 2));
}

SpectralField random_bandlimited(const TorusGrid& grid, std::uint64_t seed, int band,
                                 double amplitude) {
    if (band < 1 || band > grid.dealias_limit())
        throw std::domain_error("random_bandlimited: band must lie in [1, m/3]");
    if (!(amplitude > 0.0)) throw std::domain_error("random_bandlimited: need amplitude > 0");

    std::mt19937_64 eng(seed);
    const auto uniform = [&]() {
        // top 53 bits to a double in [-1, 1); independent of platform RNG
        // distribution quirks, so seeds reproduce across toolchains
        return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
    };

    SpectralField u = SpectralField::zeros(grid, grid.dim);
    const std::size_t size = grid.size();
    for (int c = 0; c < grid.dim; ++c) {
        for (std::size_t i = 0; i < size; ++i) {
            bool in_band = true;
            bool at_origin = true;
            for (int a = 0; a < grid.dim; ++a) {
                const int k = grid.wavenumber(i, a);
                if (k != 0) at_origin = false;
                if (k > band || k < -band) in_band = false;
            }
            if (!in_band || at_origin) continue;
            u.comps[static_cast<std::size_t>(c)][i] = Complex{uniform(), uniform()};
        }
    }

    // Hermitian symmetrization keeps the field real in physical space.
    for (int c = 0; c < grid.dim; ++c) {
        auto& uc = u.comps[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t r = grid.reflect(i);
            if (r < i) continue;
            if (r == i) {
                uc[i] = Complex{uc[i].real(), 0.0};
            } else {
                const Complex avg = 0.5 * (uc[i] + std::conj(uc[r]));
                uc[i] = avg;
                uc[r] = std::conj(avg);
            }
        }
    }

    u = leray_project(u);
    const double n = l2_norm(u);
    if (n == 0.0) throw std::domain_error("random_bandlimited: projection annihilated the draw");
    return scale(Complex{amplitude / n, 0.0}, u);
}

}  // namespace tfns::spectral
