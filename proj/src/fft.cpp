#include "tfns/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tfns::fft {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2, in place, bit-reversal permutation first.
void radix2(Complex* a, int n, bool inverse) {
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / len;
        const Complex wl{std::cos(ang), std::sin(ang)};
        for (int i = 0; i < n; i += len) {
            Complex w{1.0, 0.0};
            for (int k = 0; k < len / 2; ++k) {
                const Complex x = a[i + k];
                const Complex y = a[i + k + len / 2] * w;
                a[i + k] = x + y;
                a[i + k + len / 2] = x - y;
                w *= wl;
            }
        }
    }
}

void direct_dft(Complex* a, int n, bool inverse) {
    std::vector<Complex> out(static_cast<std::size_t>(n));
    const double base = (inverse ? 2.0 : -2.0) * std::numbers::pi / n;
    for (int k = 0; k < n; ++k) {
        Complex s{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            // exact angle reduction keeps the twiddles coherent for large n
            const long long prod = static_cast<long long>(k) * j % n;
            const double ang = base * static_cast<double>(prod);
            s += a[j] * Complex{std::cos(ang), std::sin(ang)};
        }
        out[static_cast<std::size_t>(k)] = s;
    }
    for (int k = 0; k < n; ++k) a[k] = out[static_cast<std::size_t>(k)];
}

}  // namespace

void transform_line(Complex* data, int n, bool inverse) {
    if (n <= 0) throw std::domain_error("transform_line: empty line");
    if (n == 1) return;
    if (is_pow2(n))
        radix2(data, n, inverse);
    else
        direct_dft(data, n, inverse);
}

void transform_cube(Complex* data, int dim, int m, bool inverse) {
    if (dim < 1 || m < 1) throw std::domain_error("transform_cube: bad shape");
    std::size_t size = 1;
    for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(m);
    const std::size_t n_lines = size / static_cast<std::size_t>(m);

    for (int axis = 0; axis < dim; ++axis) {
        // stride between consecutive entries of a line along this axis
        std::size_t stride = 1;
        for (int a = axis + 1; a < dim; ++a) stride *= static_cast<std::size_t>(m);

#pragma omp parallel
        {
            std::vector<Complex> line(static_cast<std::size_t>(m));
#pragma omp for schedule(static)
            for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(n_lines); ++l) {
                // decompose the line id into the base offset of that line
                const std::size_t outer = static_cast<std::size_t>(l) / stride;
                const std::size_t inner = static_cast<std::size_t>(l) % stride;
                const std::size_t base = outer * stride * static_cast<std::size_t>(m) + inner;
                for (int i = 0; i < m; ++i)
                    line[static_cast<std::size_t>(i)] = data[base + static_cast<std::size_t>(i) * stride];
                transform_line(line.data(), m, inverse);
                for (int i = 0; i < m; ++i)
                    data[base + static_cast<std::size_t>(i) * stride] = line[static_cast<std::size_t>(i)];
            }
        }
    }
}

}  // namespace tfns::fft
