#pragma once

#include <complex>
#include <cstddef>

namespace tfns::fft {

using Complex = std::complex<double>;

// Unnormalized DFT of one contiguous line: radix-2 butterflies for powers of
// two, direct O(n^2) summation otherwise (grids only require even n).
// inverse flips the twiddle sign; no 1/n scaling is applied here.
void transform_line(Complex* data, int n, bool inverse);

// All-axes transform of an m^dim cube in row-major layout. Lines are
// gathered, transformed, and scattered with the line loop parallelized.
void transform_cube(Complex* data, int dim, int m, bool inverse);

}  // namespace tfns::fft
