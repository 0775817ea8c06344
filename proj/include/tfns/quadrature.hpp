#pragma once

#include <cmath>
#include <functional>

#include "tfns/errors.hpp"

namespace tfns {

// Adaptive Simpson on [a, b]. Tolerance is absolute; depth guards runaway
// recursion on non-smooth integrands.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int max_depth = 48) {
    struct Impl {
        const std::function<double(double)>& f;
        int max_depth;
        double run(double a, double m, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            if (depth >= max_depth)
                throw quadrature_error("adaptive_simpson: refinement stalled");
            return run(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
                   run(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        }
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Impl{f, max_depth}.run(a, m, b, fa, fm, fb, whole, abs_tol, 0);
}

}  // namespace tfns
