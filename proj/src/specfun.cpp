#include "tfns/specfun.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tfns/errors.hpp"
#include "tfns/quadrature.hpp"

namespace tfns::specfun {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

// Quad pi assembled from a hi/lo double pair; strict ISO mode has no Q
// literals. Residual is ~3e-33.
const __float128 kPiQ =
    static_cast<__float128>(3.14159265358979311600e+00) + static_cast<__float128>(1.22464679914735317720e-16);

// Series terms are evaluated in long double normally and in quad precision
// inside the cancellation band, where a few-ulp lgamma error on a ~40
// magnitude exponent already costs ~1e-17 relative per term and the
// alternating sums amplify that by e^{X}. The overload set below lets the
// summation kernels be written once.
long double t_exp(long double x) { return expl(x); }
long double t_log(long double x) { return logl(x); }
long double t_lgamma(long double x) { return lgammal(x); }
long double t_nearbyint(long double x) { return nearbyintl(x); }
long double t_abs(long double x) { return fabsl(x); }
long double t_pi(long double) { return kPi; }
long double t_sin(long double x) { return sinl(x); }
long double t_fmod(long double x, long double y) { return fmodl(x, y); }
__float128 t_exp(__float128 x) { return expq(x); }
__float128 t_log(__float128 x) { return logq(x); }
__float128 t_lgamma(__float128 x) { return lgammaq(x); }
__float128 t_nearbyint(__float128 x) { return nearbyintq(x); }
__float128 t_abs(__float128 x) { return fabsq(x); }
__float128 t_pi(__float128) { return kPiQ; }
__float128 t_sin(__float128 x) { return sinq(x); }
__float128 t_fmod(__float128 x, __float128 y) { return fmodq(x, y); }

// sin(pi x) via reduction to |r| <= 1/2, keeping Gamma-reflection signs exact
// for arbitrarily large |x|.
template <class T>
T sin_pi(T x) {
    const T m = t_nearbyint(x);
    const T r = x - m;
    const T s = t_sin(t_pi(x) * r);
    return (static_cast<long long>(t_fmod(m, T(2))) == 0) ? s : -s;
}

// log|1/Gamma(x)| with sign; sign = 0 marks a pole (reciprocal exactly zero,
// returned log is meaningless and must not be used).
template <class T>
T log_abs_rgamma(T x, int& sign) {
    if (x > T(0.5)) {
        sign = 1;
        return -t_lgamma(x);
    }
    if (x == t_nearbyint(x)) {
        sign = 0;
        return T(0);
    }
    const T s = sin_pi(x);
    sign = s > T(0) ? 1 : -1;
    return t_lgamma(T(1) - x) + t_log(t_abs(s) / t_pi(x));
}

template <class T>
struct KahanAcc {
    T sum = T(0);
    T comp = T(0);
    void add(T term) {
        const T y = term - comp;
        const T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Cancellation scale of the Mainardi series: intermediate terms reach e^{X}
// while the value itself is ~e^{-X}.
double mainardi_cancellation_scale(double alpha, double theta) {
    return (1.0 - alpha) * std::pow(std::pow(alpha, alpha) * theta, 1.0 / (1.0 - alpha));
}

// Term arithmetic switches to quad once intermediate terms exceed e^{11};
// past e^{30} the saddle form takes over entirely. The low handover keeps
// the long-double noise floor (~1e-17 e^{X}) below what the moment
// quadrature can absorb after the t^r weight.
constexpr double kMainardiQuadBand = 11.0;
constexpr double kMainardiSaddleSwitch = 30.0;

// sum_n (-theta)^n / (n! Gamma(1 - alpha(1+n))). The alternating powers are
// required: positivity and the moment identities both fail without them
// except at alpha = 1/2, where the poles erase every odd term.
template <class T>
double mainardi_series_sum(double alpha, double theta, const EvalPolicy& policy) {
    const T a = static_cast<T>(alpha);
    const T lth = t_log(static_cast<T>(theta));
    KahanAcc<T> acc;
    int tiny_run = 0;
    const T tiny = static_cast<T>(0.001 * policy.target_abs_tol);
    for (int n = 0; n <= policy.max_terms; ++n) {
        int sign = 0;
        const T lr = log_abs_rgamma(T(1) - a * T(1 + n), sign);
        if (n & 1) sign = -sign;
        const T mag = sign == 0 ? T(0) : t_exp(T(n) * lth - t_lgamma(T(n + 1)) + lr);
        acc.add(sign >= 0 ? mag : -mag);
        // Zero pole terms interleave with live ones, so demand a run of small
        // magnitudes before declaring the tail dead.
        if (mag < tiny) {
            if (++tiny_run >= 3 && n >= 3) return static_cast<double>(acc.sum);
        } else {
            tiny_run = 0;
        }
    }
    throw convergence_error("mainardi: series did not settle within max_terms");
}

double mainardi_series(double alpha, double theta, const EvalPolicy& policy) {
    if (mainardi_cancellation_scale(alpha, theta) > kMainardiQuadBand)
        return mainardi_series_sum<__float128>(alpha, theta, policy);
    return mainardi_series_sum<long double>(alpha, theta, policy);
}

// Leading saddle-point form, exact for alpha = 1/2. Used only past the quad
// series band, where values are below ~e^{-30} and the missing O(1/X)
// correction is under 1e-14 absolute.
double mainardi_saddle(double alpha, double theta) {
    const double sigma = std::pow(alpha * theta, 1.0 / (1.0 - alpha));
    const double x = (1.0 - alpha) * sigma / alpha;
    return std::pow(sigma, alpha - 0.5) / std::sqrt(2.0 * kPi * (1.0 - alpha)) * std::exp(-x);
}

}  // namespace

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gamma_fn: non-finite argument");
    if (x <= 0.0 && x == std::nearbyint(x)) throw std::domain_error("gamma_fn: pole at " + std::to_string(x));
    return std::tgamma(x);
}

double reciprocal_gamma(double x) {
    if (!std::isfinite(x)) throw std::domain_error("reciprocal_gamma: non-finite argument");
    int sign = 0;
    const long double lr = log_abs_rgamma(static_cast<long double>(x), sign);
    if (sign == 0) return 0.0;
    return static_cast<double>(sign * expl(lr));
}

namespace detail {

double series_switch_radius(double alpha, const EvalPolicy& policy) {
    // 21.8 puts the optimal-truncation floor of the algebraic branch near
    // e^{-21.8} ~ 3e-10 at the handover; the series side holds its accuracy
    // up to the radius because its term arithmetic goes quad in the band.
    return std::pow(21.8, alpha) * (policy.series_cutoff_radius / 10.0);
}

namespace {

template <class T>
double ml_series_sum(MLParams p, double z, const EvalPolicy& policy) {
    const T a = static_cast<T>(p.alpha), b = static_cast<T>(p.beta);
    const T lz = t_log(static_cast<T>(std::fabs(z)));
    const bool negative = z < 0.0;
    KahanAcc<T> acc;
    int tiny_run = 0;
    const T tiny = static_cast<T>(0.001 * policy.target_abs_tol);
    for (int k = 0; k <= policy.max_terms; ++k) {
        const T lt = (k == 0 ? T(0) : T(k) * lz) - t_lgamma(a * T(k) + b);
        T term = t_exp(lt);
        if (negative && (k & 1)) term = -term;
        acc.add(term);
        // Relative floor: for large positive z the sum grows like e^{z^{1/a}}
        // and an absolute threshold would never be reached; for alternating
        // sums the late partial sums are already near the (small) limit, so
        // the max() keeps the floor absolute there.
        const T floor_ = tiny * std::max(T(1), t_abs(acc.sum));
        if (t_abs(term) < floor_) {
            if (++tiny_run >= 2 && k >= 2) return static_cast<double>(acc.sum);
        } else {
            tiny_run = 0;
        }
    }
    throw convergence_error("mittag_leffler: series did not settle within max_terms");
}

}  // namespace

double ml_series(MLParams p, double z, const EvalPolicy& policy) {
    // Negative-axis cancellation reaches e^{|z|^{1/alpha}}; beyond e^{15} the
    // long-double term error would break the 1e-10 absolute target, so the
    // band up to the switch radius runs in quad precision.
    if (z < 0.0 && std::pow(-z, 1.0 / p.alpha) > 15.0)
        return ml_series_sum<__float128>(p, z, policy);
    return ml_series_sum<long double>(p, z, policy);
}

double ml_asymptotic(MLParams p, double z, const EvalPolicy& policy) {
    // E_{a,b}(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(b - a k). Reflection
    // turns the k-th magnitude into Gamma(a k + 1 - b) x^{-k} |sin(pi(b - a k))| / pi.
    // The sine factor oscillates and hits zero at the poles; with rounded
    // alpha it lands merely near zero, so truncation decisions must use the
    // smooth Gamma envelope, never the raw magnitudes (a near-pole term looks
    // exactly like a settled tail).
    const long double a = p.alpha, b = p.beta;
    const long double lx = logl(static_cast<long double>(-z));
    const long double lpi = logl(kPi);
    KahanAcc<long double> acc;
    long double prev_env = std::numeric_limits<long double>::infinity();
    const long double log_tiny = logl(0.001L * static_cast<long double>(policy.target_abs_tol));
    for (int k = 1; k <= policy.max_terms; ++k) {
        const long double w = a * k + 1.0L - b;
        if (w <= 0.5L) {
            // Only the first few terms when beta > 1 + a k; far from the
            // truncation point, poles drop out exactly.
            int sign = 0;
            const long double lr = log_abs_rgamma(b - a * k, sign);
            if (sign == 0) continue;
            const long double mag = expl(-k * lx + lr);
            const int s = ((k & 1) ? 1 : -1) * sign;
            acc.add(s > 0 ? mag : -mag);
            continue;
        }
        const long double env = t_lgamma(w) - k * lx - lpi;
        if (env >= prev_env) break;  // envelope minimum: optimal truncation
        prev_env = env;
        const long double s = sin_pi(b - a * k);
        if (s != 0.0L) {
            const long double mag = expl(env) * fabsl(s);
            const int sgn = ((k & 1) ? 1 : -1) * (s > 0.0L ? 1 : -1);
            acc.add(sgn > 0 ? mag : -mag);
        }
        if (env < log_tiny) break;  // envelope bounds every remaining term
    }
    return static_cast<double>(acc.sum);
}

}  // namespace detail

double mittag_leffler(MLParams p, double z, const EvalPolicy& policy, double z_max) {
    if (!(p.alpha > 0.0) || p.alpha > 1.0)
        throw std::domain_error("mittag_leffler: alpha must lie in (0, 1]");
    if (!(p.beta > 0.0) || p.beta > 2.0)
        throw std::domain_error("mittag_leffler: beta must lie in (0, 2]");
    if (!std::isfinite(z)) throw std::domain_error("mittag_leffler: non-finite argument");
    if (!(z_max >= 0.0)) throw std::domain_error("mittag_leffler: z_max must be >= 0");
    if (z > z_max) throw std::domain_error("mittag_leffler: argument beyond z_max");
    if (policy.max_terms < 8) throw std::domain_error("mittag_leffler: max_terms too small");
    if (z == 0.0) return reciprocal_gamma(p.beta);
    if (p.alpha == 1.0) {
        if (p.beta == 1.0) return std::exp(z);
        if (p.beta == 2.0) return std::expm1(z) / z;
    }
    if (z >= -detail::series_switch_radius(p.alpha, policy)) return detail::ml_series(p, z, policy);
    return detail::ml_asymptotic(p, z, policy);
}

double mainardi(double alpha, double theta, const EvalPolicy& policy) {
    if (!(alpha > 0.0) || alpha >= 1.0) throw std::domain_error("mainardi: order must lie in (0, 1)");
    if (!std::isfinite(theta) || theta < 0.0) throw std::domain_error("mainardi: theta must be >= 0");
    if (policy.max_terms < 8) throw std::domain_error("mainardi: max_terms too small");
    if (theta == 0.0) return reciprocal_gamma(1.0 - alpha);
    if (mainardi_cancellation_scale(alpha, theta) <= kMainardiSaddleSwitch)
        return mainardi_series(alpha, theta, policy);
    return mainardi_saddle(alpha, theta);
}

MomentResult mainardi_moment(double alpha, double r, const EvalPolicy& policy) {
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::domain_error("mainardi_moment: order must lie in (0, 1)");
    if (!std::isfinite(r) || r <= -1.0) throw std::domain_error("mainardi_moment: need r > -1");

    const double closed = std::tgamma(r + 1.0) / std::tgamma(alpha * r + 1.0);
    const double scale = std::max(std::abs(closed), 1.0);

    // Head [0, 1]: termwise-exact integration of the series against t^r.
    KahanAcc<long double> head;
    {
        int tiny_run = 0;
        bool settled = false;
        for (int n = 0; n <= policy.max_terms && !settled; ++n) {
            int sign = 0;
            const long double lr = log_abs_rgamma(1.0L - static_cast<long double>(alpha) * (1 + n), sign);
            if (n & 1) sign = -sign;
            const long double mag =
                sign == 0 ? 0.0L : expl(lr - lgammal(n + 1.0L) - logl(n + r + 1.0L));
            head.add(sign >= 0 ? mag : -mag);
            if (mag < 1e-17L * scale) {
                if (++tiny_run >= 3 && n >= 3) settled = true;
            } else {
                tiny_run = 0;
            }
        }
        if (!settled) throw convergence_error("mainardi_moment: head series did not settle");
    }

    // Body [1, t_max]: adaptive quadrature with the truncation point pushed
    // until the integrand is negligible (decay past the saddle regime is
    // faster than exponential).
    const auto integrand = [&](double t) { return std::pow(t, r) * mainardi(alpha, t, policy); };
    double t_max = 2.0;
    while (integrand(t_max) * t_max > 1e-11 * scale) {
        t_max *= 2.0;
        if (t_max > 1e6) throw quadrature_error("mainardi_moment: truncation point ran away");
    }
    const double body = adaptive_simpson(integrand, 1.0, t_max, 1e-10 * scale);

    return {static_cast<double>(head.sum) + body, closed};
}

}  // namespace tfns::specfun
