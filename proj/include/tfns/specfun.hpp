#pragma once

#include <utility>

namespace tfns::specfun {

// Order pair of E_{alpha,beta}; alpha in (0,1], beta in (0,2].
struct MLParams {
    double alpha;
    double beta;
};

struct EvalPolicy {
    // Baseline Taylor/asymptotic handover radius; the effective radius is
    // rescaled per order, see series_switch_radius().
    double series_cutoff_radius = 10.0;
    double target_abs_tol = 1e-12;
    // Runaway guard, not a precision knob: positive arguments near the cap
    // and orders near one legitimately need a few thousand terms.
    int max_terms = 4000;
};

// Gamma(x) for x > 0 or non-integer negative x; throws std::domain_error at
// poles and non-finite input.
double gamma_fn(double x);

// 1/Gamma(x) for any finite x; exactly zero at the poles x = 0, -1, -2, ...
// This is the series primitive: alternating signs in the Mainardi and
// asymptotic sums enter through it.
double reciprocal_gamma(double x);

// E_{alpha,beta}(z) on z <= z_max, real axis. Taylor series inside the
// switch radius (compensated long double, quad-precision terms in the deep
// cancellation band), truncated algebraic expansion beyond. Accuracy is
// target_abs_tol in the series regime and degrades to ~5e-10 in a band
// around the handover (where the two branches agree to better than 1e-9 by
// construction).
double mittag_leffler(MLParams p, double z, const EvalPolicy& policy = {}, double z_max = 1.0);

// M_alpha(theta) for alpha in (0,1), theta >= 0. Series while cancellation
// is containable (quad-precision terms once it is not containable in long
// double), saddle-point form in the super-exponential tail where values are
// below ~e^{-30} and the missing correction term is ~1e-14 absolute.
double mainardi(double alpha, double theta, const EvalPolicy& policy = {});

struct MomentResult {
    double numeric;      // quadrature of t^r M_alpha(t) over [0, infinity)
    double closed_form;  // Gamma(r+1) / Gamma(alpha r + 1)
};

// Moment integral of the Mainardi density, r > -1. The head [0,1] is
// integrated termwise from the series (exact in the mild t^r singularity),
// the rest adaptively with an asymptotic tail cutoff.
MomentResult mainardi_moment(double alpha, double r, const EvalPolicy& policy = {});

namespace detail {

// Effective Taylor radius for E_{alpha,beta}: pow(21.8, alpha) scaled by
// policy.series_cutoff_radius/10. The 21.8 keeps the optimal-truncation
// floor of the algebraic branch (~e^{-21.8}) below the seam budget; the
// series side holds up to the radius on quad-precision terms.
double series_switch_radius(double alpha, const EvalPolicy& policy);

// Individual branches, exposed for the seam-agreement test.
double ml_series(MLParams p, double z, const EvalPolicy& policy);
double ml_asymptotic(MLParams p, double z, const EvalPolicy& policy);

}  // namespace detail

}  // namespace tfns::specfun
