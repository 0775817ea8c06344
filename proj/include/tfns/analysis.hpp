#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tfns/field.hpp"
#include "tfns/fracops.hpp"
#include "tfns/solver.hpp"
#include "tfns/spectral.hpp"

namespace tfns::analysis {

struct EstimateReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool holds = false;  // lhs <= rhs * (1 + 1e-9)
    std::string context;
};

EstimateReport make_report(double lhs, double rhs, std::string context);

struct GronwallInput {
    fracops::SampledSignal u;    // nonnegative
    fracops::SampledSignal v;    // nonnegative, non-decreasing
    fracops::SampledSignal g;    // nonnegative, non-decreasing
    fracops::SampledSignal psi;  // strictly increasing
    double alpha = 0.5;
};

struct GronwallNode {
    double t = 0.0;
    double u = 0.0;
    // v(t) + g(t) * integral of psi'(tau) (psi(t)-psi(tau))^{alpha-1} v(tau) dtau.
    // The comparison function v appears on both sides; the integral term has no
    // 1/Gamma(alpha) normalization.
    double hypothesis_rhs = 0.0;
    // v(t) * E_alpha(g(t) Gamma(alpha) [psi(T)-psi(0)]^alpha), uniform in t.
    double envelope = 0.0;
    // Same with [psi(t)-psi(0)]^alpha: informational, not part of the verdict.
    double tight_envelope = 0.0;
    bool hypothesis_ok = false;
    bool conclusion_ok = false;
};

struct GronwallReport {
    std::vector<GronwallNode> nodes;
    // true when the conclusion holds at every node where the hypothesis holds
    bool holds = false;
    bool g_is_zero = false;  // degenerate case: envelope reduces to v itself
    EstimateReport summary;  // worst conclusion node among hypothesis-ok nodes
};

// Envelope checker: evaluates both the integral hypothesis and the
// Mittag-Leffler conclusion at every node of the shared grid, restricted to
// nodes with t <= t_end.
GronwallReport gronwall_check(const GronwallInput& input, double t_end);

// (a+b)^beta vs 2^{beta-1}(a^beta + b^beta). beta < 1 is a domain error unless
// probe is set; the probe path exists so tests can confirm the checker flags
// the reversed regime.
EstimateReport power_inequality_check(double a, double b, double beta, bool probe = false);

// ||u - mean||_{L^{pN/(N-p)}} / ||grad u||_{L^p} on the torus. The mean is
// removed first: constants have zero gradient and finite norm, so the raw
// ratio is unbounded without this gauge.
EstimateReport gns_ratio(const SpectralField& u, double p);

// Driven linear problem with zero initial data: reports
// ||Laplacian u||_{p,q,T} / ||h||_{p,q,T}.
EstimateReport maximal_regularity_ratio(const spectral::Trajectory& h,
                                        const solver::SolverConfig& cfg,
                                        const spectral::NormSpec& norm);

// Same pipeline, reporting ||grad u||_{p,q,T}/||h||_{p,q,T} and
// ||u||_{pN/(N-p),q,T}/||h||_{p,q,T}.
std::pair<EstimateReport, EstimateReport> lemma2_ratios(const spectral::Trajectory& h,
                                                        const solver::SolverConfig& cfg,
                                                        double p, double q);

// integral over [0, T] of ||a - b||_{L^N}^4 dt, trapezoid in time. N is the
// grid dimension. Zero exactly when the trajectories coincide at all nodes.
double uniqueness_metric(const spectral::Trajectory& a, const spectral::Trajectory& b, double t_end);

}  // namespace tfns::analysis
