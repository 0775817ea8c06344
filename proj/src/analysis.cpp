#include "tfns/analysis.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfns/errors.hpp"
#include "tfns/specfun.hpp"

namespace tfns::analysis {

namespace {

constexpr double kRelSlack = 1e-9;

// All gradient components of a (possibly vector) field as one flat field, so
// lp_norm's Euclidean pointwise magnitude becomes the Frobenius norm of the
// Jacobian.
SpectralField jacobian_stack(const SpectralField& u) {
    SpectralField out;
    out.grid = u.grid;
    for (int c = 0; c < u.n_comps(); ++c) {
        SpectralField scalar;
        scalar.grid = u.grid;
        scalar.comps.push_back(u.comps[static_cast<std::size_t>(c)]);
        SpectralField g = spectral::gradient(scalar);
        for (auto& comp : g.comps) out.comps.push_back(std::move(comp));
    }
    return out;
}

double sobolev_exponent(double p, int dim) {
    return p * static_cast<double>(dim) / (static_cast<double>(dim) - p);
}

}  // namespace

EstimateReport make_report(double lhs, double rhs, std::string context) {
    EstimateReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    if (rhs != 0.0)
        r.ratio = lhs / rhs;
    else
        r.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.holds = lhs <= rhs * (1.0 + kRelSlack);
    r.context = std::move(context);
    return r;
}

GronwallReport gronwall_check(const GronwallInput& input, double t_end) {
    fracops::validate(input.u);
    fracops::validate(input.v);
    fracops::validate(input.g);
    fracops::validate(input.psi);
    if (input.u.grid != input.v.grid || input.u.grid != input.g.grid || input.u.grid != input.psi.grid)
        throw std::domain_error("gronwall_check: signals sampled on different grids");
    if (!(input.alpha > 0.0) || !(input.alpha < 1.0))
        throw std::domain_error("gronwall_check: alpha must lie in (0, 1)");
    if (!(t_end > 0.0)) throw std::domain_error("gronwall_check: need t_end > 0");

    const int n_nodes = input.u.grid.n_nodes();
    for (int i = 0; i < n_nodes; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (input.u.values[k] < 0.0 || input.v.values[k] < 0.0 || input.g.values[k] < 0.0)
            throw std::domain_error("gronwall_check: u, v, g must be nonnegative");
        if (i > 0) {
            if (input.g.values[k] < input.g.values[k - 1])
                throw std::domain_error("gronwall_check: g must be non-decreasing");
            if (input.v.values[k] < input.v.values[k - 1])
                throw std::domain_error("gronwall_check: v must be non-decreasing");
            if (!(input.psi.values[k] > input.psi.values[k - 1]))
                throw std::domain_error("gronwall_check: psi must be strictly increasing");
        }
    }

    int last = 0;
    while (last + 1 < n_nodes &&
           input.u.grid.node(last + 1) <= t_end * (1.0 + 1e-12))
        ++last;

    const double alpha = input.alpha;
    const double gamma_alpha = specfun::gamma_fn(alpha);
    const double psi_span = input.psi.values[static_cast<std::size_t>(last)] - input.psi.values[0];
    const double inf = std::numeric_limits<double>::infinity();

    GronwallReport rep;
    rep.g_is_zero = true;
    for (int i = 0; i <= last; ++i)
        if (input.g.values[static_cast<std::size_t>(i)] != 0.0) rep.g_is_zero = false;

    rep.nodes.reserve(static_cast<std::size_t>(last) + 1);
    rep.holds = true;
    for (int n = 0; n <= last; ++n) {
        const std::size_t ns = static_cast<std::size_t>(n);
        GronwallNode node;
        node.t = input.u.grid.node(n);
        node.u = input.u.values[ns];

        // Integral of psi'(tau) (psi(t_n)-psi(tau))^{alpha-1} v(tau) dtau,
        // evaluated in the substituted variable sigma = psi(tau) with v treated
        // as piecewise linear in sigma. No Gamma normalization here.
        double integral = 0.0;
        const double s_n = input.psi.values[ns];
        for (int k = 0; k < n; ++k) {
            const std::size_t ks = static_cast<std::size_t>(k);
            const double r0 = s_n - input.psi.values[ks];
            const double r1 = s_n - input.psi.values[ks + 1];
            const double dsig = input.psi.values[ks + 1] - input.psi.values[ks];
            const double c1 = (std::pow(r0, alpha) - std::pow(r1, alpha)) / alpha;
            const double c2 = (std::pow(r0, alpha + 1.0) - std::pow(r1, alpha + 1.0)) / (alpha + 1.0);
            integral += (input.v.values[ks] * (c2 - r1 * c1) + input.v.values[ks + 1] * (r0 * c1 - c2)) / dsig;
        }
        node.hypothesis_rhs = input.v.values[ns] + input.g.values[ns] * integral;
        node.hypothesis_ok = node.u <= node.hypothesis_rhs * (1.0 + kRelSlack);

        const double g_n = input.g.values[ns];
        node.envelope = input.v.values[ns] *
                        specfun::mittag_leffler({alpha, 1.0}, g_n * gamma_alpha * std::pow(psi_span, alpha), {}, inf);
        const double span_n = input.psi.values[ns] - input.psi.values[0];
        node.tight_envelope = input.v.values[ns] *
                              specfun::mittag_leffler({alpha, 1.0}, g_n * gamma_alpha * std::pow(span_n, alpha), {}, inf);
        node.conclusion_ok = node.u <= node.envelope * (1.0 + kRelSlack);

        if (node.hypothesis_ok && !node.conclusion_ok) rep.holds = false;
        rep.nodes.push_back(node);
    }

    // Worst conclusion node among those where the hypothesis held.
    double worst = -1.0;
    const GronwallNode* pick = nullptr;
    for (const GronwallNode& node : rep.nodes) {
        if (!node.hypothesis_ok) continue;
        const double ratio = node.envelope != 0.0 ? node.u / node.envelope : (node.u == 0.0 ? 0.0 : inf);
        if (ratio > worst) {
            worst = ratio;
            pick = &node;
        }
    }
    if (pick)
        rep.summary = make_report(pick->u, pick->envelope, "gronwall envelope, worst admissible node");
    else
        rep.summary = make_report(0.0, 0.0, "gronwall envelope, hypothesis vacuous on all nodes");
    return rep;
}

EstimateReport power_inequality_check(double a, double b, double beta, bool probe) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("power_inequality_check: need a, b >= 0");
    if (beta < 1.0 && !probe)
        throw std::domain_error("power_inequality_check: beta < 1 reverses the inequality");
    const double lhs = std::pow(a + b, beta);
    const double rhs = std::pow(2.0, beta - 1.0) * (std::pow(a, beta) + std::pow(b, beta));
    return make_report(lhs, rhs, "power mean split, beta=" + std::to_string(beta));
}

EstimateReport gns_ratio(const SpectralField& u, double p) {
    validate(u);
    const int dim = u.grid.dim;
    if (!(p >= 1.0) || !(p < static_cast<double>(dim)))
        throw std::domain_error("gns_ratio: need 1 <= p < dim");

    // Constants have zero gradient but finite norm; the torus analogue of the
    // decay hypothesis is the zero-mean gauge.
    SpectralField centered = u;
    for (auto& comp : centered.comps) comp[0] = Complex{0.0, 0.0};

    const double grad_norm = spectral::lp_norm(jacobian_stack(centered), p);
    const double u_norm = spectral::lp_norm(centered, sobolev_exponent(p, dim));
    if (grad_norm <= 1e-300)
        throw std::domain_error("gns_ratio: degenerate input with vanishing gradient");
    EstimateReport rep = make_report(u_norm, grad_norm, "sobolev quotient, p=" + std::to_string(p));
    // No sharp constant is certified; the report carries the raw quotient and
    // holds simply records finiteness.
    rep.holds = std::isfinite(rep.ratio);
    return rep;
}

EstimateReport maximal_regularity_ratio(const spectral::Trajectory& h, const solver::SolverConfig& cfg,
                                        const spectral::NormSpec& norm) {
    const double rhs = spectral::norm_pqT(h, norm);
    if (rhs == 0.0) throw std::domain_error("maximal_regularity_ratio: zero forcing is degenerate");

    const spectral::Trajectory u = solver::solve_forced_linear(h, cfg);
    spectral::Trajectory lap;
    lap.time = u.time;
    lap.fields.reserve(u.fields.size());
    for (const SpectralField& f : u.fields) lap.fields.push_back(spectral::laplacian(f));

    EstimateReport rep = make_report(spectral::norm_pqT(lap, norm), rhs, "maximal regularity quotient");
    rep.holds = std::isfinite(rep.ratio);
    return rep;
}

std::pair<EstimateReport, EstimateReport> lemma2_ratios(const spectral::Trajectory& h,
                                                        const solver::SolverConfig& cfg, double p,
                                                        double q) {
    spectral::validate(h);
    const int dim = h.fields.front().grid.dim;
    if (!(p > 1.0) || !(p < static_cast<double>(dim)))
        throw std::domain_error("lemma2_ratios: need 1 < p < dim");
    if (!(q >= 1.0)) throw std::domain_error("lemma2_ratios: need q >= 1");

    const spectral::NormSpec base{p, q, cfg.time.t_end};
    const double rhs = spectral::norm_pqT(h, base);
    if (rhs == 0.0) throw std::domain_error("lemma2_ratios: zero forcing is degenerate");

    const spectral::Trajectory u = solver::solve_forced_linear(h, cfg);
    spectral::Trajectory grad;
    grad.time = u.time;
    grad.fields.reserve(u.fields.size());
    for (const SpectralField& f : u.fields) grad.fields.push_back(jacobian_stack(f));

    EstimateReport first = make_report(spectral::norm_pqT(grad, base), rhs, "gradient quotient");
    first.holds = std::isfinite(first.ratio);

    const spectral::NormSpec sharp{sobolev_exponent(p, dim), q, cfg.time.t_end};
    EstimateReport second = make_report(spectral::norm_pqT(u, sharp), rhs, "sobolev-exponent quotient");
    second.holds = std::isfinite(second.ratio);
    return {first, second};
}

double uniqueness_metric(const spectral::Trajectory& a, const spectral::Trajectory& b, double t_end) {
    spectral::validate(a);
    spectral::validate(b);
    if (a.time != b.time) throw std::domain_error("uniqueness_metric: trajectories on different time grids");
    if (!(a.fields.front().grid == b.fields.front().grid))
        throw std::domain_error("uniqueness_metric: trajectories on different spatial grids");
    if (!(t_end > 0.0) || t_end > a.time.t_end * (1.0 + 1e-12))
        throw std::domain_error("uniqueness_metric: t_end outside the trajectory span");

    const int dim = a.fields.front().grid.dim;
    const auto integrand = [&](int n) {
        const double d = spectral::lp_norm(
            spectral::subtract(a.fields[static_cast<std::size_t>(n)], b.fields[static_cast<std::size_t>(n)]),
            static_cast<double>(dim));
        return d * d * d * d;
    };

    double acc = 0.0;
    double prev_t = 0.0;
    double prev_s = integrand(0);
    for (int n = 1; n < a.time.n_nodes(); ++n) {
        const double t = a.time.node(n);
        const double s = integrand(n);
        if (t <= t_end) {
            acc += 0.5 * (prev_s + s) * (t - prev_t);
            prev_t = t;
            prev_s = s;
            if (t == t_end) break;
        } else {
            // Partial final interval: linear interpolation of the integrand.
            const double frac = (t_end - prev_t) / (t - prev_t);
            const double s_end = prev_s + frac * (s - prev_s);
            acc += 0.5 * (prev_s + s_end) * (t_end - prev_t);
            break;
        }
    }
    return acc;
}

}  // namespace tfns::analysis
