#ifndef ROBERTSON_THEOREMS_HPP
#define ROBERTSON_THEOREMS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <robertson/disk_sup.hpp>
#include <robertson/errors.hpp>
#include <robertson/functions.hpp>
#include <robertson/quadrature.hpp>
#include <robertson/robertson_class.hpp>
#include <robertson/schwarzian.hpp>

namespace robertson
{

enum class verdict { pass, fail, precondition_unmet };

inline const char *to_string(verdict v)
{
    switch (v) {
        case verdict::pass:
            return "pass";
        case verdict::fail:
            return "fail";
        default:
            return "precondition_unmet";
    }
}

// Outcome of one theorem verifier. `max_violation` is the largest amount by
// which the checked inequality is exceeded (negative means slack); status is
// fail iff it exceeds `tolerance`.
struct theorem_report {
    std::string theorem_id;
    verdict status = verdict::pass;
    double max_violation = 0.0;
    std::optional<cplx> witness;
    double tolerance = 0.0;
    std::string details;
    // Named numbers behind the verdict (estimates, bounds, margins).
    std::vector<std::pair<std::string, double>> metrics;

    double metric(const std::string &name) const
    {
        for (const auto &[k, v] : metrics) {
            if (k == name) {
                return v;
            }
        }
        throw invalid_input("theorem_report: no metric named " + name);
    }
};

inline constexpr double f2_zero_tolerance = 1e-10;

struct growth_bounds_t {
    double r = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

// int_0^r (1 + x^2)^{-cos a} dx and int_0^r (1 - x^2)^{-cos a} dx.
inline growth_bounds_t growth_bounds(double r, alpha_angle alpha, double tol = 1e-10)
{
    if (!(r >= 0.0 && r <= 0.999)) {
        throw invalid_input("growth_bounds: r must lie in [0, 0.999]");
    }
    const double c = alpha.cos();
    growth_bounds_t g;
    g.r = r;
    g.lower = quadrature([c](double x) { return std::pow(1.0 + x * x, -c); }, 0.0, r, tol);
    g.upper = quadrature([c](double x) { return std::pow((1.0 - x) * (1.0 + x), -c); }, 0.0, r, tol);
    return g;
}

inline double t43_bound(alpha_angle alpha)
{
    return 2.0 * alpha.cos();
}

inline double t44_bound(alpha_angle alpha)
{
    const double c = alpha.cos();
    return 2.0 * c * (2.0 - c);
}

// 2 cos a (1 + (1 - cos a)(1 + g)/(1 - g)), g = |f''(0)| / (2 cos a) < 1.
inline double t45_bound(alpha_angle alpha, double gamma)
{
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw invalid_input("t45_bound: gamma must lie in [0, 1)");
    }
    const double c = alpha.cos();
    return 2.0 * c * (1.0 + (1.0 - c) * (1.0 + gamma) / (1.0 - gamma));
}

namespace detail
{

inline std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline theorem_report unmet(std::string id, double tol, std::string why)
{
    theorem_report r;
    r.theorem_id = std::move(id);
    r.status = verdict::precondition_unmet;
    r.tolerance = tol;
    r.details = std::move(why);
    return r;
}

inline void finish(theorem_report &r, const std::string &what)
{
    r.status = r.max_violation > r.tolerance ? verdict::fail : verdict::pass;
    r.details = what + "; max violation " + num(r.max_violation) + " against tolerance " + num(r.tolerance);
}

// Membership (and optionally f''(0) = 0) required by the norm and
// distortion verifiers. Returns a precondition report when unmet.
inline std::optional<theorem_report> require_member(const std::string &id, const analytic_fn &f, alpha_angle alpha,
                                                    const sampling_plan &plan, double tol, bool need_zero_f2,
                                                    unsigned threads, std::vector<std::pair<std::string, double>> &metrics)
{
    if (!f.normalized()) {
        return unmet(id, tol, "function is not normalized (f(0) = 0, f'(0) = 1)");
    }
    const auto margin = robertson_margin(f, alpha, plan, threads);
    metrics.emplace_back("robertson_margin", margin.inf_value);
    if (!certified_member(margin)) {
        auto r = unmet(id, tol,
                       "not a certified member of S_alpha: sampled margin " + num(margin.inf_value) + " < -"
                           + num(membership_tolerance));
        r.witness = margin.witness;
        return r;
    }
    const double f2 = std::abs(second_deriv_origin(f));
    metrics.emplace_back("abs_f2_origin", f2);
    if (need_zero_f2 && f2 > f2_zero_tolerance) {
        return unmet(id, tol, "requires f''(0) = 0, got |f''(0)| = " + num(f2));
    }
    return std::nullopt;
}

} // namespace detail

// Equivalence of membership with the half-plane and disk characterizations:
// for a certified member both residual minima must be >= -tol.
inline theorem_report verify_T41(const analytic_fn &f, alpha_angle alpha, const sampling_plan &plan = {},
                                 double tol = membership_tolerance, unsigned threads = 1)
{
    const std::string id = "T41";
    if (!f.normalized()) {
        return detail::unmet(id, tol, "function is not normalized (f(0) = 0, f'(0) = 1)");
    }
    const auto margin = robertson_margin(f, alpha, plan, threads);
    if (!certified_member(margin)) {
        auto r = detail::unmet(id, tol,
                               "not a member (sampled margin " + detail::num(margin.inf_value)
                                   + "); the implications are vacuous");
        r.metrics.emplace_back("robertson_margin", margin.inf_value);
        r.witness = margin.witness;
        return r;
    }
    const auto opts = scan_for(f, threads);
    const auto ii = weighted_inf_re([&](cplx z) { return cplx(characterization_residuals(f, alpha, z).res_ii); },
                                    plan, opts);
    const auto iii = weighted_inf_re([&](cplx z) { return cplx(characterization_residuals(f, alpha, z).res_iii); },
                                     plan, opts);
    theorem_report r;
    r.theorem_id = id;
    r.tolerance = tol;
    r.metrics = {{"robertson_margin", margin.inf_value}, {"min_res_ii", ii.inf_value}, {"min_res_iii", iii.inf_value}};
    if (ii.inf_value <= iii.inf_value) {
        r.max_violation = -ii.inf_value;
        r.witness = ii.witness;
    } else {
        r.max_violation = -iii.inf_value;
        r.witness = iii.witness;
    }
    detail::finish(r, "member; min res_ii " + detail::num(ii.inf_value) + ", min res_iii " + detail::num(iii.inf_value));
    return r;
}

// (1 + |z|^2)^{-cos a} <= |f'(z)| <= (1 - |z|^2)^{-cos a} at each point.
inline theorem_report verify_T42_distortion(const analytic_fn &f, alpha_angle alpha, std::span<const cplx> points,
                                            double tol = 1e-8, const sampling_plan &plan = {}, unsigned threads = 1)
{
    const std::string id = "T42d";
    std::vector<std::pair<std::string, double>> metrics;
    if (auto r = detail::require_member(id, f, alpha, plan, tol, true, threads, metrics)) {
        r->metrics = std::move(metrics);
        return *r;
    }
    theorem_report r;
    r.theorem_id = id;
    r.tolerance = tol;
    r.max_violation = -std::numeric_limits<double>::infinity();
    const double c = alpha.cos();
    double worst_lower = -std::numeric_limits<double>::infinity(), worst_upper = worst_lower;
    for (const auto &z : points) {
        const double s = std::norm(z);
        const double lo = std::pow(1.0 + s, -c), hi = std::pow(1.0 - s, -c);
        const double m = std::abs(eval_slopes(f, z).f1);
        worst_lower = std::max(worst_lower, lo - m);
        worst_upper = std::max(worst_upper, m - hi);
        const double v = std::max(lo - m, m - hi);
        if (v > r.max_violation) {
            r.max_violation = v;
            r.witness = z;
        }
    }
    metrics.emplace_back("worst_lower_violation", worst_lower);
    metrics.emplace_back("worst_upper_violation", worst_upper);
    r.metrics = std::move(metrics);
    detail::finish(r, "distortion at " + std::to_string(points.size()) + " points");
    return r;
}

// |f(z)| by integrating f' along [0, z].
inline cplx ray_integral(const analytic_fn &f, cplx z, double tol = 1e-12)
{
    return z * quadrature([&](double t) { return eval_slopes(f, t * z).f1; }, 0.0, 1.0, tol);
}

// lower(|z|) <= |f(z)| <= upper(|z|) at each point. For series-backed f the
// value comes from the series (integration of f'), cross-checked against
// quadrature of f' along the ray; a disagreement above tol counts as a
// violation.
inline theorem_report verify_T42_growth(const analytic_fn &f, alpha_angle alpha, std::span<const cplx> points,
                                        double tol = 1e-7, const sampling_plan &plan = {}, unsigned threads = 1)
{
    const std::string id = "T42g";
    std::vector<std::pair<std::string, double>> metrics;
    if (auto r = detail::require_member(id, f, alpha, plan, tol, true, threads, metrics)) {
        r->metrics = std::move(metrics);
        return *r;
    }
    const bool series = f.is<catalog::series_backed>();
    theorem_report r;
    r.theorem_id = id;
    r.tolerance = tol;
    r.max_violation = -std::numeric_limits<double>::infinity();
    double cross = 0.0;
    for (const auto &z : points) {
        const auto gb = growth_bounds(std::abs(z), alpha);
        const cplx value = eval_derivatives(f, z).f;
        double v = std::max(gb.lower - std::abs(value), std::abs(value) - gb.upper);
        if (series) {
            const double d = std::abs(value - ray_integral(f, z));
            cross = std::max(cross, d);
            v = std::max(v, d);
        }
        if (v > r.max_violation) {
            r.max_violation = v;
            r.witness = z;
        }
    }
    metrics.emplace_back("series_vs_quadrature", cross);
    r.metrics = std::move(metrics);
    detail::finish(r, "growth at " + std::to_string(points.size()) + " points");
    return r;
}

namespace detail
{

template <typename G>
theorem_report norm_verifier(const std::string &id, const analytic_fn &f, alpha_angle alpha, const G &g, int k,
                             double bound, bool need_zero_f2, const sampling_plan &plan, double tol, unsigned threads)
{
    std::vector<std::pair<std::string, double>> metrics;
    auto pre = require_member(id, f, alpha, plan, tol, need_zero_f2, threads, metrics);
    const auto est = weighted_sup(g, k, plan, scan_for(f, threads));
    metrics.emplace_back("estimate", est.value);
    metrics.emplace_back("bound", bound);
    metrics.emplace_back("converged", est.converged ? 1.0 : 0.0);
    const std::string side = "norm estimate " + num(est.value) + (est.value > bound ? " > " : " <= ") + "bound "
                             + num(bound);
    if (pre) {
        pre->metrics = std::move(metrics);
        pre->details += "; side report: " + side;
        return *pre;
    }
    theorem_report r;
    r.theorem_id = id;
    r.tolerance = tol;
    r.max_violation = est.value - bound;
    r.witness = est.witness;
    r.metrics = std::move(metrics);
    finish(r, side);
    return r;
}

} // namespace detail

// ||Pf|| <= 2 cos a for members with f''(0) = 0.
inline theorem_report verify_T43(const analytic_fn &f, alpha_angle alpha, const sampling_plan &plan = {},
                                 double tol = 1e-4, unsigned threads = 1)
{
    return detail::norm_verifier(
        "T43", f, alpha, [&](cplx z) { return pre_schwarzian_at(f, z); }, 1, t43_bound(alpha), true, plan, tol,
        threads);
}

// ||Sf|| <= 2 cos a (2 - cos a) for members with f''(0) = 0.
inline theorem_report verify_T44(const analytic_fn &f, alpha_angle alpha, const sampling_plan &plan = {},
                                 double tol = 1e-4, unsigned threads = 1)
{
    return detail::norm_verifier(
        "T44", f, alpha, [&](cplx z) { return schwarzian_at(f, z); }, 2, t44_bound(alpha), true, plan, tol, threads);
}

// (1 - |z|^2)^2 |Sf| <= t45_bound(alpha, gamma) for members with gamma < 1.
inline theorem_report verify_T45(const analytic_fn &f, alpha_angle alpha, const sampling_plan &plan = {},
                                 double tol = 1e-4, unsigned threads = 1)
{
    const std::string id = "T45";
    if (!f.normalized()) {
        return detail::unmet(id, tol, "function is not normalized (f(0) = 0, f'(0) = 1)");
    }
    const double gamma = std::abs(second_deriv_origin(f)) / (2.0 * alpha.cos());
    if (gamma >= 1.0) {
        auto r = detail::unmet(id, tol, "gamma = " + detail::num(gamma) + " >= 1, bound undefined");
        r.metrics.emplace_back("gamma", gamma);
        return r;
    }
    auto r = detail::norm_verifier(
        id, f, alpha, [&](cplx z) { return schwarzian_at(f, z); }, 2, t45_bound(alpha, gamma), false, plan, tol,
        threads);
    r.metrics.emplace_back("gamma", gamma);
    return r;
}

// |phi|^2 / (1 - |phi|^2) <= (|phi(0)| + |z|)^2 / ((1 - |phi(0)|)^2 (1 - |z|^2))
// for self-maps phi of the disk. The violation is measured relative to
// max(1, rhs).
template <typename Phi>
theorem_report lemma_schur_check(const Phi &phi, double phi0_abs, std::span<const cplx> points, double tol = 1e-9)
{
    const std::string id = "LemA";
    if (!(phi0_abs >= 0.0 && phi0_abs < 1.0)) {
        return detail::unmet(id, tol, "|phi(0)| must be < 1");
    }
    theorem_report r;
    r.theorem_id = id;
    r.tolerance = tol;
    r.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto &z : points) {
        const double p2 = std::norm(phi(z));
        if (p2 >= 1.0) {
            auto u = detail::unmet(id, tol, "sampled |phi| >= 1");
            u.witness = z;
            return u;
        }
        const double rz = std::abs(z);
        const double lhs = p2 / (1.0 - p2);
        const double rhs = (phi0_abs + rz) * (phi0_abs + rz) / ((1.0 - phi0_abs) * (1.0 - phi0_abs) * (1.0 - rz) * (1.0 + rz));
        const double v = (lhs - rhs) / std::max(1.0, rhs);
        if (v > r.max_violation) {
            r.max_violation = v;
            r.witness = z;
        }
    }
    detail::finish(r, "Schur-class inequality at " + std::to_string(points.size()) + " points");
    return r;
}

} // namespace robertson

#endif
