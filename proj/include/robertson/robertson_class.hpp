#ifndef ROBERTSON_ROBERTSON_CLASS_HPP
#define ROBERTSON_ROBERTSON_CLASS_HPP

#include <cmath>
#include <cstdio>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <robertson/disk_sup.hpp>
#include <robertson/errors.hpp>
#include <robertson/functions.hpp>
#include <robertson/schwarzian.hpp>

namespace robertson
{

// A sampled margin at or above -membership_tolerance certifies membership.
inline constexpr double membership_tolerance = 1e-6;
inline constexpr double phi_pole_threshold = 1e-14;
inline constexpr double zero_value_threshold = 1e-14;

inline scan_options scan_for(const analytic_fn &f, unsigned threads = 1)
{
    return {f.domain_radius(), threads};
}

// inf Re{e^{i alpha} (1 + z f''/f')}; f is in S_alpha iff this is >= 0.
inline margin_report robertson_margin(const analytic_fn &f, alpha_angle alpha, const sampling_plan &plan = {},
                                      unsigned threads = 1)
{
    const cplx rot = alpha.rotation();
    const auto h = [&](cplx z) { return rot * (1.0 + z * pre_schwarzian_at(f, z)); };
    return weighted_inf_re(h, plan, scan_for(f, threads));
}

inline bool certified_member(const margin_report &m, double tol = membership_tolerance)
{
    return m.inf_value >= -tol;
}

// inf Re{e^{i alpha} z g'/g} for an evaluator returning the pair (g, g').
// At z = 0 the functional is e^{i alpha} by normalization.
template <typename ValueAndSlope>
margin_report spirallike_margin_of(const ValueAndSlope &vg, alpha_angle alpha, const sampling_plan &plan,
                                   const scan_options &opts)
{
    const cplx rot = alpha.rotation();
    const auto h = [&](cplx z) -> cplx {
        if (z == cplx{}) {
            return rot;
        }
        const auto [g, g1] = vg(z);
        if (std::abs(g) <= zero_value_threshold) {
            throw zero_value_encountered("spirallike functional: g vanishes at a sampled point");
        }
        return rot * z * g1 / g;
    };
    return weighted_inf_re(h, plan, opts);
}

inline margin_report spirallike_margin(const analytic_fn &g, alpha_angle alpha, const sampling_plan &plan = {},
                                       unsigned threads = 1)
{
    const auto vg = [&](cplx z) {
        const auto d = eval_derivatives(g, z);
        return std::pair{d.f, d.f1};
    };
    return spirallike_margin_of(vg, alpha, plan, scan_for(g, threads));
}

// Spirallike margin of the companion g = z f'.
inline margin_report companion_spirallike_margin(const analytic_fn &f, alpha_angle alpha,
                                                 const sampling_plan &plan = {}, unsigned threads = 1)
{
    const auto vg = [&](cplx z) {
        const auto d = eval_slopes(f, z);
        return std::pair{z * d.f1, d.f1 + z * d.f2};
    };
    return spirallike_margin_of(vg, alpha, plan, scan_for(f, threads));
}

// max over points of |e^{i alpha}(1 + z f''/f') - e^{i alpha} z g'/g| with
// g = z f'. For series-backed f, g and g' come from the series z f'
// directly, so truncation shows up in the discrepancy.
inline double duality_check(const analytic_fn &f, alpha_angle alpha, std::span<const cplx> points)
{
    const cplx rot = alpha.rotation();
    std::optional<std::pair<taylor_series, taylor_series>> companion;
    if (const auto *s = std::get_if<catalog::series_backed>(&f.kind())) {
        auto g = (*s->stack)[1].times_z();
        auto g1 = series_diff(g);
        companion.emplace(std::move(g), std::move(g1));
    }
    double worst = 0.0;
    for (const auto &z : points) {
        const cplx lhs = rot * (1.0 + z * pre_schwarzian_at(f, z));
        cplx rhs = rot;
        if (z != cplx{}) {
            cplx g, g1;
            if (companion) {
                g = series_eval(companion->first, z).value;
                g1 = series_eval(companion->second, z).value;
            } else {
                const auto d = eval_slopes(f, z);
                g = z * d.f1;
                g1 = d.f1 + z * d.f2;
            }
            if (std::abs(g) <= zero_value_threshold) {
                throw zero_value_encountered("duality_check: z f' vanishes at a sampled point");
            }
            rhs = rot * z * g1 / g;
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

// phi(z) = (f''/f') / (2 e^{-i alpha} cos alpha + z f''/f'). Membership in
// S_alpha is equivalent to |phi| <= 1 on the disk.
struct phi_transform {
    std::function<cplx(cplx)> evaluator;
    // |phi(0)| = |f''(0)| / (2 cos alpha)
    double gamma = 0.0;

    cplx operator()(cplx z) const
    {
        return evaluator(z);
    }
};

inline phi_transform make_phi_transform(const analytic_fn &f, alpha_angle alpha)
{
    const cplx lead = alpha.spiral_exponent();
    phi_transform t;
    t.evaluator = [f, lead](cplx z) {
        const cplx p = pre_schwarzian_at(f, z);
        const cplx den = lead + z * p;
        if (std::abs(den) <= phi_pole_threshold) {
            throw phi_pole_encountered("phi-transform denominator vanished");
        }
        return p / den;
    };
    t.gamma = std::abs(second_deriv_origin(f)) / (2.0 * alpha.cos());
    return t;
}

// Sampled sup |phi| over the plan.
template <typename Phi>
norm_estimate sampled_sup_modulus(const Phi &phi, const sampling_plan &plan = {}, const scan_options &opts = {})
{
    const auto res = detail::maximize([&](cplx z) { return std::abs(phi(z)); }, plan, opts);
    norm_estimate e;
    e.value = res.best;
    e.witness = res.witness;
    e.weight_exponent = 0;
    e.converged = res.converged;
    e.depth_used = res.depth_used;
    e.boundary_limit = std::max(res.boundary_limit, res.best);
    e.samples = res.samples;
    return e;
}

struct characterization_residual {
    // Re{1 + e^{i alpha} z P} - [1 - cos alpha + (1 - |z|^2) |P|^2 / (4 cos alpha)]
    double res_ii = 0.0;
    // 2 cos alpha - |(1 - |z|^2) e^{i alpha} P - 2 cos alpha conj(z)|
    double res_iii = 0.0;
};

// Both residuals are >= 0 on the disk for members of S_alpha. The disk form
// carries the rotation e^{i alpha} on P, which makes it algebraically
// equivalent to the half-plane form.
inline characterization_residual characterization_residuals(const analytic_fn &f, alpha_angle alpha, cplx z)
{
    const double c = alpha.cos();
    const cplx rot = alpha.rotation();
    const cplx p = pre_schwarzian_at(f, z);
    const double w = (1.0 - std::abs(z)) * (1.0 + std::abs(z));
    characterization_residual r;
    r.res_ii = std::real(1.0 + rot * z * p) - (1.0 - c + w * std::norm(p) / (4.0 * c));
    r.res_iii = 2.0 * c - std::abs(w * rot * p - 2.0 * c * std::conj(z));
    return r;
}

// Positive root of 16 x^3 + 16 x^2 + x - 1, by bisection on [0, 1].
inline double cubic_root()
{
    const auto p = [](double x) { return ((16.0 * x + 16.0) * x + 1.0) * x - 1.0; };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        (p(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline constexpr double becker_threshold = 1.0;
inline constexpr double nehari_threshold = 2.0;
inline constexpr double libera_zeigler_threshold = 0.2564;
inline constexpr double chichra_threshold = 0.2588;
inline constexpr double pfaltzgraff_threshold = 0.5;

// What is known about a norm: an analytic value, or a sampled lower bound.
struct norm_evidence {
    double value = 0.0;
    bool analytic = false;
    bool converged = false;

    static norm_evidence exact(double v)
    {
        return {v, true, true};
    }
    static norm_evidence sampled(const norm_estimate &e)
    {
        return {e.value, false, e.converged};
    }
};

struct univalence_row {
    std::string name;
    bool applicable = false;
    bool guarantees_univalence = false;
    std::string threshold_detail;
};

struct univalence_verdict {
    std::vector<univalence_row> criteria;

    bool univalent() const
    {
        for (const auto &r : criteria) {
            if (r.applicable && r.guarantees_univalence) {
                return true;
            }
        }
        return false;
    }
    const univalence_row *find(const std::string &name) const
    {
        for (const auto &r : criteria) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }
};

namespace detail
{

inline std::string fmt_num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline univalence_row norm_row(std::string name, const char *norm, double threshold,
                               const std::optional<norm_evidence> &ev)
{
    univalence_row row{std::move(name), false, false, {}};
    const std::string thr = std::string(norm) + " <= " + fmt_num(threshold);
    if (!ev) {
        row.threshold_detail = thr + "; no norm supplied";
        return row;
    }
    if (ev->analytic) {
        row.applicable = true;
        row.guarantees_univalence = ev->value <= threshold;
        row.threshold_detail = thr + "; analytic norm " + fmt_num(ev->value);
        return row;
    }
    if (!ev->converged) {
        row.threshold_detail = thr + "; sampled estimate did not converge";
        return row;
    }
    row.applicable = true;
    if (ev->value > threshold) {
        row.threshold_detail = thr + "; sampled lower bound " + fmt_num(ev->value) + " exceeds the threshold";
    } else {
        row.threshold_detail = thr + "; sampled lower bound " + fmt_num(ev->value) + " is consistent, not certified";
    }
    return row;
}

inline univalence_row alpha_row(std::string name, double cos_alpha, double threshold)
{
    return {std::move(name), true, cos_alpha <= threshold,
            "cos(alpha) = " + fmt_num(cos_alpha) + " <= " + fmt_num(threshold)};
}

} // namespace detail

// Known sufficient conditions for univalence of a member of S_alpha.
inline univalence_verdict univalence_criteria(alpha_angle alpha, cplx f_second_origin,
                                              const std::optional<norm_evidence> &pre_norm = std::nullopt,
                                              const std::optional<norm_evidence> &schwarz_norm = std::nullopt)
{
    const double c = alpha.cos();
    univalence_verdict v;
    v.criteria.push_back(detail::norm_row("Becker", "||Pf||", becker_threshold, pre_norm));
    v.criteria.push_back(detail::norm_row("Nehari", "||Sf||", nehari_threshold, schwarz_norm));
    v.criteria.push_back(detail::alpha_row("Robertson", c, cubic_root()));
    v.criteria.push_back(detail::alpha_row("Libera-Zeigler", c, libera_zeigler_threshold));
    v.criteria.push_back(detail::alpha_row("Chichra", c, chichra_threshold));
    v.criteria.push_back(detail::alpha_row("Pfaltzgraff", c, pfaltzgraff_threshold));
    const double f2 = std::abs(f_second_origin);
    v.criteria.push_back({"Singh-Chichra", true, f2 <= 1e-12, "|f''(0)| = " + detail::fmt_num(f2) + " = 0"});
    return v;
}

} // namespace robertson

#endif
