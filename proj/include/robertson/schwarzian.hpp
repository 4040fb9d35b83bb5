#ifndef ROBERTSON_SCHWARZIAN_HPP
#define ROBERTSON_SCHWARZIAN_HPP

#include <complex>
#include <stdexcept>

#include <robertson/functions.hpp>
#include <robertson/series.hpp>

namespace robertson
{

// Pf = f''/f'
inline cplx pre_schwarzian_from(const deriv_stack &d)
{
    return d.f2 / d.f1;
}

// Sf = f'''/f' - (3/2) (f''/f')^2
inline cplx schwarzian_from(const deriv_stack &d)
{
    const cplx p = d.f2 / d.f1;
    return d.f3 / d.f1 - 1.5 * p * p;
}

inline cplx pre_schwarzian_at(const analytic_fn &f, cplx z)
{
    return pre_schwarzian_from(eval_slopes(f, z));
}

inline cplx schwarzian_at(const analytic_fn &f, cplx z)
{
    return schwarzian_from(eval_slopes(f, z));
}

// Closed-form Schwarzian of the extremal family,
// 2 cos(alpha) (1 + (1 - cos alpha) z^2) / (1 - z^2)^2.
inline cplx schwarzian_extremal_closed(alpha_angle alpha, cplx z)
{
    if (!(std::abs(z) < 1.0)) {
        throw outside_guard_radius("schwarzian_extremal_closed: |z| must be < 1");
    }
    const double c = alpha.cos();
    const cplx q = (1.0 - z) * (1.0 + z);
    return 2.0 * c * (1.0 + (1.0 - c) * z * z) / (q * q);
}

// Series route: P = f''/f' by series division.
inline taylor_series pre_schwarzian_series(const catalog::series_backed &f)
{
    const auto &st = *f.stack;
    return series_div(st[2], st[1]);
}

// Series route: S = P' - P^2 / 2.
inline taylor_series schwarzian_series(const catalog::series_backed &f)
{
    const auto p = pre_schwarzian_series(f);
    return series_diff(p) - 0.5 * series_mul(p, p);
}

inline taylor_series pre_schwarzian_series(const analytic_fn &f)
{
    const auto *s = std::get_if<catalog::series_backed>(&f.kind());
    if (s == nullptr) {
        throw invalid_input("pre_schwarzian_series: function is not series-backed");
    }
    return pre_schwarzian_series(*s);
}

inline taylor_series schwarzian_series(const analytic_fn &f)
{
    const auto *s = std::get_if<catalog::series_backed>(&f.kind());
    if (s == nullptr) {
        throw invalid_input("schwarzian_series: function is not series-backed");
    }
    return schwarzian_series(*s);
}

} // namespace robertson

#endif
