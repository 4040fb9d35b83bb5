#ifndef ROBERTSON_SERIES_HPP
#define ROBERTSON_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <robertson/errors.hpp>

namespace robertson
{

using cplx = std::complex<double>;

inline constexpr std::size_t default_series_order = 256;
inline constexpr double default_guard_radius = 0.95;
// |c_0| at or below this is treated as a vanishing constant term.
inline constexpr double singular_threshold = 1e-12;

inline bool is_finite(cplx z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Truncated power series c_0 + c_1 z + ... + c_N z^N with complex
// coefficients. Values are immutable; evaluation is refused outside the
// guard radius r_max < 1.
class taylor_series
{
public:
    explicit taylor_series(std::vector<cplx> coeffs, double guard_radius = default_guard_radius)
        : m_coeffs(std::move(coeffs)), m_guard(guard_radius)
    {
        if (m_coeffs.empty()) {
            throw invalid_input("taylor_series: at least one coefficient is required");
        }
        if (!(m_guard > 0.0 && m_guard < 1.0)) {
            throw invalid_input("taylor_series: guard radius must lie in (0, 1)");
        }
        for (const auto &c : m_coeffs) {
            if (!is_finite(c)) {
                throw evaluation_error("taylor_series: non-finite coefficient");
            }
        }
    }

    // c + 0 z + ... + 0 z^order
    static taylor_series constant(cplx c, std::size_t order, double guard_radius = default_guard_radius)
    {
        std::vector<cplx> v(order + 1);
        v[0] = c;
        return taylor_series(std::move(v), guard_radius);
    }

    // z, truncated at `order` (order >= 1).
    static taylor_series variable(std::size_t order, double guard_radius = default_guard_radius)
    {
        std::vector<cplx> v(std::max<std::size_t>(order, 1) + 1);
        v[1] = 1.0;
        return taylor_series(std::move(v), guard_radius);
    }

    // Polynomial coefficients, zero padded (or cut) to `order`.
    static taylor_series polynomial(const std::vector<cplx> &coeffs, std::size_t order,
                                    double guard_radius = default_guard_radius)
    {
        std::vector<cplx> v(order + 1);
        for (std::size_t i = 0; i < coeffs.size() && i <= order; ++i) {
            v[i] = coeffs[i];
        }
        return taylor_series(std::move(v), guard_radius);
    }

    std::size_t order() const
    {
        return m_coeffs.size() - 1;
    }
    double guard_radius() const
    {
        return m_guard;
    }
    const std::vector<cplx> &coeffs() const
    {
        return m_coeffs;
    }
    const cplx &operator[](std::size_t n) const
    {
        return m_coeffs[n];
    }

    taylor_series truncated(std::size_t order) const
    {
        std::vector<cplx> v(m_coeffs.begin(), m_coeffs.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
        v.resize(order + 1);
        return taylor_series(std::move(v), m_guard);
    }

    taylor_series with_guard_radius(double r) const
    {
        return taylor_series(m_coeffs, r);
    }

    // Multiplication by z; the top coefficient falls off so the order is kept.
    taylor_series times_z() const
    {
        std::vector<cplx> v(m_coeffs.size());
        for (std::size_t n = 1; n < v.size(); ++n) {
            v[n] = m_coeffs[n - 1];
        }
        return taylor_series(std::move(v), m_guard);
    }

    friend taylor_series operator+(const taylor_series &a, const taylor_series &b)
    {
        const auto n = std::min(a.order(), b.order());
        std::vector<cplx> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = a[i] + b[i];
        }
        return taylor_series(std::move(v), std::min(a.m_guard, b.m_guard));
    }
    friend taylor_series operator-(const taylor_series &a, const taylor_series &b)
    {
        const auto n = std::min(a.order(), b.order());
        std::vector<cplx> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = a[i] - b[i];
        }
        return taylor_series(std::move(v), std::min(a.m_guard, b.m_guard));
    }
    friend taylor_series operator*(cplx s, const taylor_series &a)
    {
        std::vector<cplx> v(a.m_coeffs);
        for (auto &c : v) {
            c *= s;
        }
        return taylor_series(std::move(v), a.m_guard);
    }

private:
    std::vector<cplx> m_coeffs;
    double m_guard;
};

// Cauchy product truncated to min(order a, order b).
inline taylor_series series_mul(const taylor_series &a, const taylor_series &b)
{
    const auto n = std::min(a.order(), b.order());
    std::vector<cplx> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) {
            acc += a[k] * b[i - k];
        }
        v[i] = acc;
    }
    return taylor_series(std::move(v), std::min(a.guard_radius(), b.guard_radius()));
}

// Quotient a / b by forward recursion. Throws division_by_singular_series when
// |b_0| <= eps.
inline taylor_series series_div(const taylor_series &a, const taylor_series &b, double eps = singular_threshold)
{
    if (std::abs(b[0]) <= eps) {
        throw division_by_singular_series("series_div: divisor has a vanishing constant term");
    }
    const auto n = std::min(a.order(), b.order());
    std::vector<cplx> q(n + 1);
    const cplx inv_b0 = 1.0 / b[0];
    for (std::size_t i = 0; i <= n; ++i) {
        cplx acc = a[i];
        for (std::size_t k = 1; k <= i; ++k) {
            acc -= b[k] * q[i - k];
        }
        q[i] = acc * inv_b0;
    }
    return taylor_series(std::move(q), std::min(a.guard_radius(), b.guard_radius()));
}

// Termwise derivative; order N -> N - 1 (an order-0 series maps to the zero
// constant).
inline taylor_series series_diff(const taylor_series &a)
{
    if (a.order() == 0) {
        return taylor_series::constant(0.0, 0, a.guard_radius());
    }
    std::vector<cplx> v(a.order());
    for (std::size_t n = 1; n <= a.order(); ++n) {
        v[n - 1] = static_cast<double>(n) * a[n];
    }
    return taylor_series(std::move(v), a.guard_radius());
}

// Termwise antiderivative with zero constant term; the order is kept, so
// the last input coefficient is dropped.
inline taylor_series series_integrate(const taylor_series &a)
{
    std::vector<cplx> v(a.order() + 1);
    for (std::size_t n = 1; n <= a.order(); ++n) {
        v[n] = a[n - 1] / static_cast<double>(n);
    }
    return taylor_series(std::move(v), a.guard_radius());
}

// exp(a) from n b_n = sum_{k=1}^n k a_k b_{n-k}.
inline taylor_series series_exp(const taylor_series &a)
{
    const auto n = a.order();
    std::vector<cplx> b(n + 1);
    b[0] = std::exp(a[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 1; k <= i; ++k) {
            acc += static_cast<double>(k) * a[k] * b[i - k];
        }
        b[i] = acc / static_cast<double>(i);
    }
    return taylor_series(std::move(b), a.guard_radius());
}

// Principal logarithm: b_0 = Log a_0, and a b' = a' gives
// b_n = (a_n - (1/n) sum_{k=1}^{n-1} k b_k a_{n-k}) / a_0.
inline taylor_series series_log(const taylor_series &a, double eps = singular_threshold)
{
    if (std::abs(a[0]) <= eps) {
        throw division_by_singular_series("series_log: vanishing constant term");
    }
    const auto n = a.order();
    std::vector<cplx> b(n + 1);
    b[0] = std::log(a[0]);
    const cplx inv_a0 = 1.0 / a[0];
    for (std::size_t i = 1; i <= n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 1; k < i; ++k) {
            acc += static_cast<double>(k) * b[k] * a[i - k];
        }
        b[i] = (a[i] - acc / static_cast<double>(i)) * inv_a0;
    }
    return taylor_series(std::move(b), a.guard_radius());
}

// a^beta = exp(beta Log a), principal branch at the constant term.
inline taylor_series series_pow(const taylor_series &a, cplx beta, double eps = singular_threshold)
{
    return series_exp(beta * series_log(a, eps));
}

struct series_value {
    cplx value;
    // |c_N| |z|^N, a heuristic size for the neglected tail.
    double tail_bound;
};

// Horner evaluation. Throws outside_guard_radius when |z| > r_max.
inline series_value series_eval(const taylor_series &a, cplx z)
{
    const double r = std::abs(z);
    // Relative slack absorbs rounding in |z| for points placed on the guard circle.
    if (r > a.guard_radius() * (1.0 + 1e-12)) {
        throw outside_guard_radius("series_eval: |z| = " + std::to_string(r) + " exceeds guard radius "
                                   + std::to_string(a.guard_radius()));
    }
    const auto &c = a.coeffs();
    cplx acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        acc = acc * z + c[i];
    }
    const double tail = std::abs(c.back()) * std::pow(r, static_cast<double>(a.order()));
    return {acc, tail};
}

} // namespace robertson

#endif
