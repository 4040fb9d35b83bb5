#ifndef ROBERTSON_FUNCTIONS_HPP
#define ROBERTSON_FUNCTIONS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <robertson/errors.hpp>
#include <robertson/quadrature.hpp>
#include <robertson/series.hpp>

namespace robertson
{

// The angle alpha of the class S_alpha, restricted to (-pi/2, pi/2).
class alpha_angle
{
public:
    explicit alpha_angle(double radians) : m_value(radians)
    {
        if (!(std::abs(radians) < std::numbers::pi / 2)) {
            throw invalid_input("alpha must satisfy -pi/2 < alpha < pi/2");
        }
    }

    double value() const
    {
        return m_value;
    }
    double cos() const
    {
        return std::cos(m_value);
    }
    double sin() const
    {
        return std::sin(m_value);
    }
    // e^{i alpha}
    cplx rotation() const
    {
        return std::polar(1.0, m_value);
    }
    // 2 e^{-i alpha} cos(alpha), the exponent of the equality-case derivative.
    cplx spiral_exponent() const
    {
        return 2.0 * std::cos(m_value) * std::polar(1.0, -m_value);
    }

private:
    double m_value;
};

// Values of f, f', f'', f''' at one point.
struct deriv_stack {
    cplx f, f1, f2, f3;
};

// Below this |f'| the function is treated as not locally univalent.
inline constexpr double vanishing_derivative_threshold = 1e-14;

// Truncation order and guard radius used for generated members. The
// generated f' has algebraic singularities on the unit circle, so the
// coefficients do not decay geometrically; 512 terms at r <= 0.9 keep the
// f''' tail below 1e-12.
inline constexpr std::size_t member_series_order = 512;
inline constexpr double member_guard_radius = 0.9;

namespace catalog
{

struct identity {
};
// z / (1 - z)
struct half_plane {
};
// z / (1 - z)^2
struct koebe {
};
// conj(zeta) F(zeta z) with F' (w) = (1 - w^2)^{-cos alpha}.
struct robertson_extremal {
    alpha_angle alpha;
    cplx zeta{1.0};
};
// f'(z) = (1 - zeta z)^{-2 e^{-i alpha} cos alpha}, f(0) = 0.
struct spiral_power {
    alpha_angle alpha;
    cplx zeta{1.0};
};
// (a z + b) / (c z + d)
struct moebius {
    cplx a, b, c, d;
};
struct polynomial {
    std::vector<cplx> coeffs;
};

// A series-backed function together with its first three derivative series.
struct series_backed {
    std::shared_ptr<const std::array<taylor_series, 4>> stack;

    explicit series_backed(const taylor_series &f)
        : stack(std::make_shared<const std::array<taylor_series, 4>>(std::array<taylor_series, 4>{
            f, series_diff(f), series_diff(series_diff(f)), series_diff(series_diff(series_diff(f)))}))
    {
    }
    const taylor_series &series() const
    {
        return (*stack)[0];
    }
};

} // namespace catalog

// A function analytic on the unit disk: either a closed-form catalog entry or
// a truncated power series. Cheap to copy, immutable.
class analytic_fn
{
public:
    using kind_type = std::variant<catalog::identity, catalog::half_plane, catalog::koebe, catalog::robertson_extremal,
                                   catalog::spiral_power, catalog::moebius, catalog::polynomial, catalog::series_backed>;

    template <typename Kind>
        requires std::is_constructible_v<kind_type, Kind>
    analytic_fn(Kind k) : m_kind(std::move(k))
    {
        validate();
    }

    const kind_type &kind() const
    {
        return m_kind;
    }

    template <typename Kind>
    bool is() const
    {
        return std::holds_alternative<Kind>(m_kind);
    }

    bool normalized() const
    {
        return m_normalized;
    }

    // Largest radius at which the function may be evaluated.
    double domain_radius() const
    {
        return m_domain_radius;
    }

    std::string name() const
    {
        return std::visit(
            [](const auto &k) -> std::string {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, catalog::identity>) {
                    return "identity";
                } else if constexpr (std::is_same_v<K, catalog::half_plane>) {
                    return "halfplane";
                } else if constexpr (std::is_same_v<K, catalog::koebe>) {
                    return "koebe";
                } else if constexpr (std::is_same_v<K, catalog::robertson_extremal>) {
                    return "robertson-extremal";
                } else if constexpr (std::is_same_v<K, catalog::spiral_power>) {
                    return "spiral-power";
                } else if constexpr (std::is_same_v<K, catalog::moebius>) {
                    return "moebius";
                } else if constexpr (std::is_same_v<K, catalog::polynomial>) {
                    return "polynomial";
                } else {
                    return "series";
                }
            },
            m_kind);
    }

private:
    void validate()
    {
        constexpr double tol = 1e-12;
        m_normalized = true;
        m_domain_radius = 1.0;
        if (const auto *m = std::get_if<catalog::moebius>(&m_kind)) {
            const cplx det = m->a * m->d - m->b * m->c;
            if (std::abs(det) <= singular_threshold) {
                throw invalid_input("moebius: ad - bc must be nonzero");
            }
            if (std::abs(m->c) > 0.0) {
                const double pole = std::abs(m->d / m->c);
                if (pole <= 1.0) {
                    throw invalid_input("moebius: pole inside the closed unit disk");
                }
            }
            m_normalized = std::abs(m->b) <= tol && std::abs(det / (m->d * m->d) - 1.0) <= tol;
        } else if (const auto *p = std::get_if<catalog::polynomial>(&m_kind)) {
            if (p->coeffs.empty()) {
                throw invalid_input("polynomial: no coefficients");
            }
            const cplx c0 = p->coeffs[0];
            const cplx c1 = p->coeffs.size() > 1 ? p->coeffs[1] : cplx{};
            m_normalized = std::abs(c0) <= tol && std::abs(c1 - 1.0) <= tol;
        } else if (const auto *s = std::get_if<catalog::series_backed>(&m_kind)) {
            const auto &f = s->series();
            if (f.order() < 3) {
                throw invalid_input("series-backed function needs order >= 3");
            }
            m_normalized = std::abs(f[0]) <= tol && std::abs(f[1] - 1.0) <= tol;
            m_domain_radius = f.guard_radius();
        } else if (const auto *e = std::get_if<catalog::robertson_extremal>(&m_kind)) {
            if (std::abs(std::abs(e->zeta) - 1.0) > tol) {
                throw invalid_input("robertson-extremal: zeta must be unimodular");
            }
        } else if (const auto *sp = std::get_if<catalog::spiral_power>(&m_kind)) {
            if (std::abs(std::abs(sp->zeta) - 1.0) > tol) {
                throw invalid_input("spiral-power: zeta must be unimodular");
            }
        }
    }

    kind_type m_kind;
    bool m_normalized = true;
    double m_domain_radius = 1.0;
};

namespace detail
{

inline void check_point(const analytic_fn &f, cplx z)
{
    const double r = std::abs(z);
    if (!(r < 1.0)) {
        throw outside_guard_radius("evaluation point outside the open unit disk");
    }
    if (r > f.domain_radius() * (1.0 + 1e-12)) {
        throw outside_guard_radius("evaluation point beyond the guard radius of " + f.name());
    }
}

// 1 - w^2 without cancellation near w = +-1.
inline cplx one_minus_square(cplx w)
{
    return (1.0 - w) * (1.0 + w);
}

// F(w) = int_0^w (1 - xi^2)^{-c} d xi along the segment [0, w].
inline cplx extremal_primitive(double c, cplx w)
{
    if (w == cplx{}) {
        return {};
    }
    const auto integrand = [c, w](double t) -> cplx { return std::pow(one_minus_square(t * w), -c); };
    return w * quadrature(integrand, 0.0, 1.0, 1e-13);
}

// f', f'', f''' (and optionally f) of every kind.
struct derivative_eval {
    bool with_value;
    cplx z;

    deriv_stack operator()(const catalog::identity &) const
    {
        return {z, 1.0, 0.0, 0.0};
    }
    deriv_stack operator()(const catalog::half_plane &) const
    {
        const cplx u = 1.0 / (1.0 - z);
        return {z * u, u * u, 2.0 * u * u * u, 6.0 * u * u * u * u};
    }
    deriv_stack operator()(const catalog::koebe &) const
    {
        const cplx u = 1.0 / (1.0 - z);
        const cplx u2 = u * u, u3 = u2 * u;
        return {z * u2, (1.0 + z) * u3, (4.0 + 2.0 * z) * u3 * u, (18.0 + 6.0 * z) * u3 * u2};
    }
    deriv_stack operator()(const catalog::robertson_extremal &e) const
    {
        // f(z) = conj(zeta) F(zeta z), f^(k)(z) = zeta^(k-1) F^(k)(zeta z).
        const double c = e.alpha.cos();
        const cplx w = e.zeta * z;
        const cplx q = one_minus_square(w);
        const cplx d1 = std::pow(q, -c);
        const cplx d2 = 2.0 * c * w * d1 / q;
        const cplx d3 = 2.0 * c * d1 / q + 4.0 * c * (c + 1.0) * w * w * d1 / (q * q);
        const cplx val = with_value ? std::conj(e.zeta) * extremal_primitive(c, w) : cplx{};
        return {val, d1, e.zeta * d2, e.zeta * e.zeta * d3};
    }
    deriv_stack operator()(const catalog::spiral_power &s) const
    {
        const cplx beta = s.alpha.spiral_exponent();
        const cplx q = 1.0 - s.zeta * z;
        const cplx d1 = std::pow(q, -beta);
        const cplx d2 = beta * s.zeta * d1 / q;
        const cplx d3 = beta * (beta + 1.0) * s.zeta * s.zeta * d1 / (q * q);
        // f = ((1 - zeta z)^{1 - beta} - 1) / (zeta (beta - 1)); beta != 1 on (-pi/2, pi/2).
        const cplx val = with_value ? (d1 * q - 1.0) / (s.zeta * (beta - 1.0)) : cplx{};
        return {val, d1, d2, d3};
    }
    deriv_stack operator()(const catalog::moebius &m) const
    {
        const cplx det = m.a * m.d - m.b * m.c;
        const cplx u = 1.0 / (m.c * z + m.d);
        return {(m.a * z + m.b) * u, det * u * u, -2.0 * m.c * det * u * u * u, 6.0 * m.c * m.c * det * u * u * u * u};
    }
    deriv_stack operator()(const catalog::polynomial &p) const
    {
        cplx d0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
        for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
            d3 = d3 * z + d2;
            d2 = d2 * z + d1;
            d1 = d1 * z + d0;
            d0 = d0 * z + *it;
        }
        // Horner on derivatives yields f^(k)/k!.
        return {d0, d1, 2.0 * d2, 6.0 * d3};
    }
    deriv_stack operator()(const catalog::series_backed &s) const
    {
        const auto &st = *s.stack;
        const cplx val = with_value ? series_eval(st[0], z).value : cplx{};
        return {val, series_eval(st[1], z).value, series_eval(st[2], z).value, series_eval(st[3], z).value};
    }
};

inline deriv_stack evaluate(const analytic_fn &f, cplx z, bool with_value)
{
    check_point(f, z);
    auto d = std::visit(derivative_eval{with_value, z}, f.kind());
    if (std::abs(d.f1) <= vanishing_derivative_threshold) {
        throw vanishing_derivative("|f'(z)| below the local univalence threshold for " + f.name());
    }
    if (!is_finite(d.f) || !is_finite(d.f1) || !is_finite(d.f2) || !is_finite(d.f3)) {
        throw evaluation_error("non-finite derivative value for " + f.name());
    }
    return d;
}

} // namespace detail

// f, f', f'', f''' at z. The value f of the extremal family has no elementary
// primitive and is obtained by quadrature along [0, z].
inline deriv_stack eval_derivatives(const analytic_fn &f, cplx z)
{
    return detail::evaluate(f, z, true);
}

// As eval_derivatives, but the `f` member is left at zero. This is what the
// Schwarzian routines need and skips the quadrature for the extremal family.
inline deriv_stack eval_slopes(const analytic_fn &f, cplx z)
{
    return detail::evaluate(f, z, false);
}

inline cplx second_deriv_origin(const analytic_fn &f)
{
    return eval_slopes(f, 0.0).f2;
}

// Taylor expansion of f about the origin, truncated at `order`.
inline taylor_series taylor_expand(const analytic_fn &f, std::size_t order = default_series_order,
                                   double guard_radius = default_guard_radius)
{
    struct visitor {
        std::size_t n;
        double guard;

        taylor_series operator()(const catalog::identity &) const
        {
            return taylor_series::variable(n, guard);
        }
        taylor_series operator()(const catalog::half_plane &) const
        {
            std::vector<cplx> v(n + 1, 1.0);
            v[0] = 0.0;
            return taylor_series(std::move(v), guard);
        }
        taylor_series operator()(const catalog::koebe &) const
        {
            std::vector<cplx> v(n + 1);
            for (std::size_t k = 0; k <= n; ++k) {
                v[k] = static_cast<double>(k);
            }
            return taylor_series(std::move(v), guard);
        }
        taylor_series operator()(const catalog::robertson_extremal &e) const
        {
            const auto base = taylor_series::polynomial({1.0, 0.0, -e.zeta * e.zeta}, n, guard);
            return series_integrate(series_pow(base, -e.alpha.cos()));
        }
        taylor_series operator()(const catalog::spiral_power &s) const
        {
            const auto base = taylor_series::polynomial({1.0, -s.zeta}, n, guard);
            return series_integrate(series_pow(base, -s.alpha.spiral_exponent()));
        }
        taylor_series operator()(const catalog::moebius &m) const
        {
            return series_div(taylor_series::polynomial({m.b, m.a}, n, guard),
                              taylor_series::polynomial({m.d, m.c}, n, guard));
        }
        taylor_series operator()(const catalog::polynomial &p) const
        {
            return taylor_series::polynomial(p.coeffs, n, guard);
        }
        taylor_series operator()(const catalog::series_backed &s) const
        {
            return s.series();
        }
    };
    return std::visit(visitor{order, guard_radius}, f.kind());
}

// Finite Blaschke product lambda * z^[times_z] * prod_j (z + a_j) / (1 + conj(a_j) z):
// an analytic self-map of the disk with |phi| = 1 on the circle.
struct blaschke_product {
    cplx unimodular{1.0};
    std::vector<cplx> params;
    bool times_z = false;

    cplx operator()(cplx z) const
    {
        cplx v = unimodular;
        for (const auto &a : params) {
            v *= (z + a) / (1.0 + std::conj(a) * z);
        }
        return times_z ? v * z : v;
    }

    // phi'(z) by the product rule; each factor has derivative
    // (1 - |a|^2) / (1 + conj(a) z)^2.
    cplx derivative(cplx z) const
    {
        cplx prod = unimodular;
        for (const auto &a : params) {
            prod *= (z + a) / (1.0 + std::conj(a) * z);
        }
        cplx deriv = 0.0;
        for (std::size_t j = 0; j < params.size(); ++j) {
            cplx term = unimodular;
            for (std::size_t k = 0; k < params.size(); ++k) {
                const auto &a = params[k];
                const cplx den = 1.0 + std::conj(a) * z;
                if (k == j) {
                    term *= (1.0 - std::norm(a)) / (den * den);
                } else {
                    term *= (z + a) / den;
                }
            }
            deriv += term;
        }
        if (times_z) {
            return prod + z * deriv;
        }
        return deriv;
    }

    cplx at_origin() const
    {
        if (times_z) {
            return 0.0;
        }
        cplx v = unimodular;
        for (const auto &a : params) {
            v *= a;
        }
        return v;
    }

    taylor_series series(std::size_t order, double guard = default_guard_radius) const
    {
        auto s = taylor_series::constant(unimodular, order, guard);
        for (const auto &a : params) {
            s = series_mul(s, series_div(taylor_series::polynomial({a, 1.0}, order, guard),
                                         taylor_series::polynomial({1.0, std::conj(a)}, order, guard)));
        }
        return times_z ? s.times_z() : s;
    }
};

inline constexpr double blaschke_param_cap = 0.8;

namespace detail
{

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64 &eng)
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace detail

// Self-map of the disk drawn deterministically from `seed`: between 1 and
// `degree` Blaschke factors with |a_j| <= 0.8, a unimodular constant, and an
// extra factor z when `zero_at_origin` is set.
inline blaschke_product random_blaschke(std::uint64_t seed, int degree, bool zero_at_origin)
{
    if (degree < 1) {
        throw invalid_input("random_blaschke: degree must be >= 1");
    }
    std::mt19937_64 eng(seed);
    blaschke_product b;
    b.times_z = zero_at_origin;
    const auto count = 1 + static_cast<int>(eng() % static_cast<std::uint64_t>(degree));
    b.unimodular = std::polar(1.0, 2.0 * std::numbers::pi * detail::unit_uniform(eng));
    for (int j = 0; j < count; ++j) {
        const double rad = blaschke_param_cap * std::sqrt(detail::unit_uniform(eng));
        const double ang = 2.0 * std::numbers::pi * detail::unit_uniform(eng);
        b.params.push_back(std::polar(rad, ang));
    }
    return b;
}

// The member of S_alpha whose phi-transform is `phi`:
// f''/f' = 2 e^{-i alpha} cos(alpha) phi / (1 - z phi), f' = exp(int f''/f'), f = int f'.
inline analytic_fn member_from_phi(alpha_angle alpha, const blaschke_product &phi,
                                   std::size_t order = member_series_order, double guard = member_guard_radius)
{
    const auto ps = phi.series(order, guard);
    const auto one = taylor_series::constant(1.0, order, guard);
    const auto pre = alpha.spiral_exponent() * series_div(ps, one - ps.times_z());
    const auto fprime = series_exp(series_integrate(pre));
    return analytic_fn(catalog::series_backed(series_integrate(fprime)));
}

inline analytic_fn random_member(alpha_angle alpha, std::uint64_t seed, int degree, bool zero_second_deriv)
{
    if (degree < 1 || degree > 3) {
        throw invalid_input("random_member: degree must be in [1, 3]");
    }
    return member_from_phi(alpha, random_blaschke(seed, degree, zero_second_deriv));
}

} // namespace robertson

#endif
