#ifndef ROBERTSON_QUADRATURE_HPP
#define ROBERTSON_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <robertson/errors.hpp>

namespace robertson
{

namespace detail
{

inline constexpr std::size_t gl_points = 15;

struct gauss_legendre_rule {
    std::array<double, gl_points> nodes{};
    std::array<double, gl_points> weights{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_15.
inline const gauss_legendre_rule &gl15()
{
    static const gauss_legendre_rule rule = [] {
        gauss_legendre_rule r;
        constexpr auto n = static_cast<int>(gl_points);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    break;
                }
            }
            r.nodes[static_cast<std::size_t>(i)] = x;
            r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <typename T>
double magnitude(const T &v)
{
    return std::abs(v);
}

template <typename F>
auto gl_panel(const F &f, double a, double b)
{
    const auto &rule = gl15();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    decltype(f(a)) acc{};
    for (std::size_t i = 0; i < gl_points; ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

} // namespace detail

inline constexpr std::size_t max_quadrature_panels = 10000;

// Adaptive composite Gauss-Legendre quadrature of f over [a, b]. Each panel
// is compared with the sum over its two halves; a panel is accepted once the
// difference is below its share of `tol` (proportional to width). The
// integrand may be real or complex valued.
template <typename F>
auto quadrature(const F &f, double a, double b, double tol = 1e-10)
{
    using value_type = decltype(f(a));
    if (!(b >= a)) {
        throw invalid_input("quadrature: need a <= b");
    }
    if (b == a) {
        return value_type{};
    }
    struct panel {
        double lo, hi;
        value_type whole;
    };
    const double width = b - a;
    std::vector<panel> stack{{a, b, detail::gl_panel(f, a, b)}};
    std::size_t panels = 1;
    value_type total{};
    while (!stack.empty()) {
        const panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const auto left = detail::gl_panel(f, p.lo, mid);
        const auto right = detail::gl_panel(f, mid, p.hi);
        panels += 2;
        const auto refined = left + right;
        const double err = detail::magnitude(refined - p.whole);
        if (err <= tol * (p.hi - p.lo) / width || (p.hi - p.lo) < 1e-15 * width) {
            total += refined;
            continue;
        }
        if (panels >= max_quadrature_panels) {
            throw max_subdivisions("quadrature: tolerance unreachable within the panel budget");
        }
        stack.push_back({mid, p.hi, right});
        stack.push_back({p.lo, mid, left});
    }
    return total;
}

} // namespace robertson

#endif
