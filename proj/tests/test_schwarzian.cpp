#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <robertson/functions.hpp>
#include <robertson/schwarzian.hpp>

using namespace robertson;
using Catch::Matchers::WithinAbs;

namespace
{

std::vector<cplx> disk_points(std::uint64_t seed, int n, double rmax)
{
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> pts;
    for (int i = 0; i < n; ++i) {
        pts.push_back(std::polar(rmax * std::sqrt(u(eng)), 2.0 * std::numbers::pi * u(eng)));
    }
    return pts;
}

std::vector<analytic_fn> catalog_entries()
{
    const alpha_angle a(0.9);
    return {
        catalog::identity{},
        catalog::half_plane{},
        catalog::koebe{},
        catalog::robertson_extremal{alpha_angle(0.0)},
        catalog::robertson_extremal{a, std::polar(1.0, -2.0)},
        catalog::spiral_power{a, std::polar(1.0, 0.4)},
        catalog::moebius{1.0, 0.0, cplx(-0.4, 0.1), 1.0},
        catalog::polynomial{{0.0, 1.0, -0.25, cplx(0.0, 0.05)}},
    };
}

// Derivatives of M(f) by Faa di Bruno, for M(w) = (a w + b) / (c w + d).
deriv_stack compose_moebius(cplx a, cplx b, cplx c, cplx d, const deriv_stack &f)
{
    const cplx det = a * d - b * c;
    const cplx u = 1.0 / (c * f.f + d);
    const cplx m1 = det * u * u;
    const cplx m2 = -2.0 * c * det * u * u * u;
    const cplx m3 = 6.0 * c * c * det * u * u * u * u;
    return {(a * f.f + b) * u, m1 * f.f1, m2 * f.f1 * f.f1 + m1 * f.f2,
            m3 * f.f1 * f.f1 * f.f1 + 3.0 * m2 * f.f1 * f.f2 + m1 * f.f3};
}

} // namespace

TEST_CASE("pre-Schwarzian examples")
{
    CHECK(pre_schwarzian_at(catalog::identity{}, cplx(0.2, 0.7)) == cplx(0.0));
    CHECK(pre_schwarzian_at(catalog::koebe{}, 0.0) == cplx(4.0));
    for (const double alpha : {0.0, 0.6, -1.3}) {
        const alpha_angle a(alpha);
        const analytic_fn f = catalog::robertson_extremal{a};
        for (const auto &z : disk_points(3, 20, 0.95)) {
            const cplx expected = 2.0 * a.cos() * z / (1.0 - z * z);
            CHECK(std::abs(pre_schwarzian_at(f, z) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("Koebe pre-Schwarzian closed form")
{
    for (const auto &z : disk_points(4, 20, 0.95)) {
        const cplx expected = (4.0 + 2.0 * z) / (1.0 - z * z);
        CHECK(std::abs(pre_schwarzian_at(catalog::koebe{}, z) - expected) <= 1e-12 * std::abs(expected));
    }
}

TEST_CASE("Schwarzian examples")
{
    CHECK_THAT(std::abs(schwarzian_at(catalog::koebe{}, 0.0) - (-6.0)), WithinAbs(0.0, 1e-14));
    for (const auto &z : disk_points(5, 20, 0.9)) {
        const cplx q = 1.0 - z * z;
        CHECK(std::abs(schwarzian_at(catalog::koebe{}, z) + 6.0 / (q * q)) <= 1e-10 * std::abs(6.0 / (q * q)));
    }
    for (const double alpha : {0.0, std::numbers::pi / 3, -0.5}) {
        const alpha_angle a(alpha);
        CHECK_THAT(std::abs(schwarzian_at(catalog::robertson_extremal{a}, 0.0) - 2.0 * a.cos()),
                   WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("Möbius maps have vanishing Schwarzian")
{
    std::mt19937_64 eng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto pts = disk_points(6, 100, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx c(0.4 * u(eng), 0.4 * u(eng));
        const cplx a(u(eng), u(eng)), b(u(eng), u(eng));
        const cplx d(1.0 + 0.1 * u(eng), 0.1 * u(eng));
        if (std::abs(a * d - b * c) < 0.1) {
            continue;
        }
        const analytic_fn m = catalog::moebius{a, b, c, d};
        for (const auto &z : pts) {
            CHECK(std::abs(schwarzian_at(m, z)) <= 1e-10);
        }
    }
}

TEST_CASE("closed-form Schwarzian of the extremal family")
{
    CHECK(schwarzian_extremal_closed(alpha_angle(0.0), 0.0) == cplx(2.0));
    CHECK_THAT(std::abs(schwarzian_extremal_closed(alpha_angle(std::numbers::pi / 3), 0.0) - 1.0),
               WithinAbs(0.0, 1e-15));
    for (const double alpha : {-1.4, -0.8, 0.0, 0.3, 1.1}) {
        const alpha_angle a(alpha);
        const cplx z(0.3);
        CHECK(std::abs(schwarzian_extremal_closed(a, z) - schwarzian_at(catalog::robertson_extremal{a}, z)) <= 1e-10);
        for (const auto &w : disk_points(9, 20, 0.9)) {
            const cplx closed = schwarzian_extremal_closed(a, w);
            CHECK(std::abs(closed - schwarzian_at(catalog::robertson_extremal{a}, w))
                  <= 1e-10 * std::max(1.0, std::abs(closed)));
        }
    }
    CHECK_THROWS_AS(schwarzian_extremal_closed(alpha_angle(0.0), 1.0), outside_guard_radius);
}

TEST_CASE("series Schwarzian of the extremal family matches the closed-form Taylor coefficients")
{
    const alpha_angle a(std::numbers::pi / 4);
    const double c = a.cos();
    const catalog::series_backed f(taylor_expand(catalog::robertson_extremal{a}, 256));
    const auto s = schwarzian_series(f);
    // 2c (1 + (1 - c) w) / (1 - w)^2 with w = z^2: the z^{2k} coefficient is
    // 2c ((k + 1) + (1 - c) k).
    for (std::size_t n = 0; n < 32; ++n) {
        const double k = static_cast<double>(n / 2);
        const double expected = n % 2 == 0 ? 2.0 * c * ((k + 1.0) + (1.0 - c) * k) : 0.0;
        CHECK_THAT(std::abs(s[n] - expected), WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("series route and pointwise route agree for catalog entries")
{
    const auto pts = disk_points(10, 50, 0.5);
    for (const auto &f : catalog_entries()) {
        const catalog::series_backed sb(taylor_expand(f, 256));
        const auto p = pre_schwarzian_series(sb);
        const auto s = schwarzian_series(sb);
        double worst_p = 0.0, worst_s = 0.0;
        for (const auto &z : pts) {
            worst_p = std::max(worst_p, std::abs(series_eval(p, z).value - pre_schwarzian_at(f, z)));
            worst_s = std::max(worst_s, std::abs(series_eval(s, z).value - schwarzian_at(f, z)));
        }
        INFO(f.name() << ": P " << worst_p << ", S " << worst_s);
        CHECK(worst_p <= 1e-10);
        CHECK(worst_s <= 1e-10);
    }
}

TEST_CASE("series route needs a series-backed function")
{
    CHECK_THROWS_AS(schwarzian_series(analytic_fn(catalog::koebe{})), invalid_input);
    CHECK_THROWS_AS(pre_schwarzian_series(analytic_fn(catalog::koebe{})), invalid_input);
    const auto f = random_member(alpha_angle(0.5), 2, 2, false);
    const auto s = schwarzian_series(f);
    const cplx z(0.1, 0.35);
    CHECK(std::abs(series_eval(s, z).value - schwarzian_at(f, z)) <= 1e-10);
}

TEST_CASE("Schwarzian is invariant under post-composition with Möbius maps")
{
    std::mt19937_64 eng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto pts = disk_points(12, 20, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_member(alpha_angle(1.4 * u(eng)), eng(), 1 + static_cast<int>(eng() % 3), false);
        // Pole of M at -d/c, kept at modulus >= 5 so M is analytic on f(|z| <= 0.5).
        const cplx c(0.2 * u(eng), 0.2 * u(eng));
        const cplx d(1.0 + 0.2 * u(eng), 0.2 * u(eng));
        const cplx a(u(eng), u(eng)), b(u(eng), u(eng));
        if (std::abs(a * d - b * c) < 0.1) {
            continue;
        }
        for (const auto &z : pts) {
            const auto st = eval_derivatives(f, z);
            const cplx s_f = schwarzian_from(st);
            const cplx s_mf = schwarzian_from(compose_moebius(a, b, c, d, st));
            CHECK(std::abs(s_mf - s_f) <= 1e-8);
        }
    }
}

TEST_CASE("pre-Schwarzian is invariant under affine maps")
{
    const auto f = random_member(alpha_angle(-0.3), 44, 3, false);
    const cplx a(2.5, -1.0), b(0.3, 0.9);
    for (const auto &z : disk_points(13, 30, 0.8)) {
        auto st = eval_derivatives(f, z);
        const cplx p = pre_schwarzian_from(st);
        st = {a * st.f + b, a * st.f1, a * st.f2, a * st.f3};
        CHECK(std::abs(pre_schwarzian_from(st) - p) <= 4e-16 * std::max(1.0, std::abs(p)));
    }
}
