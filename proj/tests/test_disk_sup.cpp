#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <robertson/disk_sup.hpp>
#include <robertson/functions.hpp>
#include <robertson/schwarzian.hpp>

using namespace robertson;
using Catch::Matchers::WithinAbs;

namespace
{

double weighted_at(const norm_estimate &e, cplx g_at_witness)
{
    const double r = std::abs(e.witness);
    const double w = (1.0 - r) * (1.0 + r);
    return (e.weight_exponent == 1 ? w : w * w) * std::abs(g_at_witness);
}

} // namespace

TEST_CASE("constant evaluator peaks at the centre")
{
    const cplx c(0.6, -0.8);
    const auto e = weighted_sup([&](cplx) { return c; }, 1);
    CHECK(e.value == std::abs(c));
    CHECK(e.witness == cplx(0.0));
    CHECK(e.converged);
}

TEST_CASE("pre-Schwarzian norm of the extremal function at alpha = 0")
{
    const analytic_fn f = catalog::robertson_extremal{alpha_angle(0.0)};
    const auto e = weighted_sup([&](cplx z) { return pre_schwarzian_at(f, z); }, 1);
    CHECK_THAT(e.value, WithinAbs(2.0, 1e-3));
    CHECK(e.value <= 2.0 + 1e-9);
    CHECK(e.converged);
    CHECK_THAT(e.value, WithinAbs(weighted_at(e, pre_schwarzian_at(f, e.witness)), 1e-12));
}

TEST_CASE("pre-Schwarzian norm of the half-plane map")
{
    const analytic_fn f = catalog::half_plane{};
    const auto e = weighted_sup([&](cplx z) { return pre_schwarzian_at(f, z); }, 1);
    CHECK_THAT(e.value, WithinAbs(4.0, 1e-3));
    CHECK(e.value <= 4.0 + 1e-9);
    CHECK(e.witness.real() > 0.99);
}

TEST_CASE("Schwarzian norm of the Koebe function")
{
    const analytic_fn f = catalog::koebe{};
    const auto e = weighted_sup([&](cplx z) { return schwarzian_at(f, z); }, 2);
    CHECK_THAT(e.value, WithinAbs(6.0, 1e-3));
    CHECK(e.value <= 6.0 + 1e-9);
    CHECK(e.weight_exponent == 2);
    CHECK_THAT(e.value, WithinAbs(weighted_at(e, schwarzian_at(f, e.witness)), 1e-12));
}

TEST_CASE("infimum of a constant functional")
{
    const auto m = weighted_inf_re([](cplx) { return cplx(1.0); });
    CHECK(m.inf_value == 1.0);
    CHECK(m.samples > 0);
}

TEST_CASE("half-plane functional tends to zero at the boundary")
{
    const auto h = [](cplx z) { return (1.0 + z) / (1.0 - z); };
    double prev = std::numeric_limits<double>::infinity();
    for (int depth = 0; depth <= 6; depth += 2) {
        sampling_plan plan;
        plan.refine_depth = depth;
        const auto m = weighted_inf_re(h, plan);
        CHECK(m.inf_value > 0.0);
        CHECK(m.inf_value <= prev);
        CHECK_THAT(m.inf_value, WithinAbs(std::real(h(m.witness)), 1e-12));
        prev = m.inf_value;
    }
    CHECK(prev < 1e-3);
    const auto m = weighted_inf_re(h);
    CHECK(std::abs(m.witness) > 0.99);
    CHECK(m.witness.real() < 0.0);
}

TEST_CASE("radial profiles")
{
    const analytic_fn f = catalog::robertson_extremal{alpha_angle(0.0)};
    const auto pf = [&](cplx z) { return pre_schwarzian_at(f, z); };
    const std::vector<double> radii{0.5, 0.9, 0.99};
    const auto p = radial_profile(pf, 1, 0.0, radii);
    CHECK_THAT(p[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(p[1], WithinAbs(1.8, 1e-12));
    CHECK_THAT(p[2], WithinAbs(1.98, 1e-12));

    const auto g = [](cplx z) { return cplx(3.0, 4.0) + z; };
    const std::vector<double> origin{0.0};
    CHECK(radial_profile(g, 2, 1.3, origin)[0] == 5.0);

    const analytic_fn k = catalog::koebe{};
    const auto sk = [&](cplx z) { return schwarzian_at(k, z); };
    const std::vector<double> rs{0.0, 0.3, 0.6, 0.9, 0.99};
    for (const double v : radial_profile(sk, 2, 0.0, rs)) {
        CHECK_THAT(v, WithinAbs(6.0, 1e-9));
    }
    const auto side = radial_profile(sk, 2, std::numbers::pi / 2, rs);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double r2 = rs[i] * rs[i];
        CHECK_THAT(side[i], WithinAbs(6.0 * (1.0 - r2) * (1.0 - r2) / ((1.0 + r2) * (1.0 + r2)), 1e-9));
        if (i > 0) {
            CHECK(side[i] < side[i - 1]);
        }
    }
    const std::vector<double> bad{1.0};
    CHECK_THROWS_AS(radial_profile(g, 1, 0.0, bad), invalid_input);
}

TEST_CASE("refinement never lowers the estimate")
{
    const alpha_angle a(0.8);
    const analytic_fn f = catalog::spiral_power{a, std::polar(1.0, 0.37)};
    const auto m = random_member(alpha_angle(-0.4), 5, 3, false);
    const auto sf = [&](cplx z) { return schwarzian_at(f, z); };
    const auto sm = [&](cplx z) { return schwarzian_at(m, z); };
    double prev_f = 0.0, prev_m = 0.0;
    for (int depth = 0; depth <= 8; ++depth) {
        sampling_plan plan;
        plan.refine_depth = depth;
        const auto ef = weighted_sup(sf, 2, plan);
        const auto em = weighted_sup(sm, 2, plan, {m.domain_radius(), 1});
        CHECK(ef.value >= prev_f);
        CHECK(em.value >= prev_m);
        CHECK(ef.depth_used == depth);
        prev_f = ef.value;
        prev_m = em.value;
    }
}

TEST_CASE("estimates never exceed known norms")
{
    for (const double alpha : {0.0, std::numbers::pi / 6, -std::numbers::pi / 4, std::numbers::pi / 3, 1.4}) {
        const alpha_angle a(alpha);
        const analytic_fn f = catalog::robertson_extremal{a};
        const double c = a.cos();
        const auto ep = weighted_sup([&](cplx z) { return pre_schwarzian_at(f, z); }, 1);
        const auto es = weighted_sup([&](cplx z) { return schwarzian_at(f, z); }, 2);
        CHECK(ep.value <= 2.0 * c + 1e-9);
        CHECK(es.value <= 2.0 * c * (2.0 - c) + 1e-9);
        CHECK(ep.boundary_limit >= ep.value);
    }
}

TEST_CASE("rotating the argument leaves the supremum unchanged")
{
    const alpha_angle a(std::numbers::pi / 4);
    const analytic_fn f = catalog::robertson_extremal{a};
    const auto base = weighted_sup([&](cplx z) { return schwarzian_at(f, z); }, 2);
    for (const double t : {0.1, 1.0, 2.5, -2.2}) {
        const cplx zeta = std::polar(1.0, t);
        const auto rot = weighted_sup([&](cplx z) { return schwarzian_at(f, zeta * z); }, 2);
        CHECK(std::abs(rot.value - base.value) <= 1e-4 * base.value);
    }
    const analytic_fn hp = catalog::half_plane{};
    const auto hb = weighted_sup([&](cplx z) { return pre_schwarzian_at(hp, z); }, 1);
    const cplx zeta = std::polar(1.0, 2.0);
    const auto hr = weighted_sup([&](cplx z) { return pre_schwarzian_at(hp, zeta * z); }, 1);
    CHECK(std::abs(hr.value - hb.value) <= 1e-4 * hb.value);
}

TEST_CASE("thread count does not change the result")
{
    const auto m = random_member(alpha_angle(0.9), 8, 3, true);
    const auto g = [&](cplx z) { return schwarzian_at(m, z); };
    const auto one = weighted_sup(g, 2, {}, {m.domain_radius(), 1});
    const auto four = weighted_sup(g, 2, {}, {m.domain_radius(), 4});
    CHECK(one.value == four.value);
    CHECK(one.witness == four.witness);
    CHECK(one.samples == four.samples);
}

TEST_CASE("evaluations stay inside the domain radius")
{
    std::atomic<bool> outside{false};
    const auto g = [&](cplx z) {
        if (std::abs(z) > 0.9) {
            outside = true;
        }
        return 1.0 / (1.0 - z);
    };
    const auto e = weighted_sup(g, 1, {}, {0.9, 3});
    CHECK_FALSE(outside.load());
    CHECK(std::abs(e.witness) <= 0.9);
}

TEST_CASE("errors from the evaluator propagate")
{
    const auto bad = [](cplx z) -> cplx {
        if (std::abs(z) > 0.5) {
            throw vanishing_derivative("boom");
        }
        return 1.0;
    };
    CHECK_THROWS_AS(weighted_sup(bad, 1), vanishing_derivative);
    CHECK_THROWS_AS(weighted_sup(bad, 1, {}, {1.0, 4}), vanishing_derivative);
    const auto nan = [](cplx) { return cplx(std::nan(""), 0.0); };
    CHECK_THROWS_AS(weighted_inf_re(nan), evaluation_error);
}

TEST_CASE("plan validation")
{
    const auto g = [](cplx) { return cplx(1.0); };
    sampling_plan p;
    p.radial_count = 4;
    CHECK_THROWS_AS(weighted_sup(g, 1, p), invalid_input);
    p = {};
    p.angular_count = 8;
    CHECK_THROWS_AS(weighted_sup(g, 1, p), invalid_input);
    p = {};
    p.r_cap = 1.0;
    CHECK_THROWS_AS(weighted_sup(g, 1, p), invalid_input);
    p = {};
    p.refine_depth = -1;
    CHECK_THROWS_AS(weighted_sup(g, 1, p), invalid_input);
    p = {};
    p.rel_tol = 0.0;
    CHECK_THROWS_AS(weighted_sup(g, 1, p), invalid_input);
    CHECK_THROWS_AS(weighted_sup(g, 3), invalid_input);
}
