#ifndef ROBERTSON_DISK_SUP_HPP
#define ROBERTSON_DISK_SUP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include <robertson/errors.hpp>
#include <robertson/series.hpp>

namespace robertson
{

// Polar sampling grid and refinement schedule for sup/inf estimation.
struct sampling_plan {
    int radial_count = 64;
    int angular_count = 128;
    double r_cap = 0.995;
    int refine_depth = 6;
    double rel_tol = 1e-4;

    void validate() const
    {
        if (radial_count < 8) {
            throw invalid_input("sampling_plan: radial_count must be >= 8");
        }
        if (angular_count < 16) {
            throw invalid_input("sampling_plan: angular_count must be >= 16");
        }
        if (!(r_cap > 0.0 && r_cap < 1.0)) {
            throw invalid_input("sampling_plan: r_cap must lie in (0, 1)");
        }
        if (refine_depth < 0) {
            throw invalid_input("sampling_plan: refine_depth must be >= 0");
        }
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
            throw invalid_input("sampling_plan: rel_tol must lie in (0, 1)");
        }
    }
};

// How a scan is executed; never affects the numbers produced.
struct scan_options {
    // Evaluators are only called at |z| <= domain_radius. Below 1 (series
    // backed functions) the boundary push is skipped.
    double domain_radius = 1.0;
    unsigned threads = 1;
};

// Sampled lower bound of sup (1 - |z|^2)^k |g(z)|.
struct norm_estimate {
    double value = 0.0;
    cplx witness{};
    int weight_exponent = 1;
    bool converged = false;
    int depth_used = 0;
    // Quadratic extrapolation of the profile along the witness ray to r = 1;
    // informational only, never folded into `value`.
    double boundary_limit = 0.0;
    std::size_t samples = 0;
};

// Sampled upper bound of inf Re h(z).
struct margin_report {
    double inf_value = 0.0;
    cplx witness{};
    std::size_t samples = 0;
};

namespace detail
{

struct scan_result {
    double best = 0.0;
    cplx witness{};
    bool converged = false;
    int depth_used = 0;
    double boundary_limit = 0.0;
    std::size_t samples = 0;
};

inline double weight(double r, int k)
{
    const double w = (1.0 - r) * (1.0 + r);
    return k == 1 ? w : w * w;
}

// Evaluates score at every point, possibly on several threads; results land
// in input order so the caller's reduction is independent of scheduling.
template <typename Score>
std::vector<double> evaluate_all(const Score &score, std::span<const cplx> pts, unsigned threads)
{
    std::vector<double> out(pts.size());
    const auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = score(pts[i]);
            if (std::isnan(v)) {
                throw evaluation_error("objective returned NaN");
            }
            out[i] = v;
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(pts.size() / 64, 1));
    if (n_threads == 1) {
        run(0, pts.size());
        return out;
    }
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (pts.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                run(std::min(t * chunk, pts.size()), std::min((t + 1) * chunk, pts.size()));
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

// Maximizes score over the disk of radius min(r_cap, domain_radius):
// coarse polar grid, push along the best ray towards the circle, then local
// refinement around the incumbent. Only strict improvements move the
// witness, so ties resolve to the earliest point in scan order and the
// value is non-decreasing in refine_depth.
template <typename Score>
scan_result maximize(const Score &score, const sampling_plan &plan, const scan_options &opts)
{
    plan.validate();
    // Stay a hair inside the domain so polar() rounding never crosses a guard.
    const double r_top = std::min(plan.r_cap, opts.domain_radius * (1.0 - 1e-12));
    const auto nr = static_cast<std::size_t>(plan.radial_count);
    const auto na = static_cast<std::size_t>(plan.angular_count);

    std::vector<double> radii(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        // Cosine spacing, clustered towards r_top.
        radii[i] = r_top * std::sin(0.5 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nr - 1));
    }
    radii.back() = r_top;
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(na);

    std::vector<cplx> pts;
    pts.reserve(nr * na);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            pts.push_back(std::polar(radii[i], dtheta * static_cast<double>(j)));
        }
    }
    const auto vals = evaluate_all(score, pts, opts.threads);

    scan_result res;
    std::size_t best_idx = 0;
    for (std::size_t idx = 1; idx < vals.size(); ++idx) {
        if (vals[idx] > vals[best_idx]) {
            best_idx = idx;
        }
    }
    res.best = vals[best_idx];
    res.witness = pts[best_idx];
    res.samples = pts.size();
    res.boundary_limit = res.best;

    std::size_t best_i = best_idx / na;
    double best_r = radii[best_i];
    double best_theta = dtheta * static_cast<double>(best_idx % na);
    double r_reach = r_top;

    // Nested angular search on the circle |z| = r around best_theta, from a
    // window of `width` down to `floor`. Moves the incumbent only on strict
    // improvement; returns the best value seen on this circle.
    const auto angular_search = [&](double r, double width, double floor) {
        double theta = best_theta;
        double on_circle = score(std::polar(r, theta));
        ++res.samples;
        if (std::isnan(on_circle)) {
            throw evaluation_error("objective returned NaN");
        }
        for (double w = width; w >= floor; w /= 4.0) {
            double centre = theta;
            for (int b = -4; b <= 4; ++b) {
                if (b == 0) {
                    continue;
                }
                const double t = centre + w * b / 4.0;
                const double v = score(std::polar(r, t));
                ++res.samples;
                if (std::isnan(v)) {
                    throw evaluation_error("objective returned NaN");
                }
                if (v > on_circle) {
                    on_circle = v;
                    theta = t;
                }
            }
        }
        if (on_circle > res.best) {
            res.best = on_circle;
            res.witness = std::polar(r, theta);
            best_r = r;
            best_theta = theta;
        }
        return on_circle;
    };

    // Boundary push: suprema of the functions of interest are typically
    // boundary limits. The peak narrows like the distance s to the circle, so
    // the angle is re-centred at every radius instead of keeping one ray.
    // An off-grid boundary peak can make an inner ring win the coarse scan,
    // so the outer ring is searched around the incumbent's angle first.
    if (opts.domain_radius >= 1.0 && best_i != nr - 1) {
        angular_search(r_top, dtheta, 1e-2 * (1.0 - r_top));
        if (best_r == r_top) {
            best_i = nr - 1;
        }
    }
    if (best_i == nr - 1 && opts.domain_radius >= 1.0) {
        double s = 1.0 - r_top;
        const double ring = angular_search(r_top, dtheta, 1e-2 * s);
        std::vector<std::pair<double, double>> profile{{s, std::max(ring, res.best)}};
        for (int m = 1; m <= 8; ++m) {
            s *= 0.1;
            const double v = angular_search(1.0 - s, 10.0 * s, 1e-2 * s);
            profile.emplace_back(s, v);
            r_reach = 1.0 - s;
        }
        // Quadratic through the last three (s, v) pairs, evaluated at s = 0.
        const auto n = profile.size();
        const auto [s0, v0] = profile[n - 3];
        const auto [s1, v1] = profile[n - 2];
        const auto [s2, v2] = profile[n - 1];
        res.boundary_limit = v0 * (s1 * s2) / ((s0 - s1) * (s0 - s2)) + v1 * (s0 * s2) / ((s1 - s0) * (s1 - s2))
                             + v2 * (s0 * s1) / ((s2 - s0) * (s2 - s1));
    }

    // Local refinement on a 9x9 stencil, shrinking by 4 per level.
    double hr = 0.0;
    if (best_i > 0) {
        hr = radii[best_i] - radii[best_i - 1];
    }
    if (best_i + 1 < nr) {
        hr = std::max(hr, radii[best_i + 1] - radii[best_i]);
    }
    double ht = dtheta;
    constexpr int half = 4;
    std::vector<double> history{res.best};
    for (int depth = 1; depth <= plan.refine_depth; ++depth) {
        std::vector<cplx> local;
        local.reserve(81);
        for (int a = -half; a <= half; ++a) {
            const double r = std::clamp(best_r + hr * a / half, 0.0, r_reach);
            for (int b = -half; b <= half; ++b) {
                if (a == 0 && b == 0) {
                    continue;
                }
                local.push_back(std::polar(r, best_theta + ht * b / half));
            }
        }
        const auto lv = evaluate_all(score, local, opts.threads);
        res.samples += local.size();
        for (std::size_t idx = 0; idx < lv.size(); ++idx) {
            if (lv[idx] > res.best) {
                res.best = lv[idx];
                res.witness = local[idx];
            }
        }
        best_r = std::abs(res.witness);
        best_theta = std::arg(res.witness);
        hr /= half;
        ht /= half;
        history.push_back(res.best);
        res.depth_used = depth;
    }
    if (history.size() >= 2) {
        const double last = history.back(), prev = history[history.size() - 2];
        res.converged = std::abs(last - prev) <= plan.rel_tol * std::max(std::abs(last), 1e-300);
        if (last == prev) {
            res.converged = true;
        }
    }
    return res;
}

} // namespace detail

// sup over |z| < 1 of (1 - |z|^2)^k |g(z)|, k in {1, 2}. The value is always
// the weighted modulus at the reported witness, hence a lower bound.
template <typename G>
norm_estimate weighted_sup(const G &g, int k, const sampling_plan &plan = {}, const scan_options &opts = {})
{
    if (k != 1 && k != 2) {
        throw invalid_input("weighted_sup: weight exponent must be 1 or 2");
    }
    const auto score = [&](cplx z) { return detail::weight(std::abs(z), k) * std::abs(g(z)); };
    const auto res = detail::maximize(score, plan, opts);
    norm_estimate est;
    est.value = res.best;
    est.witness = res.witness;
    est.weight_exponent = k;
    est.converged = res.converged;
    est.depth_used = res.depth_used;
    est.boundary_limit = std::max(res.boundary_limit, res.best);
    est.samples = res.samples;
    return est;
}

// inf over |z| < 1 of Re h(z), as the smallest sampled value.
template <typename H>
margin_report weighted_inf_re(const H &h, const sampling_plan &plan = {}, const scan_options &opts = {})
{
    const auto score = [&](cplx z) { return -std::real(h(z)); };
    const auto res = detail::maximize(score, plan, opts);
    return {-res.best, res.witness, res.samples};
}

// (1 - r^2)^k |g(r e^{i theta})| for each radius.
template <typename G>
std::vector<double> radial_profile(const G &g, int k, double theta, std::span<const double> radii)
{
    std::vector<double> out;
    out.reserve(radii.size());
    for (const double r : radii) {
        if (!(r >= 0.0 && r < 1.0)) {
            throw invalid_input("radial_profile: radii must lie in [0, 1)");
        }
        out.push_back(detail::weight(r, k) * std::abs(g(std::polar(r, theta))));
    }
    return out;
}

} // namespace robertson

#endif
