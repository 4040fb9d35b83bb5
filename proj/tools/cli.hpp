#ifndef ROBERTSON_TOOLS_CLI_HPP
#define ROBERTSON_TOOLS_CLI_HPP

// Command-line front end. Kept in a header so the test suite can drive it
// in-process; tools/main.cpp only forwards argv.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <robertson/robertson.hpp>

#ifndef ROBERTSON_VERSION
#define ROBERTSON_VERSION "0.0.0"
#endif

namespace robertson::cli
{

enum exit_code : int {
    ok = 0,
    theorem_fail = 2,
    precondition = 3,
    usage = 64,
    evaluation = 65,
};

using json = nlohmann::ordered_json;

inline const std::vector<std::string> &function_tags()
{
    static const std::vector<std::string> tags{"identity",           "halfplane",    "koebe",
                                               "robertson-extremal", "spiral-power", "random"};
    return tags;
}

inline const std::vector<std::string> &theorem_ids()
{
    static const std::vector<std::string> ids{"T41", "T42d", "T42g", "T43", "T44", "T45", "LemA"};
    return ids;
}

// Everything that determines the numbers in a report. Thread count and the
// output destination are deliberately not part of it.
struct run_config {
    std::string command;
    std::string fn = "identity";
    double alpha = 0.0;
    bool degrees = false;
    double zeta_arg = 0.0;
    std::uint64_t seed = 0;
    int degree = 3;
    bool zero_f2 = false;
    std::string which = "both";
    std::string theorem;
    int points = 50;
    std::vector<double> alphas;
    std::string format = "json";
    sampling_plan plan;
};

// Shortest round-trip text for a double; locale independent.
inline std::string fmt(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline json number(double v)
{
    // JSON has no infinities; they only arise for empty point sets.
    return std::isfinite(v) ? json(v) : json(nullptr);
}

inline json point(cplx z)
{
    return json{{"re", z.real()}, {"im", z.imag()}};
}

inline double to_radians(const run_config &cfg, double a)
{
    return cfg.degrees ? a * std::numbers::pi / 180.0 : a;
}

inline json plan_json(const sampling_plan &p)
{
    return json{{"radial_count", p.radial_count},
                {"angular_count", p.angular_count},
                {"r_cap", p.r_cap},
                {"refine_depth", p.refine_depth},
                {"rel_tol", p.rel_tol}};
}

inline json config_json(const run_config &cfg)
{
    json j{{"command", cfg.command}, {"fn", cfg.fn}, {"alpha", to_radians(cfg, cfg.alpha)}};
    j["alpha_input"] = cfg.alpha;
    j["degrees"] = cfg.degrees;
    j["zeta_arg"] = cfg.zeta_arg;
    j["seed"] = cfg.seed;
    j["degree"] = cfg.degree;
    j["zero_f2"] = cfg.zero_f2;
    if (cfg.command == "norm") {
        j["which"] = cfg.which;
    }
    if (cfg.command == "verify") {
        j["theorem"] = cfg.theorem;
        j["points"] = cfg.points;
    }
    if (cfg.command == "sweep") {
        j["alphas"] = cfg.alphas;
    }
    j["format"] = cfg.format;
    j["plan"] = plan_json(cfg.plan);
    return j;
}

inline json envelope(const run_config &cfg)
{
    return json{{"tool", "robertson"}, {"version", ROBERTSON_VERSION}, {"config", config_json(cfg)}};
}

inline analytic_fn make_function(const run_config &cfg)
{
    const alpha_angle a(to_radians(cfg, cfg.alpha));
    const cplx zeta = std::polar(1.0, cfg.zeta_arg);
    if (cfg.fn == "identity") {
        return catalog::identity{};
    }
    if (cfg.fn == "halfplane") {
        return catalog::half_plane{};
    }
    if (cfg.fn == "koebe") {
        return catalog::koebe{};
    }
    if (cfg.fn == "robertson-extremal") {
        return catalog::robertson_extremal{a, zeta};
    }
    if (cfg.fn == "spiral-power") {
        return catalog::spiral_power{a, zeta};
    }
    if (cfg.fn == "random") {
        return random_member(a, cfg.seed, cfg.degree, cfg.zero_f2);
    }
    throw invalid_input("unknown function tag: " + cfg.fn);
}

// Test points with |z| <= 0.9 (and inside the function's domain), drawn
// from the seed.
inline std::vector<cplx> sample_points(const run_config &cfg, double domain)
{
    std::mt19937_64 eng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const double rmax = std::min(0.9, domain);
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(cfg.points));
    for (int i = 0; i < cfg.points; ++i) {
        const double u = detail::unit_uniform(eng);
        const double v = detail::unit_uniform(eng);
        pts.push_back(std::polar(rmax * std::sqrt(u), 2.0 * std::numbers::pi * v));
    }
    return pts;
}

inline json estimate_json(const norm_estimate &e)
{
    return json{{"value", e.value},
                {"witness", point(e.witness)},
                {"weight_exponent", e.weight_exponent},
                {"converged", e.converged},
                {"depth_used", e.depth_used},
                {"boundary_limit", e.boundary_limit},
                {"samples", e.samples}};
}

inline json margin_json(const margin_report &m)
{
    return json{{"inf_value", m.inf_value}, {"witness", point(m.witness)}, {"samples", m.samples}};
}

inline json report_json(const theorem_report &r)
{
    json metrics = json::object();
    for (const auto &[k, v] : r.metrics) {
        metrics[k] = number(v);
    }
    return json{{"theorem_id", r.theorem_id},
                {"status", to_string(r.status)},
                {"max_violation", number(r.max_violation)},
                {"tolerance", r.tolerance},
                {"witness", r.witness ? point(*r.witness) : json(nullptr)},
                {"details", r.details},
                {"metrics", metrics}};
}

// A report rendered in the three output formats.
struct rendered {
    json doc;
    std::string csv;
    std::string text;
};

inline std::string render(const run_config &cfg, const rendered &r)
{
    if (cfg.format == "csv") {
        return r.csv;
    }
    if (cfg.format == "text") {
        return r.text;
    }
    return r.doc.dump(2) + "\n";
}

inline rendered cmd_norm(const run_config &cfg, unsigned threads)
{
    const auto f = make_function(cfg);
    const scan_options opts = scan_for(f, threads);
    rendered out{envelope(cfg), "quantity,value,witness_re,witness_im,converged,depth_used,boundary_limit\n", ""};
    json result = json::object();
    const auto emit = [&](const std::string &name, const norm_estimate &e) {
        result[name] = estimate_json(e);
        out.csv += name + "," + fmt(e.value) + "," + fmt(e.witness.real()) + "," + fmt(e.witness.imag()) + ","
                   + (e.converged ? "true" : "false") + "," + std::to_string(e.depth_used) + ","
                   + fmt(e.boundary_limit) + "\n";
        out.text += name + " norm of " + cfg.fn + ": " + fmt(e.value) + " at (" + fmt(e.witness.real()) + ", "
                    + fmt(e.witness.imag()) + ")" + (e.converged ? "" : " [not converged]") + "\n";
    };
    if (cfg.which == "pre" || cfg.which == "both") {
        emit("pre", weighted_sup([&](cplx z) { return pre_schwarzian_at(f, z); }, 1, cfg.plan, opts));
    }
    if (cfg.which == "schwarzian" || cfg.which == "both") {
        emit("schwarzian", weighted_sup([&](cplx z) { return schwarzian_at(f, z); }, 2, cfg.plan, opts));
    }
    out.doc["result"] = result;
    return out;
}

inline theorem_report run_theorem(const run_config &cfg, unsigned threads)
{
    const auto f = make_function(cfg);
    const alpha_angle a(to_radians(cfg, cfg.alpha));
    const auto &id = cfg.theorem;
    if (id == "T41") {
        return verify_T41(f, a, cfg.plan, membership_tolerance, threads);
    }
    if (id == "T42d") {
        const auto pts = sample_points(cfg, f.domain_radius());
        return verify_T42_distortion(f, a, pts, 1e-8, cfg.plan, threads);
    }
    if (id == "T42g") {
        const auto pts = sample_points(cfg, f.domain_radius());
        return verify_T42_growth(f, a, pts, 1e-7, cfg.plan, threads);
    }
    if (id == "T43") {
        return verify_T43(f, a, cfg.plan, 1e-4, threads);
    }
    if (id == "T44") {
        return verify_T44(f, a, cfg.plan, 1e-4, threads);
    }
    if (id == "T45") {
        return verify_T45(f, a, cfg.plan, 1e-4, threads);
    }
    if (id == "LemA") {
        const auto phi = make_phi_transform(f, a);
        if (phi.gamma >= 1.0) {
            return detail::unmet("LemA", 1e-9, "|phi(0)| = " + detail::num(phi.gamma) + " >= 1");
        }
        const auto pts = sample_points(cfg, f.domain_radius());
        return lemma_schur_check(phi, phi.gamma, pts);
    }
    throw invalid_input("unknown theorem id: " + id);
}

inline int verdict_exit(verdict v)
{
    switch (v) {
        case verdict::pass:
            return ok;
        case verdict::fail:
            return theorem_fail;
        default:
            return precondition;
    }
}

inline rendered cmd_verify(const run_config &cfg, unsigned threads, int &code)
{
    const auto r = run_theorem(cfg, threads);
    code = verdict_exit(r.status);
    rendered out{envelope(cfg), "theorem_id,status,max_violation,tolerance,witness_re,witness_im\n", ""};
    out.doc["result"] = report_json(r);
    const cplx w = r.witness.value_or(cplx{});
    out.csv += r.theorem_id + "," + to_string(r.status) + "," + fmt(r.max_violation) + "," + fmt(r.tolerance) + ","
               + (r.witness ? fmt(w.real()) : "") + "," + (r.witness ? fmt(w.imag()) : "") + "\n";
    out.text = r.theorem_id + ": " + to_string(r.status) + "\n" + r.details + "\n";
    for (const auto &[k, v] : r.metrics) {
        out.text += "  " + k + " = " + fmt(v) + "\n";
    }
    return out;
}

inline rendered cmd_sweep(const run_config &cfg, unsigned threads)
{
    rendered out{envelope(cfg),
                 "alpha,two_cos_alpha,pre_norm_estimate,schwarzian_bound,schwarzian_norm_estimate\n", ""};
    json rows = json::array();
    for (const double input : cfg.alphas) {
        const alpha_angle a(to_radians(cfg, input));
        const analytic_fn f = catalog::robertson_extremal{a};
        const auto opts = scan_for(f, threads);
        const auto pre = weighted_sup([&](cplx z) { return pre_schwarzian_at(f, z); }, 1, cfg.plan, opts);
        const auto sch = weighted_sup([&](cplx z) { return schwarzian_at(f, z); }, 2, cfg.plan, opts);
        rows.push_back(json{{"alpha", a.value()},
                            {"two_cos_alpha", t43_bound(a)},
                            {"pre_norm", estimate_json(pre)},
                            {"schwarzian_bound", t44_bound(a)},
                            {"schwarzian_norm", estimate_json(sch)}});
        out.csv += fmt(a.value()) + "," + fmt(t43_bound(a)) + "," + fmt(pre.value) + "," + fmt(t44_bound(a)) + ","
                   + fmt(sch.value) + "\n";
    }
    out.doc["result"] = json{{"rows", rows}};
    out.text = out.csv;
    return out;
}

inline rendered cmd_sample(const run_config &cfg, unsigned threads)
{
    const alpha_angle a(to_radians(cfg, cfg.alpha));
    const auto f = random_member(a, cfg.seed, cfg.degree, cfg.zero_f2);
    const auto &s = std::get<catalog::series_backed>(f.kind()).series();
    const auto m = robertson_margin(f, a, cfg.plan, threads);
    rendered out{envelope(cfg), "n,re,im\n", ""};
    json coeffs = json::array();
    for (std::size_t n = 0; n <= s.order(); ++n) {
        coeffs.push_back(json::array({s[n].real(), s[n].imag()}));
        out.csv += std::to_string(n) + "," + fmt(s[n].real()) + "," + fmt(s[n].imag()) + "\n";
    }
    const double gamma = std::abs(second_deriv_origin(f)) / (2.0 * a.cos());
    out.doc["result"] = json{{"order", s.order()},
                             {"guard_radius", s.guard_radius()},
                             {"coefficients", coeffs},
                             {"gamma", gamma},
                             {"margin", margin_json(m)},
                             {"certified_member", certified_member(m)}};
    out.text = "member of order " + std::to_string(s.order()) + ", gamma " + fmt(gamma) + ", margin "
               + fmt(m.inf_value) + (certified_member(m) ? " (certified)" : " (not certified)") + "\n";
    return out;
}

// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Pre-Schwarzian and Schwarzian norm toolkit for the Robertson class", "robertson"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
    app.set_version_flag("--version", ROBERTSON_VERSION);

    run_config cfg;
    std::string out_path;
    unsigned threads = 1;

    app.add_option("--fn", cfg.fn, "Function tag")->check(CLI::IsMember(function_tags()));
    app.add_option("--alpha", cfg.alpha, "Angle alpha (radians unless --deg)");
    app.add_flag("--deg", cfg.degrees, "Interpret angles in degrees");
    app.add_option("--zeta-arg", cfg.zeta_arg, "Argument of the unimodular zeta for catalog families");
    app.add_option("--seed", cfg.seed, "Seed for generated members and test points");
    app.add_option("--degree", cfg.degree, "Maximal number of Blaschke factors (1..3)")->check(CLI::Range(1, 3));
    app.add_flag("--zero-f2", cfg.zero_f2, "Generate members with f''(0) = 0");
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", out_path, "Write the report to this path instead of standard output");
    app.add_option("--threads", threads, "Worker threads for grid scans")->check(CLI::Range(1u, 256u));
    app.add_option("--radial-count", cfg.plan.radial_count, "Radial grid nodes");
    app.add_option("--angular-count", cfg.plan.angular_count, "Angular grid nodes");
    app.add_option("--r-cap", cfg.plan.r_cap, "Largest grid radius");
    app.add_option("--refine-depth", cfg.plan.refine_depth, "Local refinement levels");
    app.add_option("--rel-tol", cfg.plan.rel_tol, "Relative convergence tolerance");

    auto *norm = app.add_subcommand("norm", "Estimate ||Pf|| and/or ||Sf||");
    norm->add_option("--which", cfg.which, "pre, schwarzian or both")
        ->check(CLI::IsMember({"pre", "schwarzian", "both"}));

    auto *verify = app.add_subcommand("verify", "Run one theorem verifier");
    verify->add_option("theorem", cfg.theorem, "Theorem id")->required()->check(CLI::IsMember(theorem_ids()));
    verify->add_option("--points", cfg.points, "Test points for pointwise verifiers")->check(CLI::Range(1, 100000));

    auto *sweep = app.add_subcommand("sweep", "Norms of the extremal family over a grid of alpha");
    sweep->add_option("--alphas", cfg.alphas, "Comma separated alpha values")->delimiter(',');

    auto *sample = app.add_subcommand("sample", "Generate a member and report its coefficients and margin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion &) {
        out << ROBERTSON_VERSION << "\n";
        return ok;
    } catch (const CLI::ParseError &e) {
        err << "robertson: " << e.what() << "\n";
        return usage;
    }

    int code = ok;
    try {
        cfg.plan.validate();
        if (!(std::abs(to_radians(cfg, cfg.alpha)) < std::numbers::pi / 2)) {
            throw invalid_input("alpha must satisfy -pi/2 < alpha < pi/2");
        }
        rendered r;
        if (norm->parsed()) {
            cfg.command = "norm";
            r = cmd_norm(cfg, threads);
        } else if (verify->parsed()) {
            cfg.command = "verify";
            r = cmd_verify(cfg, threads, code);
        } else if (sweep->parsed()) {
            cfg.command = "sweep";
            if (cfg.alphas.empty()) {
                const double p = std::numbers::pi;
                cfg.alphas = {-p / 3, -p / 4, -p / 6, 0.0, p / 6, p / 4, p / 3};
                if (cfg.degrees) {
                    cfg.alphas = {-60.0, -45.0, -30.0, 0.0, 30.0, 45.0, 60.0};
                }
            }
            if (cfg.format == "json" && app.get_option("--format")->count() == 0) {
                cfg.format = "csv";
            }
            r = cmd_sweep(cfg, threads);
        } else if (sample->parsed()) {
            cfg.command = "sample";
            r = cmd_sample(cfg, threads);
        }
        const std::string text = render(cfg, r);
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                err << "robertson: cannot open " << out_path << " for writing\n";
                return usage;
            }
            file << text;
        }
    } catch (const invalid_input &e) {
        err << "robertson: " << e.what() << "\n";
        return usage;
    } catch (const evaluation_error &e) {
        err << "robertson: evaluation error: " << e.what() << "\n";
        return evaluation;
    }
    return code;
}

// Convenience overload for tests: arguments without the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    std::vector<const char *> argv{"robertson"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace robertson::cli

#endif
