// Stand-alone acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "s5frames/runner.hpp"

using namespace s5frames;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int n, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig config(const std::string& chart, std::vector<std::string> suites) {
    RunConfig cfg;
    cfg.chart = chart;
    cfg.suites = std::move(suites);
    return cfg;
}

const json& suite(const json& rep, const std::string& name) {
    for (const auto& s : rep["suites"])
        if (s["name"] == name) return s;
    throw std::runtime_error("missing suite " + name);
}

const json& equation(const json& rep, const std::string& s, const std::string& id) {
    for (const auto& e : suite(rep, s)["equations"])
        if (e["equation"] == id) return e;
    throw std::runtime_error("missing equation " + id);
}

double max_abs(const json& rep, const std::string& s, const std::string& id) {
    return equation(rep, s, id)["max_abs"].get<double>();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

const std::vector<std::string> kMinimal = {"legendrian-clifford", "geodesic-s2"};

void frames() {
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (const auto& c : kMinimal) {
        const auto t0 = std::chrono::steady_clock::now();
        const RunResult r = run(config(c, {"frames"}));
        slowest = std::max(slowest, seconds_since(t0));
        ok = ok && r.exit_code == 0;
        for (const auto& e : suite(r.report, "frames")["equations"]) {
            worst = std::max(worst, e["max_abs"].get<double>());
            ok = ok && e["points_evaluated"] == 4096u;
        }
    }
    ok = ok && worst <= 1e-9 && slowest < 5.0;
    report(1, ok, "frame identities " + fmt("%.3g", worst) + " on 64x64, slowest " + fmt("%.2f", slowest) + " s");
}

void connection() {
    bool ok = true;
    std::string ratios;
    for (const auto& c : kMinimal) {
        const RunResult r = run(config(c, {"connection"}));
        const json& s = suite(r.report, "connection");
        ok = ok && r.exit_code == 0 && s["pass"].get<bool>() && s["diagnostics"].contains("richardson") &&
             s["diagnostics"]["richardson"]["pass"].get<bool>();
        if (s["diagnostics"].contains("richardson"))
            ratios += " " + c + " ratio " + fmt("%.1f", s["diagnostics"]["richardson"]["ratio"].get<double>());
    }
    report(2, ok, "connection suite with convergence check;" + ratios);
}

void curvature() {
    const RunResult geo = run(config("geodesic-s2", {"curvature"}));
    const RunResult leg = run(config("legendrian-clifford", {"curvature"}));
    const double k_geo = max_abs(geo.report, "curvature", "K_intrinsic");
    const double k_leg = max_abs(leg.report, "curvature", "K_intrinsic");
    const double gauss = std::max(max_abs(geo.report, "curvature", "K_gauss_vs_intrinsic"),
                                  max_abs(leg.report, "curvature", "K_gauss_vs_intrinsic"));
    const bool ok = std::abs(k_geo - 1.0) <= 1e-5 && k_leg <= 1e-5 && gauss <= 1e-3 && geo.exit_code == 0 &&
                    leg.exit_code == 0;
    report(3, ok,
           "intrinsic K " + fmt("%.8f", k_geo) + " and " + fmt("%.2e", k_leg) + ", formula gap " + fmt("%.2e", gauss));
}

void minimality() {
    double worst = 0.0;
    for (const auto& c : kMinimal) worst = std::max(worst, max_abs(run(config(c, {"connection"})).report, "connection", "mean_curvature"));
    const RunResult probe = run(config("torus:0.9,0.3,0.316227766016838;1,0;0,1;0,0", {"connection"}));
    const double h = max_abs(probe.report, "connection", "mean_curvature");
    report(4, worst <= 1e-6 && h > 1e-2 && probe.exit_code == 1,
           "mean curvature " + fmt("%.2e", worst) + " on fixtures, probe " + fmt("%.3f", h));
}

void codazzi() {
    bool ok = true;
    for (const auto& c : kMinimal) {
        const RunResult r = run(config(c, {"codazzi"}));
        ok = ok && r.exit_code == 0;
        for (const auto& e : suite(r.report, "codazzi")["equations"])
            ok = ok && e["points_evaluated"].get<std::size_t>() + e["points_skipped"].get<std::size_t>() == 4096u;
    }
    report(5, ok, "Codazzi suite passes with full point accounting");
}

void elimination() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.1, kPi - 0.1), half(0.1, kPi / 2 - 0.1), d(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k)
        worst = std::max(worst, std::abs(reduced_elimination(angle(rng), half(rng), d(rng)).combined_laplacian));
    const double t = seconds_since(t0);
    report(6, worst <= 1e-12 && t < 1.0, "10000 elimination samples, worst " + fmt("%.2e", worst));
}

void locus() {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double beta = 0.01 + k * (kPi / 2 - 0.02) / 49;
        worst = std::max(worst, std::abs(circle_locus(beta, 0.0, locus_b_for_a_zero(beta, k % 2 ? -1 : 1))));
        const double beta2 = kPi / 4 + 0.01 + k * (kPi / 4 - 0.02) / 49;
        const auto a = locus_a_for_b_zero(beta2);
        worst = std::max(worst, a ? std::abs(circle_locus(beta2, *a, 0.0)) : 1.0);
    }
    const double boundary = std::abs(locus_a_sq_for_b_zero(kPi / 4));
    report(7, worst <= 1e-12 && boundary <= 1e-12 && !locus_a_for_b_zero(kPi / 4 - 0.01),
           "100 circle samples, worst " + fmt("%.2e", worst));
}

void determinism() {
    RunConfig cfg = config("legendrian-clifford", {"all"});
    cfg.grid_nu = cfg.grid_nv = 32;
    const json a = run(cfg).report;
    const bool same = dump_report(a) == dump_report(run(cfg).report);
    cfg.workers = 4;
    const json b = run(cfg).report;
    bool stable = a["suites"].size() == b["suites"].size();
    for (std::size_t s = 0; stable && s < a["suites"].size(); ++s)
        for (std::size_t e = 0; e < a["suites"][s]["equations"].size(); ++e) {
            const json& x = a["suites"][s]["equations"][e];
            const json& y = b["suites"][s]["equations"][e];
            stable = stable && x["max_abs"] == y["max_abs"] &&
                     std::abs(x["mean_abs"].get<double>() - y["mean_abs"].get<double>()) <= 1e-15;
        }
    report(8, same && stable, "reports byte-identical, worker count leaves statistics unchanged");
}

} // namespace

int main() {
    for (auto* check : {frames, connection, curvature, minimality, codazzi, elimination, locus, determinism}) {
        try {
            check();
        } catch (const std::exception& e) {
            std::printf("FAIL criterion: %s\n", e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
