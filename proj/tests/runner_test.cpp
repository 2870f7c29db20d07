#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "s5frames/runner.hpp"

using namespace s5frames;
using nlohmann::json;

namespace {

RunConfig config(const std::string& chart, std::vector<std::string> suites, std::size_t n = 16) {
    RunConfig cfg;
    cfg.chart = chart;
    cfg.suites = std::move(suites);
    cfg.grid_nu = cfg.grid_nv = n;
    return cfg;
}

const json& suite(const json& report, const std::string& name) {
    for (const auto& s : report["suites"])
        if (s["name"] == name) return s;
    throw std::runtime_error("no suite " + name);
}

const json& equation(const json& report, const std::string& s, const std::string& id) {
    for (const auto& e : suite(report, s)["equations"])
        if (e["equation"] == id) return e;
    throw std::runtime_error("no equation " + id);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "s5frames_runner_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(RunConfig, Validation) {
    EXPECT_EQ(validate_config(config("geodesic-s2", {"all"})).size(), 8u);
    EXPECT_EQ(validate_config(config("geodesic-s2", {"curvature", "frames", "frames"})),
              (std::vector<std::string>{"frames", "curvature"}));
    EXPECT_THROW(validate_config(config("geodesic-s2", {"gauss"})), ConfigError);
    EXPECT_THROW(validate_config(config("geodesic-s2", {})), ConfigError);
    EXPECT_THROW(validate_config(config("geodesic-s2", {"all"}, 7)), ConfigError);
    RunConfig cfg = config("geodesic-s2", {"all"});
    cfg.h = 0.1;
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg.h = 1e-8;
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg.h = 1e-3;
    cfg.tolerances["gauss"] = 1.0;
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg.tolerances = {{"frames", -1.0}};
    EXPECT_THROW(validate_config(cfg), ConfigError);
}

TEST(Run, UnknownChartIsAConfigError) {
    EXPECT_THROW(run(config("nowhere", {"frames"})), ConfigError);
    EXPECT_THROW(run(config("torus:1,1,1;1,0;0,1;0,0", {"frames"})), ConfigError);
}

TEST(Run, GeodesicSphereFramesAndCurvature) {
    const RunResult r = run(config("geodesic-s2", {"frames", "curvature"}, 64));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(r.report["overall_pass"].get<bool>());
    ASSERT_EQ(r.report["suites"].size(), 2u);
    EXPECT_EQ(r.report["suites"][0]["name"], "frames");
    const json& k = equation(r.report, "curvature", "K_intrinsic");
    EXPECT_FALSE(k["gating"].get<bool>());
    EXPECT_TRUE(k["pass"].is_null());
    EXPECT_NEAR(k["max_abs"].get<double>(), 1.0, 1e-5);
    EXPECT_EQ(equation(r.report, "curvature", "K_laplace_vs_intrinsic")["points_skipped"], 4096u);
}

TEST(Run, S3CliffordIsSkippedWithWarning) {
    const RunResult r = run(config("s3-clifford", {"frames"}));
    EXPECT_EQ(r.exit_code, 0);
    const json& s = suite(r.report, "frames");
    EXPECT_EQ(s["status"], "pass_with_warnings");
    EXPECT_EQ(s["skips"]["degenerate_tangent"], 256u);
    ASSERT_FALSE(s["warnings"].empty());
    for (const auto& e : s["equations"]) {
        EXPECT_EQ(e["points_evaluated"], 0u);
        EXPECT_EQ(e["points_skipped"], 256u);
    }
}

TEST(Run, SkipPolicyFail) {
    RunConfig cfg = config("s3-clifford", {"frames"});
    cfg.skip_policy = SkipPolicy::Fail;
    const RunResult r = run(cfg);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(suite(r.report, "frames")["status"], "fail");
}

TEST(Run, NonMinimalProbeFails) {
    const RunResult r = run(config("torus:0.9,0.3,0.316227766016838;1,0;0,1;0,0", {"connection", "locus"}));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_FALSE(r.report["overall_pass"].get<bool>());
    EXPECT_GT(equation(r.report, "connection", "mean_curvature")["max_abs"].get<double>(), 1e-2);
    EXPECT_EQ(suite(r.report, "locus")["skips"]["hypothesis_violated"], 256u);
}

TEST(Run, ToleranceOverride) {
    RunConfig cfg = config("torus:0.9,0.3,0.316227766016838;1,0;0,1;0,0", {"frames"});
    cfg.tolerances["frames"] = 1e-20;
    const RunResult r = run(cfg);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(equation(r.report, "frames", "orthonormality")["tolerance"].get<double>(), 1e-20);
}

TEST(Run, CodazziSkipAccountingOnLegendrianTorus) {
    const RunResult r = run(config("legendrian-clifford", {"codazzi"}));
    EXPECT_EQ(r.exit_code, 0);
    for (const auto& e : suite(r.report, "codazzi")["equations"])
        EXPECT_EQ(e["points_evaluated"].get<std::size_t>() + e["points_skipped"].get<std::size_t>(), 256u);
}

TEST(Run, QuarterContactTorusPassesEverySuite) {
    const RunResult r = run(config(quarter_contact_spec().name(), {"all"}));
    EXPECT_EQ(r.exit_code, 0);
    for (const auto& s : r.report["suites"]) EXPECT_EQ(s["status"], "pass") << s["name"];
    EXPECT_TRUE(r.report["typo_watch"].empty());
    EXPECT_TRUE(suite(r.report, "connection")["diagnostics"]["richardson"]["pass"].get<bool>());
}

TEST(Run, TimingsOnlyOnRequest) {
    RunConfig cfg = config("geodesic-s2", {"frames"});
    EXPECT_FALSE(run(cfg).report["suites"][0].contains("wall_seconds"));
    cfg.timings = true;
    const RunResult r = run(cfg);
    EXPECT_TRUE(r.report["suites"][0].contains("wall_seconds"));
    ASSERT_EQ(r.wall_seconds.size(), 1u);
}

TEST(Run, NonFiniteResidualAborts) {
    ChartSpec chart = chart_by_name("legendrian-clifford");
    const ChartSpec clean = chart;
    chart.analytic_jet = [clean](double u, double v) {
        Jet j = (*clean.analytic_jet)(u, v);
        if (u > 3.0 && u < 3.3) j.xu[0] = std::numeric_limits<double>::quiet_NaN();
        return j;
    };
    RunConfig cfg = config("poisoned", {"frames", "connection"});
    cfg.report_path = scratch("abort.json");
    const RunResult r = run(cfg, chart);
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_TRUE(r.report.contains("aborted"));
    EXPECT_EQ(r.report["suites"].size(), 1u);
    EXPECT_EQ(slurp(*cfg.report_path), dump_report(r.report));
}

TEST(Report, CsvIsAProjectionOfJson) {
    RunConfig cfg = config("legendrian-clifford", {"frames", "connection", "curvature"});
    cfg.report_path = scratch("proj.json");
    cfg.csv_path = scratch("proj.csv");
    const RunResult r = run(cfg);
    const json doc = json::parse(slurp(*cfg.report_path));
    std::istringstream csv(slurp(*cfg.csv_path));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "suite,equation,max_abs,mean_abs,rms,points_evaluated,points_skipped,pass");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        ASSERT_EQ(f.size(), 8u);
        const json& e = equation(doc, f[0], f[1]);
        EXPECT_EQ(f[2], format_double(e["max_abs"].get<double>()));
        EXPECT_EQ(f[3], format_double(e["mean_abs"].get<double>()));
        EXPECT_EQ(f[4], format_double(e["rms"].get<double>()));
        EXPECT_EQ(f[5], std::to_string(e["points_evaluated"].get<std::size_t>()));
        EXPECT_EQ(f[6], std::to_string(e["points_skipped"].get<std::size_t>()));
        EXPECT_EQ(f[7], e["pass"].is_null() ? "info" : (e["pass"].get<bool>() ? "true" : "false"));
        ++rows;
    }
    std::size_t expected = 0;
    for (const auto& s : doc["suites"]) expected += s["equations"].size();
    EXPECT_EQ(rows, expected);
}

TEST(Report, ByteIdenticalAcrossRunsAndWorkers) {
    RunConfig cfg = config("legendrian-clifford", {"all"}, 24);
    const std::string first = dump_report(run(cfg).report);
    EXPECT_EQ(first, dump_report(run(cfg).report));
    cfg.workers = 5;
    const json parallel = run(cfg).report;
    cfg.workers = 1;
    const json serial = run(cfg).report;
    ASSERT_EQ(parallel["suites"].size(), serial["suites"].size());
    for (std::size_t s = 0; s < serial["suites"].size(); ++s)
        for (std::size_t e = 0; e < serial["suites"][s]["equations"].size(); ++e) {
            const json& a = serial["suites"][s]["equations"][e];
            const json& b = parallel["suites"][s]["equations"][e];
            EXPECT_EQ(a["max_abs"], b["max_abs"]);
            EXPECT_LE(std::abs(a["mean_abs"].get<double>() - b["mean_abs"].get<double>()), 1e-15);
        }
    EXPECT_FALSE(serial["config"].contains("workers"));
}

TEST(Report, StatsReduction) {
    const std::vector<std::optional<double>> values{1.0, std::nullopt, -3.0, 2.0};
    const ResidualStats s = reduce_stats("x", values, 2.5);
    EXPECT_EQ(s.points_evaluated, 3u);
    EXPECT_EQ(s.points_skipped, 1u);
    EXPECT_EQ(s.max_abs, 3.0);
    EXPECT_DOUBLE_EQ(s.mean_abs, 2.0);
    EXPECT_DOUBLE_EQ(s.rms, std::sqrt(14.0 / 3.0));
    EXPECT_FALSE(s.pass);
    EXPECT_TRUE(reduce_stats("x", values, 2.5, false).pass);
    const std::vector<std::optional<double>> bad{std::numeric_limits<double>::quiet_NaN()};
    EXPECT_TRUE(reduce_stats("x", bad, 1.0).non_finite);
}

TEST(Report, FormatsSeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(0.0), "0");
}
