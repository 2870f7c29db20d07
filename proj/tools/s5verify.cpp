#include <cstdio>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "s5frames/runner.hpp"

namespace {

s5frames::RunConfig parse(int argc, char** argv) {
    s5frames::RunConfig cfg;
    CLI::App app{"Numerical verification of the moving-frame structure equations for surfaces in S^5"};
    app.set_help_flag("--help", "print this help and exit");
    std::string grid = "64x64", suites = "all", skip_policy = "warn", report, csv;
    std::vector<std::string> tols;
    app.add_option("--chart", cfg.chart, "catalog name or JSON chart spec path")->required();
    app.add_option("--grid", grid, "grid size NxM (each at least 8)");
    app.add_option("--h", cfg.h, "finite-difference step");
    app.add_option("--suite", suites, "comma-separated suites or 'all'");
    app.add_option("--tol", tols, "suite=value tolerance override (repeatable)");
    app.add_option("--report", report, "JSON report path");
    app.add_option("--csv", csv, "CSV report path");
    app.add_option("--skip-policy", skip_policy, "warn or fail")->check(CLI::IsMember({"warn", "fail"}));
    app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_flag("--timings", cfg.timings, "include wall-clock seconds in the JSON report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::exit(app.exit(e));
    } catch (const CLI::ParseError& e) {
        throw s5frames::ConfigError(e.what());
    }

    std::smatch m;
    if (!std::regex_match(grid, m, std::regex(R"((\d+)[xX](\d+))")))
        throw s5frames::ConfigError("--grid expects NxM, got '" + grid + "'");
    cfg.grid_nu = std::stoul(m[1]);
    cfg.grid_nv = std::stoul(m[2]);

    cfg.suites.clear();
    std::stringstream ss(suites);
    for (std::string s; std::getline(ss, s, ',');)
        if (!s.empty()) cfg.suites.push_back(s);

    for (const auto& t : tols) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw s5frames::ConfigError("--tol expects suite=value, got '" + t + "'");
        try {
            std::size_t used = 0;
            const std::string value = t.substr(eq + 1);
            cfg.tolerances[t.substr(0, eq)] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            throw s5frames::ConfigError("bad tolerance value in '" + t + "'");
        }
    }
    cfg.skip_policy = skip_policy == "fail" ? s5frames::SkipPolicy::Fail : s5frames::SkipPolicy::Warn;
    if (!report.empty()) cfg.report_path = report;
    if (!csv.empty()) cfg.csv_path = csv;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    try {
        const s5frames::RunConfig cfg = parse(argc, argv);
        const s5frames::RunResult result = s5frames::run(cfg);
        std::size_t k = 0;
        for (const auto& suite : result.report["suites"]) {
            std::cerr << suite["name"].get<std::string>() << ": " << suite["status"].get<std::string>() << " ("
                      << result.wall_seconds.at(k++).second << " s)\n";
        }
        if (!cfg.report_path) std::cout << s5frames::dump_report(result.report);
        return result.exit_code;
    } catch (const s5frames::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const s5frames::ChartSpecError& e) {
        std::cerr << "chart spec error: " << e.what() << '\n';
        return 2;
    }
}
