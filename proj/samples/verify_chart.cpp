// Runs every suite on a chart and prints a one-line summary per suite.
//   verify_chart [chart-name-or-file] [grid]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "s5frames/runner.hpp"

using namespace s5frames;

int main(int argc, char** argv) {
    RunConfig cfg;
    cfg.chart = argc > 1 ? argv[1] : "legendrian-clifford";
    if (argc > 2) cfg.grid_nu = cfg.grid_nv = static_cast<std::size_t>(std::atoi(argv[2]));
    cfg.workers = 4;
    try {
        const RunResult r = run(cfg);
        for (const auto& s : r.report["suites"]) {
            std::size_t evaluated = 0, skipped = 0;
            double worst = 0.0;
            for (const auto& e : s["equations"]) {
                evaluated += e["points_evaluated"].get<std::size_t>();
                skipped += e["points_skipped"].get<std::size_t>();
                if (e["gating"].get<bool>()) worst = std::max(worst, e["max_abs"].get<double>());
            }
            std::printf("%-11s %-18s worst %.3e  evaluated %zu  skipped %zu\n",
                        s["name"].get<std::string>().c_str(), s["status"].get<std::string>().c_str(), worst,
                        evaluated, skipped);
        }
        return r.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
}
