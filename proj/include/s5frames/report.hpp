#pragma once

// Residual statistics and the deterministic JSON / CSV report writers.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "s5frames/parallel.hpp"

namespace s5frames {

struct ResidualStats {
    std::string equation;
    double max_abs = 0.0, mean_abs = 0.0, rms = 0.0;
    std::size_t points_evaluated = 0, points_skipped = 0;
    double tolerance = 0.0;
    bool gating = true; ///< informational entries never fail a suite
    bool pass = true;
    bool non_finite = false;
};

/// Reduces per-point values (nullopt = skipped) in index order, so the
/// result does not depend on how the values were produced.
inline ResidualStats reduce_stats(std::string equation, std::span<const std::optional<double>> values,
                                  double tolerance, bool gating = true) {
    ResidualStats s;
    s.equation = std::move(equation);
    s.tolerance = tolerance;
    s.gating = gating;
    CompensatedSum abs_sum, sq_sum;
    for (const auto& v : values) {
        if (!v) {
            ++s.points_skipped;
            continue;
        }
        if (!std::isfinite(*v)) {
            s.non_finite = true;
            ++s.points_evaluated;
            continue;
        }
        const double a = std::abs(*v);
        ++s.points_evaluated;
        s.max_abs = std::max(s.max_abs, a);
        abs_sum.add(a);
        sq_sum.add(a * a);
    }
    if (s.points_evaluated > 0) {
        const double n = static_cast<double>(s.points_evaluated);
        s.mean_abs = abs_sum.value() / n;
        s.rms = std::sqrt(sq_sum.value() / n);
    }
    s.pass = !gating || (!s.non_finite && s.max_abs <= tolerance);
    return s;
}

inline nlohmann::json to_json(const ResidualStats& s) {
    nlohmann::json j;
    j["equation"] = s.equation;
    j["max_abs"] = s.max_abs;
    j["mean_abs"] = s.mean_abs;
    j["rms"] = s.rms;
    j["points_evaluated"] = s.points_evaluated;
    j["points_skipped"] = s.points_skipped;
    j["gating"] = s.gating;
    if (s.gating) {
        j["tolerance"] = s.tolerance;
        j["pass"] = s.pass;
    } else {
        j["pass"] = nullptr;
    }
    return j;
}

/// Shortest-free fixed format: 17 significant digits.
inline std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const nlohmann::json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) { // keys are sorted
            if (!first) os << ",\n";
            first = false;
            os << pad << nlohmann::json(it.key()).dump() << ": ";
            write_json(os, it.value(), depth + 1);
        }
        os << '\n' << close << '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) os << ",\n";
            os << pad;
            write_json(os, j[k], depth + 1);
        }
        os << '\n' << close << ']';
        return;
    }
    case nlohmann::json::value_t::number_float:
        os << format_double(j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

} // namespace detail

/// Pretty-printed JSON with sorted keys and every float written with 17
/// significant digits.
inline std::string dump_report(const nlohmann::json& j) {
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << '\n';
    return os.str();
}

inline constexpr const char* kCsvHeader = "suite,equation,max_abs,mean_abs,rms,points_evaluated,points_skipped,pass";

/// One row per equation of every suite in the report.
inline std::string report_csv(const nlohmann::json& report) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    if (!report.contains("suites")) return os.str();
    for (const auto& suite : report["suites"]) {
        for (const auto& eq : suite["equations"]) {
            const auto& pass = eq["pass"];
            os << suite["name"].get<std::string>() << ',' << eq["equation"].get<std::string>() << ','
               << format_double(eq["max_abs"].get<double>()) << ',' << format_double(eq["mean_abs"].get<double>())
               << ',' << format_double(eq["rms"].get<double>()) << ',' << eq["points_evaluated"].get<std::size_t>()
               << ',' << eq["points_skipped"].get<std::size_t>() << ','
               << (pass.is_null() ? "info" : (pass.get<bool>() ? "true" : "false")) << '\n';
        }
    }
    return os.str();
}

} // namespace s5frames
