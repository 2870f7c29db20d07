#pragma once

// Parametrized patches of S^5 and their jets.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "s5frames/ambient.hpp"
#include "s5frames/errors.hpp"

namespace s5frames {

/// Position and partials of the immersion at one parameter point, per unit
/// parameter.
struct Jet {
    SpherePoint x;
    ComplexVec3 xu, xv;
    ComplexVec3 xuu, xuv, xvv;
};

/// First fundamental form in chart coordinates.
struct Metric {
    double E = 0.0, F = 0.0, G = 0.0;

    double det() const { return E * G - F * F; }
    double sqrt_det() const { return std::sqrt(det()); }
    /// Inverse metric (g^11, g^12, g^22).
    std::array<double, 3> inverse() const {
        const double d = det();
        return {G / d, -F / d, E / d};
    }
};

inline Metric metric_of(const Jet& jet) {
    return {real_inner(jet.xu, jet.xu), real_inner(jet.xu, jet.xv), real_inner(jet.xv, jet.xv)};
}

struct Interval {
    double lo = 0.0, hi = 2.0 * std::numbers::pi;
    double length() const { return hi - lo; }
};

using Immersion = std::function<ComplexVec3(double, double)>;
using AnalyticJet = std::function<Jet(double, double)>;

struct ChartSpec {
    std::string name;
    Immersion immersion;
    Interval u_range, v_range;
    bool periodic_u = true;
    bool periodic_v = true;
    std::optional<AnalyticJet> analytic_jet;
};

namespace detail {

inline double wrap(double t, const Interval& r) {
    const double L = r.length();
    double s = std::fmod(t - r.lo, L);
    if (s < 0.0) s += L;
    return r.lo + s;
}

// 4th-order central first and second differences along one direction.
template <class T, class F> T diff1(F&& f, double h) {
    return (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) * (1.0 / (12.0 * h));
}
template <class T, class F> T diff2(F&& f, double h) {
    return (-1.0 * f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) *
           (1.0 / (12.0 * h * h));
}

} // namespace detail

/// Maps (u, v) into the chart domain, wrapping periodic directions. Throws
/// BoundaryTooClose when a non-periodic coordinate lies within `margin` of
/// the domain edge.
inline std::pair<double, double> chart_coordinates(const ChartSpec& chart, double u, double v,
                                                   double margin) {
    auto fix = [margin](double t, const Interval& r, bool periodic, const char* axis) {
        if (periodic) return detail::wrap(t, r);
        if (t < r.lo + margin || t > r.hi - margin)
            throw GeometryError(ErrorKind::BoundaryTooClose,
                                std::string(axis) + " = " + std::to_string(t) +
                                    " within stencil reach of the boundary");
        return t;
    };
    return {fix(u, chart.u_range, chart.periodic_u, "u"), fix(v, chart.v_range, chart.periodic_v, "v")};
}

/// Jet from 4th-order central differences of the immersion with step h.
inline Jet finite_difference_jet(const Immersion& f, double u, double v, double h) {
    Jet jet;
    const ComplexVec3 x0 = f(u, v);
    jet.x = SpherePoint(x0);
    auto along_u = [&](int k) { return k == 0 ? x0 : f(u + k * h, v); };
    auto along_v = [&](int k) { return k == 0 ? x0 : f(u, v + k * h); };
    jet.xu = detail::diff1<ComplexVec3>(along_u, h);
    jet.xv = detail::diff1<ComplexVec3>(along_v, h);
    jet.xuu = detail::diff2<ComplexVec3>(along_u, h);
    jet.xvv = detail::diff2<ComplexVec3>(along_v, h);
    jet.xuv = detail::diff1<ComplexVec3>(
        [&](int a) {
            return detail::diff1<ComplexVec3>([&](int b) { return f(u + a * h, v + b * h); }, h);
        },
        h);
    return jet;
}

/// Analytic jet when the chart has one, otherwise finite differences.
/// Non-periodic directions require the point to sit at least 2h inside the
/// domain.
inline Jet evaluate_jet(const ChartSpec& chart, double u, double v, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("evaluate_jet: step must be positive");
    const auto [uu, vv] = chart_coordinates(chart, u, v, 2.0 * h);
    if (chart.analytic_jet) {
        Jet jet = (*chart.analytic_jet)(uu, vv);
        jet.x = SpherePoint(jet.x.z());
        return jet;
    }
    return finite_difference_jet(chart.immersion, uu, vv, h);
}

/// Sample points of a chart. Periodic directions use n equispaced nodes
/// without the closing endpoint; bounded directions use cell centres.
struct Grid {
    std::size_t nu = 0, nv = 0;
    Interval u_range, v_range;
    bool periodic_u = true, periodic_v = true;

    Grid() = default;
    Grid(const ChartSpec& chart, std::size_t n_u, std::size_t n_v)
        : nu(n_u), nv(n_v), u_range(chart.u_range), v_range(chart.v_range),
          periodic_u(chart.periodic_u), periodic_v(chart.periodic_v) {}

    std::size_t size() const { return nu * nv; }
    double du() const { return u_range.length() / static_cast<double>(nu); }
    double dv() const { return v_range.length() / static_cast<double>(nv); }
    double u(std::size_t i) const {
        return u_range.lo + (static_cast<double>(i) + (periodic_u ? 0.0 : 0.5)) * du();
    }
    double v(std::size_t j) const {
        return v_range.lo + (static_cast<double>(j) + (periodic_v ? 0.0 : 0.5)) * dv();
    }
    /// Row-major flat index, u fastest.
    std::size_t index(std::size_t i, std::size_t j) const { return j * nu + i; }
};

/// Checks |x| = 1 over a probe grid and, when an analytic jet is attached,
/// that its first partials match 4th-order differences of the immersion.
/// Throws InvalidChart on failure.
inline void validate_chart(const ChartSpec& chart, std::size_t probes = 5, double h = 1e-3,
                           double jet_tol = 1e-6) {
    if (!chart.immersion) throw GeometryError(ErrorKind::InvalidChart, chart.name + ": no immersion");
    const Grid grid(chart, probes, probes);
    for (std::size_t j = 0; j < probes; ++j) {
        for (std::size_t i = 0; i < probes; ++i) {
            const double u = grid.u(i), v = grid.v(j);
            const ComplexVec3 x = chart.immersion(u, v);
            if (std::abs(norm(x) - 1.0) > 1e-10)
                throw GeometryError(ErrorKind::InvalidChart, chart.name + ": immersion leaves the unit sphere");
            if (!chart.analytic_jet) continue;
            if (!chart.periodic_u && (u < chart.u_range.lo + 2 * h || u > chart.u_range.hi - 2 * h)) continue;
            if (!chart.periodic_v && (v < chart.v_range.lo + 2 * h || v > chart.v_range.hi - 2 * h)) continue;
            const Jet exact = (*chart.analytic_jet)(u, v);
            const Jet fd = finite_difference_jet(chart.immersion, u, v, h);
            if (norm(exact.xu - fd.xu) > jet_tol || norm(exact.xv - fd.xv) > jet_tol)
                throw GeometryError(ErrorKind::InvalidChart,
                                    chart.name + ": analytic jet disagrees with the immersion");
        }
    }
}

} // namespace s5frames
