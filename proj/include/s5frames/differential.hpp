#pragma once

// Surface gradients along (e1, e2) and the Laplace-Beltrami operator, both
// for pointwise scalar fields (evaluated on a stencil of step h) and for
// fields sampled on a chart grid (stencil step = grid spacing).

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "s5frames/chart.hpp"
#include "s5frames/frame.hpp"

namespace s5frames {

using ScalarField = std::function<double(double, double)>;

/// Coefficients (c1, c2) with e = c1 xu + c2 xv for a tangent vector e.
inline std::array<double, 2> chart_coefficients(const Jet& jet, const ComplexVec3& e) {
    const Metric g = metric_of(jet);
    const auto inv = g.inverse();
    const double pu = real_inner(e, jet.xu), pv = real_inner(e, jet.xv);
    return {inv[0] * pu + inv[1] * pv, inv[1] * pu + inv[2] * pv};
}

struct Gradient {
    double f1 = 0.0, f2 = 0.0; ///< df(e1), df(e2)
    double norm_sq() const { return f1 * f1 + f2 * f2; }
};

/// Combines coordinate partials into frame derivatives.
inline Gradient frame_gradient(const Jet& jet, const ComplexVec3& e1, const ComplexVec3& e2, double fu,
                               double fv) {
    const auto c1 = chart_coefficients(jet, e1);
    const auto c2 = chart_coefficients(jet, e2);
    return {c1[0] * fu + c1[1] * fv, c2[0] * fu + c2[1] * fv};
}

/// Coordinate partials (f_u, f_v) of a pointwise field, 4th-order.
inline std::array<double, 2> coordinate_partials(const ScalarField& f, double u, double v, double h) {
    return {detail::diff1<double>([&](int k) { return f(u + k * h, v); }, h),
            detail::diff1<double>([&](int k) { return f(u, v + k * h); }, h)};
}

/// (f1, f2) = (df(e1), df(e2)) at (u, v) for the chart's adapted tangent
/// frame.
inline Gradient surface_gradient(const ChartSpec& chart, const ScalarField& f, double u, double v,
                                 double h) {
    const Jet jet = evaluate_jet(chart, u, v, h);
    const TangentFrame tf = tangent_frame(jet);
    const auto d = coordinate_partials(f, u, v, h);
    return frame_gradient(jet, tf.e1, tf.e2, d[0], d[1]);
}

namespace detail {

// Divergence-form Laplace-Beltrami with nested 4th-order differences.
// `sample(a, b)` returns f at (u + a h_u, v + b h_v); `metric(a, b)` the
// metric there.
template <class Sample, class MetricAt>
double laplace_beltrami_stencil(Sample&& sample, MetricAt&& metric, double hu, double hv) {
    auto flux = [&](int a, int b, int axis) {
        const double fu = diff1<double>([&](int k) { return sample(a + k, b); }, hu);
        const double fv = diff1<double>([&](int k) { return sample(a, b + k); }, hv);
        const Metric g = metric(a, b);
        const auto inv = g.inverse();
        const double s = g.sqrt_det();
        return axis == 0 ? s * (inv[0] * fu + inv[1] * fv) : s * (inv[1] * fu + inv[2] * fv);
    };
    const double div_u = diff1<double>([&](int k) { return flux(k, 0, 0); }, hu);
    const double div_v = diff1<double>([&](int k) { return flux(0, k, 1); }, hv);
    return (div_u + div_v) / metric(0, 0).sqrt_det();
}

} // namespace detail

/// Laplace-Beltrami of a pointwise field at (u, v), stencil step h.
inline double laplace_beltrami(const ChartSpec& chart, const ScalarField& f, double u, double v,
                               double h) {
    return detail::laplace_beltrami_stencil(
        [&](int a, int b) { return f(u + a * h, v + b * h); },
        [&](int a, int b) { return metric_of(evaluate_jet(chart, u + a * h, v + b * h, h)); }, h, h);
}

/// Scalar values on the nodes of a Grid.
struct GridField {
    Grid grid;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const Grid& g) : grid(g), values(g.size(), 0.0) {}

    double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
    double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
};

inline GridField sample_field(const Grid& grid, const ScalarField& f) {
    GridField out(grid);
    for (std::size_t j = 0; j < grid.nv; ++j)
        for (std::size_t i = 0; i < grid.nu; ++i) out.at(i, j) = f(grid.u(i), grid.v(j));
    return out;
}

/// Metric of the chart at every grid node.
inline std::vector<Metric> sample_metric(const ChartSpec& chart, const Grid& grid, double h = 1e-3) {
    std::vector<Metric> out(grid.size());
    for (std::size_t j = 0; j < grid.nv; ++j)
        for (std::size_t i = 0; i < grid.nu; ++i)
            out[grid.index(i, j)] = metric_of(evaluate_jet(chart, grid.u(i), grid.v(j), h));
    return out;
}

namespace detail {

inline std::size_t grid_offset(std::size_t i, int k, std::size_t n, bool periodic) {
    const auto m = static_cast<long long>(n);
    long long t = static_cast<long long>(i) + k;
    if (periodic) {
        t %= m;
        if (t < 0) t += m;
    } else if (t < 0 || t >= m) {
        throw GeometryError(ErrorKind::BoundaryTooClose, "grid stencil leaves a bounded direction");
    }
    return static_cast<std::size_t>(t);
}

} // namespace detail

/// Frame gradient of a grid field at node (i, j), 4th-order differences
/// with the grid spacing.
inline Gradient surface_gradient(const ChartSpec& chart, const GridField& f, std::size_t i, std::size_t j,
                                 double h_jet = 1e-3) {
    const Grid& g = f.grid;
    auto at = [&](int a, int b) {
        return f.at(detail::grid_offset(i, a, g.nu, g.periodic_u), detail::grid_offset(j, b, g.nv, g.periodic_v));
    };
    const double fu = detail::diff1<double>([&](int k) { return at(k, 0); }, g.du());
    const double fv = detail::diff1<double>([&](int k) { return at(0, k); }, g.dv());
    const Jet jet = evaluate_jet(chart, g.u(i), g.v(j), h_jet);
    const TangentFrame tf = tangent_frame(jet);
    return frame_gradient(jet, tf.e1, tf.e2, fu, fv);
}

/// Laplace-Beltrami of a grid field at node (i, j) with nested grid
/// differences. `metric` holds the metric at every node (see sample_metric).
inline double laplace_beltrami(const GridField& f, const std::vector<Metric>& metric, std::size_t i,
                               std::size_t j) {
    const Grid& g = f.grid;
    auto idx = [&](int a, int b) {
        return g.index(detail::grid_offset(i, a, g.nu, g.periodic_u), detail::grid_offset(j, b, g.nv, g.periodic_v));
    };
    return detail::laplace_beltrami_stencil([&](int a, int b) { return f.values[idx(a, b)]; },
                                            [&](int a, int b) { return metric[idx(a, b)]; }, g.du(), g.dv());
}

} // namespace s5frames
