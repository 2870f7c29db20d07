#pragma once

// Assembly of per-point data for the structure equations, and the intrinsic
// (metric-only) Gaussian curvature used as the arbiter for the curvature
// formulas.

#include <array>
#include <cmath>

#include "s5frames/connection.hpp"
#include "s5frames/differential.hpp"
#include "s5frames/equations.hpp"

namespace s5frames {

/// Brioschi formula with 4th-order central differences of E, F, G.
inline double gauss_curvature_intrinsic(const ChartSpec& chart, double u, double v, double h) {
    auto at = [&](int a, int b) { return metric_of(evaluate_jet(chart, u + a * h, v + b * h, h)); };
    const Metric m = at(0, 0);
    auto along_u = [&](double Metric::*c) { return [&, c](int a) { return at(a, 0).*c; }; };
    auto along_v = [&](double Metric::*c) { return [&, c](int b) { return at(0, b).*c; }; };

    const double Eu = detail::diff1<double>(along_u(&Metric::E), h), Ev = detail::diff1<double>(along_v(&Metric::E), h);
    const double Fu = detail::diff1<double>(along_u(&Metric::F), h), Fv = detail::diff1<double>(along_v(&Metric::F), h);
    const double Gu = detail::diff1<double>(along_u(&Metric::G), h), Gv = detail::diff1<double>(along_v(&Metric::G), h);
    const double Evv = detail::diff2<double>(along_v(&Metric::E), h);
    const double Guu = detail::diff2<double>(along_u(&Metric::G), h);
    const double Fuv = detail::diff1<double>(
        [&](int a) { return detail::diff1<double>([&](int b) { return at(a, b).F; }, h); }, h);

    auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23, double a31, double a32,
                   double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) + a13 * (a21 * a32 - a22 * a31);
    };
    const double d1 = det3(-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev, Fv - 0.5 * Gu, m.E, m.F, 0.5 * Gv,
                           m.F, m.G);
    const double d2 = det3(0.0, 0.5 * Ev, 0.5 * Gu, 0.5 * Ev, m.E, m.F, 0.5 * Gu, m.F, m.G);
    const double det = m.det();
    return (d1 - d2) / (det * det);
}

/// Which derivative-heavy fields point_data should fill in.
struct PointRequest {
    bool ab_gradient = false; ///< a1, a2, b1, b2
    bool lap_alpha = false;
    bool lap_beta = false;
};

/// Connection table, angle derivatives and the requested second-order
/// quantities at (u, v). All differentiation uses stencils of step h.
inline PointData point_data(const ChartSpec& chart, double u, double v, double h, PointRequest req = {}) {
    PointData p = PointData::from_table(connection_forms(chart, u, v, h));
    if (req.ab_gradient) {
        std::array<double, 4> au{}, av{}, bu{}, bv{};
        for (int k : detail::kStencilOffsets) {
            const ConnectionTable tu = connection_forms(chart, u + k * h, v, h);
            const ConnectionTable tv = connection_forms(chart, u, v + k * h, h);
            const int s = detail::stencil_slot(k);
            au[s] = tu.a;
            bu[s] = tu.b;
            av[s] = tv.a;
            bv[s] = tv.b;
        }
        auto d = [h](const std::array<double, 4>& vals) {
            return detail::diff1<double>([&](int k) { return vals[detail::stencil_slot(k)]; }, h);
        };
        const Jet jet = evaluate_jet(chart, u, v, h);
        const TangentFrame tf = tangent_frame(jet);
        const Gradient ga = frame_gradient(jet, tf.e1, tf.e2, d(au), d(av));
        const Gradient gb = frame_gradient(jet, tf.e1, tf.e2, d(bu), d(bv));
        p.a1 = ga.f1;
        p.a2 = ga.f2;
        p.b1 = gb.f1;
        p.b2 = gb.f2;
    }
    if (req.lap_alpha || req.lap_beta) {
        const ScalarField alpha = [&](double s, double t) { return build_frame(chart, s, t, h).alpha; };
        const ScalarField beta = [&](double s, double t) { return build_frame(chart, s, t, h).beta; };
        if (req.lap_alpha) p.lap_alpha = laplace_beltrami(chart, alpha, u, v, h);
        if (req.lap_beta) p.lap_beta = laplace_beltrami(chart, beta, u, v, h);
    }
    return p;
}

/// Gaussian curvature by three routes plus the Laplacians and gradient norms
/// of the angles.
struct CurvaturePoint {
    double K_intrinsic = 0.0;
    std::optional<double> K_eq11, K_eq13;
    double lap_beta = 0.0, lap_alpha = 0.0;
    double grad_beta_sq = 0.0, grad_alpha_sq = 0.0;
};

inline CurvaturePoint curvature_point(const ChartSpec& chart, double u, double v, double h) {
    const PointData p = point_data(chart, u, v, h, {.lap_alpha = true, .lap_beta = true});
    CurvaturePoint c;
    c.K_intrinsic = gauss_curvature_intrinsic(chart, u, v, h);
    c.K_eq11 = gauss_curvature_eq11(p);
    c.K_eq13 = gauss_curvature_eq13(p);
    c.lap_beta = *p.lap_beta;
    c.lap_alpha = *p.lap_alpha;
    c.grad_beta_sq = p.grad_beta_sq();
    c.grad_alpha_sq = p.grad_alpha_sq();
    return c;
}

} // namespace s5frames
