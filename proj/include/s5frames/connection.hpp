#pragma once

// Connection forms of the adapted frame, De_j = theta_j^k e_k, measured by
// differentiating the frame field through chart coordinates.

#include <array>
#include <cmath>

#include "s5frames/chart.hpp"
#include "s5frames/differential.hpp"
#include "s5frames/frame.hpp"

namespace s5frames {

/// theta_j^k(e_i) for j, k in 1..5 and i in 1..2, plus the second
/// fundamental form coefficients (theta_1^3 = a theta^1 + b theta^2) and the
/// angle derivatives along e1, e2.
struct ConnectionTable {
    std::array<std::array<std::array<double, 2>, 5>, 5> theta{};
    double a = 0.0, b = 0.0;
    double alpha = 0.0, beta = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0, beta1 = 0.0, beta2 = 0.0;

    /// theta_j^k(e_i), 1-based indices.
    double operator()(int j, int k, int i) const { return theta[j - 1][k - 1][i - 1]; }
    double& operator()(int j, int k, int i) { return theta[j - 1][k - 1][i - 1]; }
    /// The form theta_j^k as its values on (e1, e2).
    std::array<double, 2> form(int j, int k) const { return theta[j - 1][k - 1]; }

    double max_antisymmetry() const {
        double m = 0.0;
        for (int j = 1; j <= 5; ++j)
            for (int k = j; k <= 5; ++k)
                for (int i = 1; i <= 2; ++i) m = std::max(m, std::abs((*this)(j, k, i) + (*this)(k, j, i)));
        return m;
    }
};

namespace detail {

struct StencilFrames {
    FramePoint center;
    Jet jet;
    std::array<FramePoint, 4> along_u, along_v; // offsets -2, -1, +1, +2
};

inline constexpr std::array<int, 4> kStencilOffsets{-2, -1, 1, 2};

inline int stencil_slot(int k) { return k < 0 ? k + 2 : k + 1; }

inline StencilFrames stencil_frames(const ChartSpec& chart, double u, double v, double h) {
    StencilFrames s;
    s.jet = evaluate_jet(chart, u, v, h);
    s.center = build_frame(s.jet);
    for (int k : kStencilOffsets) {
        s.along_u[stencil_slot(k)] = build_frame(chart, u + k * h, v, h);
        s.along_v[stencil_slot(k)] = build_frame(chart, u, v + k * h, h);
    }
    for (const auto* side : {&s.along_u, &s.along_v})
        for (const FramePoint& f : *side)
            for (int j = 1; j <= 5; ++j)
                if (real_inner(f.e(j), s.center.e(j)) < 0.0)
                    throw GeometryError(ErrorKind::FrameDiscontinuity,
                                        "e" + std::to_string(j) + " flips sign inside the stencil");
    return s;
}

} // namespace detail

/// Connection forms at (u, v) with frame-field derivatives taken by 4th-order
/// central differences of step h. Inner products against e_k discard the
/// radial component, which realizes the S^5 derivative D.
inline ConnectionTable connection_forms(const ChartSpec& chart, double u, double v, double h) {
    const detail::StencilFrames s = detail::stencil_frames(chart, u, v, h);
    const FramePoint& f0 = s.center;
    const auto c1 = chart_coefficients(s.jet, f0.e1);
    const auto c2 = chart_coefficients(s.jet, f0.e2);

    ConnectionTable t;
    for (int j = 1; j <= 5; ++j) {
        auto frame_u = [&](int k) { return k == 0 ? f0.e(j) : s.along_u[detail::stencil_slot(k)].e(j); };
        auto frame_v = [&](int k) { return k == 0 ? f0.e(j) : s.along_v[detail::stencil_slot(k)].e(j); };
        const ComplexVec3 du = detail::diff1<ComplexVec3>(frame_u, h);
        const ComplexVec3 dv = detail::diff1<ComplexVec3>(frame_v, h);
        const ComplexVec3 d1 = c1[0] * du + c1[1] * dv;
        const ComplexVec3 d2 = c2[0] * du + c2[1] * dv;
        for (int k = 1; k <= 5; ++k) {
            t(j, k, 1) = real_inner(d1, f0.e(k));
            t(j, k, 2) = real_inner(d2, f0.e(k));
        }
    }
    t.a = t(1, 3, 1);
    t.b = t(1, 3, 2);
    t.alpha = f0.alpha;
    t.beta = f0.beta;

    auto angle_partial = [&](const std::array<FramePoint, 4>& side, auto pick) {
        return detail::diff1<double>([&](int k) { return pick(side[detail::stencil_slot(k)]); }, h);
    };
    const auto alpha_of = [](const FramePoint& f) { return f.alpha; };
    const auto beta_of = [](const FramePoint& f) { return f.beta; };
    const Gradient ga = frame_gradient(s.jet, f0.e1, f0.e2, angle_partial(s.along_u, alpha_of),
                                       angle_partial(s.along_v, alpha_of));
    const Gradient gb = frame_gradient(s.jet, f0.e1, f0.e2, angle_partial(s.along_u, beta_of),
                                       angle_partial(s.along_v, beta_of));
    t.alpha1 = ga.f1;
    t.alpha2 = ga.f2;
    t.beta1 = gb.f1;
    t.beta2 = gb.f2;
    return t;
}

struct MinimalityResidual {
    double mean_curvature = 0.0; ///< |sum_j (theta_1^j(e1) + theta_2^j(e2)) e_j|, j = 3..5
    double symmetry = 0.0;       ///< max_j |theta_1^j(e2) - theta_2^j(e1)|
};

inline MinimalityResidual minimality_residual(const ConnectionTable& t) {
    MinimalityResidual r;
    double sq = 0.0;
    for (int j = 3; j <= 5; ++j) {
        const double trace = t(1, j, 1) + t(2, j, 2);
        sq += trace * trace;
        r.symmetry = std::max(r.symmetry, std::abs(t(1, j, 2) - t(2, j, 1)));
    }
    r.mean_curvature = std::sqrt(sq);
    return r;
}

/// Ratio err(h_coarse) / err(h_coarse / 2) of the measured connection table
/// against a reference computed at h_ref. Close to 16 for the 4th-order
/// stencil while truncation error dominates.
struct RichardsonCheck {
    double error_coarse = 0.0, error_fine = 0.0, ratio = 0.0;
};

inline RichardsonCheck connection_richardson(const ChartSpec& chart, double u, double v, double h_coarse,
                                             double h_ref = 1e-3) {
    const ConnectionTable ref = connection_forms(chart, u, v, h_ref);
    auto error_at = [&](double h) {
        const ConnectionTable t = connection_forms(chart, u, v, h);
        double m = 0.0;
        for (int j = 1; j <= 5; ++j)
            for (int k = 1; k <= 5; ++k)
                for (int i = 1; i <= 2; ++i) m = std::max(m, std::abs(t(j, k, i) - ref(j, k, i)));
        return m;
    };
    RichardsonCheck r;
    r.error_coarse = error_at(h_coarse);
    r.error_fine = error_at(0.5 * h_coarse);
    r.ratio = r.error_fine > 0.0 ? r.error_coarse / r.error_fine : std::numeric_limits<double>::infinity();
    return r;
}

} // namespace s5frames
