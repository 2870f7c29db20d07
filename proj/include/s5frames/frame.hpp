#pragma once

// The adapted frame (e1..e5) of a surface in S^5 together with the contact
// angle beta and the holomorphic angle alpha.
//
// Sign conventions: e1 spans TS ∩ Δ; cos beta = <xi, e2> >= 0; (e1, e2) is
// positively oriented relative to (xu, xv). On Legendrian points (TS ⊂ Δ)
// e1 = xu / |xu|.

#include <array>
#include <cmath>

#include "s5frames/ambient.hpp"
#include "s5frames/chart.hpp"
#include "s5frames/errors.hpp"

namespace s5frames {

/// Below this, sin(beta) or sin(alpha) is treated as zero and the adapted
/// frame does not exist.
inline constexpr double kAngleFloor = 1e-6;
/// |<xu, xi>| and |<xv, xi>| both below this select the Legendrian branch.
inline constexpr double kLegendrianTol = 1e-10;

struct TangentFrame {
    ComplexVec3 e1, e2;
    int orientation = 1; ///< sign that was applied to reach (xu, xv) orientation
    bool legendrian = false;
};

struct FramePoint {
    SpherePoint x;
    ComplexVec3 e1, e2, e3, e4, e5;
    ComplexVec3 xi, v;
    double beta = 0.0, alpha = 0.0;
    bool legendrian = false;

    /// e_k with the 1-based numbering used for the connection forms.
    const ComplexVec3& e(int k) const {
        switch (k) {
        case 1: return e1;
        case 2: return e2;
        case 3: return e3;
        case 4: return e4;
        default: return e5;
        }
    }
};

/// Orthonormal tangent frame with e1 in the contact plane.
inline TangentFrame tangent_frame(const Jet& jet) {
    const Metric g = metric_of(jet);
    if (g.det() <= 1e-14)
        throw GeometryError(ErrorKind::DegenerateTangent, "metric determinant vanishes");

    const ComplexVec3 xi = reeb(jet.x);
    const double pu = real_inner(jet.xu, xi);
    const double pv = real_inner(jet.xv, xi);

    TangentFrame tf;
    tf.legendrian = std::abs(pu) < kLegendrianTol && std::abs(pv) < kLegendrianTol;
    const ComplexVec3 raw = tf.legendrian ? jet.xu : pv * jet.xu - pu * jet.xv;
    const double raw_norm = norm(raw);
    if (raw_norm < 1e-12)
        throw GeometryError(ErrorKind::DegenerateTangent, "no tangent direction orthogonal to xi");
    tf.e1 = raw / raw_norm;

    // Complete to an orthonormal tangent basis from the better-conditioned
    // coordinate vector.
    const ComplexVec3 wu = jet.xu - real_inner(jet.xu, tf.e1) * tf.e1;
    const ComplexVec3 wv = jet.xv - real_inner(jet.xv, tf.e1) * tf.e1;
    tf.e2 = norm(wv) >= norm(wu) ? normalized(wv) : normalized(wu);

    if (!tf.legendrian && real_inner(xi, tf.e2) < 0.0) tf.e2 = -tf.e2;

    const double orient = real_inner(tf.e1, jet.xu) * real_inner(tf.e2, jet.xv) -
                          real_inner(tf.e1, jet.xv) * real_inner(tf.e2, jet.xu);
    if (orient < 0.0) {
        tf.orientation = -1;
        if (tf.legendrian)
            tf.e2 = -tf.e2;
        else
            tf.e1 = -tf.e1;
    }

    // xi inside TS: e2 = ±xi and the contact angle is 0 or pi.
    const double cb = real_inner(xi, tf.e2);
    const double sb = norm(tf.e2 - cb * xi);
    if (sb < kAngleFloor)
        throw GeometryError(ErrorKind::DegenerateTangent,
                            "Reeb field tangent to the surface (beta = " +
                                std::to_string(std::atan2(sb, cb)) + ")");
    return tf;
}

/// Contact angle, cos beta = <xi, e2>, in [0, pi/2].
inline double contact_angle(const SpherePoint& x, const TangentFrame& tf) {
    const ComplexVec3 xi = reeb(x);
    const double cb = real_inner(xi, tf.e2);
    return std::atan2(norm(tf.e2 - cb * xi), cb);
}

/// Unit contact vector v with e2 = sin(beta) v + cos(beta) xi.
inline ComplexVec3 v_field(const SpherePoint& x, const TangentFrame& tf) {
    const ComplexVec3 xi = reeb(x);
    const double cb = real_inner(xi, tf.e2);
    const ComplexVec3 w = tf.e2 - cb * xi;
    const double sb = norm(w);
    if (sb < kAngleFloor) throw DegenerateAngleError(Angle::Beta, std::atan2(sb, cb));
    return w / sb;
}

/// Holomorphic angle, cos alpha = <i e1, v>, in [0, pi].
inline double holomorphic_angle(const TangentFrame& tf, const ComplexVec3& v) {
    const ComplexVec3 ie1 = j_multiply(tf.e1);
    const double ca = real_inner(ie1, v);
    return std::atan2(norm(ie1 - ca * v), ca);
}

struct NormalFrame {
    ComplexVec3 e3, e4, e5;
};

/// Normal vectors
///   e3 = i csc(a) e1 - cot(a) v,  e4 = cot(a) e1 + i csc(a) v,
///   e5 = csc(b) xi - cot(b) e2.
inline NormalFrame adapted_frame(const SpherePoint& x, const TangentFrame& tf, const ComplexVec3& v,
                                 double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    if (sb < kAngleFloor) throw DegenerateAngleError(Angle::Beta, beta);
    if (sa < kAngleFloor) throw DegenerateAngleError(Angle::Alpha, alpha);
    const ComplexVec3 xi = reeb(x);
    NormalFrame n;
    n.e3 = (1.0 / sa) * j_multiply(tf.e1) - (ca / sa) * v;
    n.e4 = (ca / sa) * tf.e1 + (1.0 / sa) * j_multiply(v);
    n.e5 = (1.0 / sb) * xi - (cb / sb) * tf.e2;
    return n;
}

/// Full adapted frame at a jet.
inline FramePoint build_frame(const Jet& jet) {
    const TangentFrame tf = tangent_frame(jet);
    FramePoint f;
    f.x = jet.x;
    f.xi = reeb(jet.x);
    f.e1 = tf.e1;
    f.e2 = tf.e2;
    f.legendrian = tf.legendrian;
    f.beta = contact_angle(jet.x, tf);
    f.v = v_field(jet.x, tf);
    f.alpha = holomorphic_angle(tf, f.v);
    const NormalFrame n = adapted_frame(jet.x, tf, f.v, f.alpha, f.beta);
    f.e3 = n.e3;
    f.e4 = n.e4;
    f.e5 = n.e5;
    return f;
}

inline FramePoint build_frame(const ChartSpec& chart, double u, double v, double h) {
    return build_frame(evaluate_jet(chart, u, v, h));
}

/// Residuals of the algebraic frame identities at one point.
struct FrameResiduals {
    double orthonormality = 0.0; ///< max |<e_i,e_j> - delta_ij|, |<e_i, x>|
    double e2_decomposition = 0.0;///< |e2 - sin b v - cos b xi|
    double v_decomposition = 0.0;          ///< |v - (sin b e2 - cos b e5)|
    double iv_decomposition = 0.0;         ///< |i v - (sin a e4 - cos a e1)|
    double xi_decomposition = 0.0;         ///< |xi - (cos b e2 + sin b e5)|
    double ie1_decomposition = 0.0;        ///< |i e1 - (cos a sin b e2 + sin a e3 - cos a cos b e5)|
    double ie2_decomposition = 0.0;        ///< |i e2 - (-cos b x - cos a sin b e1 + sin a sin b e4)|
};

inline FrameResiduals frame_residuals(const FramePoint& f) {
    FrameResiduals r;
    for (int i = 1; i <= 5; ++i) {
        r.orthonormality = std::max(r.orthonormality, std::abs(real_inner(f.e(i), f.x.z())));
        for (int j = i; j <= 5; ++j) {
            const double target = i == j ? 1.0 : 0.0;
            r.orthonormality = std::max(r.orthonormality, std::abs(real_inner(f.e(i), f.e(j)) - target));
        }
    }
    const double sa = std::sin(f.alpha), ca = std::cos(f.alpha);
    const double sb = std::sin(f.beta), cb = std::cos(f.beta);
    r.e2_decomposition = norm(f.e2 - sb * f.v - cb * f.xi);
    r.v_decomposition = norm(f.v - (sb * f.e2 - cb * f.e5));
    r.iv_decomposition = norm(j_multiply(f.v) - (sa * f.e4 - ca * f.e1));
    r.xi_decomposition = norm(f.xi - (cb * f.e2 + sb * f.e5));
    r.ie1_decomposition = norm(j_multiply(f.e1) - (ca * sb * f.e2 + sa * f.e3 - ca * cb * f.e5));
    r.ie2_decomposition = norm(j_multiply(f.e2) - (-cb * f.x.z() - ca * sb * f.e1 + sa * sb * f.e4));
    return r;
}

} // namespace s5frames
