#pragma once

// Pointwise structure equations of a minimal surface in S^5 written in terms
// of the contact angle beta, the holomorphic angle alpha, the second
// fundamental form coefficients (a, b) and their derivatives. Each evaluator
// returns the left-hand side minus the right-hand side, or std::nullopt when
// a trigonometric factor it needs is singular at the point.
//
// Subscripts denote frame derivatives: f1 = df(e1), f2 = df(e2). The complex
// structure of S is Je1 = e2, Je2 = -e1, so (w o J)(e1) = w(e2) and
// (w o J)(e2) = -w(e1).

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s5frames/connection.hpp"

namespace s5frames {

/// Largest admissible magnitude of csc/cot factors.
inline constexpr double kTrigGuard = 1e8;
/// tan(beta) and sec(beta) require |cos beta| at least this large.
inline constexpr double kTanBetaMargin = 1e-4;

struct TrigFactors {
    double sin_a = 0, cos_a = 0, sin_b = 0, cos_b = 0;
    std::optional<double> csc_a, cot_a, csc_b, cot_b, sec_b, tan_b;
};

inline TrigFactors trig_factors(double alpha, double beta) {
    TrigFactors t;
    t.sin_a = std::sin(alpha);
    t.cos_a = std::cos(alpha);
    t.sin_b = std::sin(beta);
    t.cos_b = std::cos(beta);
    if (std::abs(t.sin_a) * kTrigGuard >= 1.0) {
        t.csc_a = 1.0 / t.sin_a;
        t.cot_a = t.cos_a / t.sin_a;
    }
    if (std::abs(t.sin_b) * kTrigGuard >= 1.0) {
        t.csc_b = 1.0 / t.sin_b;
        t.cot_b = t.cos_b / t.sin_b;
    }
    if (std::abs(t.cos_b) >= kTanBetaMargin) {
        t.sec_b = 1.0 / t.cos_b;
        t.tan_b = t.sin_b / t.cos_b;
    }
    return t;
}

/// Everything the scalar equations consume at one surface point.
struct PointData {
    double alpha = 0.0, beta = 0.0;
    double a = 0.0, b = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0, beta1 = 0.0, beta2 = 0.0;
    std::optional<double> a1, a2, b1, b2;
    std::optional<double> lap_alpha, lap_beta;
    std::optional<ConnectionTable> table;

    double grad_alpha_sq() const { return alpha1 * alpha1 + alpha2 * alpha2; }
    double grad_beta_sq() const { return beta1 * beta1 + beta2 * beta2; }

    static PointData from_table(const ConnectionTable& t) {
        PointData p;
        p.alpha = t.alpha;
        p.beta = t.beta;
        p.a = t.a;
        p.b = t.b;
        p.alpha1 = t.alpha1;
        p.alpha2 = t.alpha2;
        p.beta1 = t.beta1;
        p.beta2 = t.beta2;
        p.table = t;
        return p;
    }
};

namespace detail {

inline double require(const std::optional<double>& v, const char* what) {
    if (!v) throw std::logic_error(std::string("PointData is missing ") + what);
    return *v;
}

inline const ConnectionTable& require_table(const PointData& p) {
    if (!p.table) throw std::logic_error("PointData is missing the connection table");
    return *p.table;
}

} // namespace detail

// ---------------------------------------------------------------- curvature

/// Gaussian curvature from the Gauss equation:
///   K = 1 - (1 + csc^2 b)(a^2 + b^2) - 2b csc b (alpha1 - sin a cot b)
///       + 2a csc b alpha2 - |grad beta + cos a e1|^2 - |grad alpha - sin a cot b e1|^2
inline std::optional<double> gauss_curvature_eq11(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    if (!t.csc_b || !t.cot_b) return std::nullopt;
    const double csc = *t.csc_b, cot = *t.cot_b;
    const double ab2 = p.a * p.a + p.b * p.b;
    const double shifted_beta = (p.beta1 + t.cos_a) * (p.beta1 + t.cos_a) + p.beta2 * p.beta2;
    const double c = p.alpha1 - t.sin_a * cot;
    const double shifted_alpha = c * c + p.alpha2 * p.alpha2;
    return 1.0 - (1.0 + csc * csc) * ab2 - 2.0 * p.b * csc * c + 2.0 * p.a * csc * p.alpha2 - shifted_beta -
           shifted_alpha;
}

/// The expanded first line of the same Gauss-equation formula, kept as a
/// transcription cross-check.
inline std::optional<double> gauss_curvature_eq11_expanded(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    if (!t.csc_b || !t.cot_b) return std::nullopt;
    const double csc = *t.csc_b, cot = *t.cot_b;
    const double sa = t.sin_a, ca = t.cos_a;
    return 1.0 - p.grad_beta_sq() - 2.0 * ca * p.beta1 - ca * ca - (1.0 + csc * csc) * (p.a * p.a + p.b * p.b) +
           2.0 * p.b * sa * csc * cot + 2.0 * sa * cot * p.alpha1 - p.grad_alpha_sq() + 2.0 * p.a * csc * p.alpha2 -
           2.0 * p.b * csc * p.alpha1 - sa * sa * cot * cot;
}

/// Gaussian curvature from differentiating theta_2^1:
///   K = -(1 + tan^2 b)|grad beta|^2 - tan b lap beta - 2 cos a (1 + 2 tan^2 b) beta1
///       + 2 tan b sin a alpha1 - 4 tan^2 b cos^2 a
inline std::optional<double> gauss_curvature_eq13(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    if (!t.tan_b) return std::nullopt;
    const double tb = *t.tan_b, tb2 = tb * tb;
    const double lap_beta = detail::require(p.lap_beta, "lap_beta");
    return -(1.0 + tb2) * p.grad_beta_sq() - tb * lap_beta - 2.0 * t.cos_a * (1.0 + 2.0 * tb2) * p.beta1 +
           2.0 * tb * t.sin_a * p.alpha1 - 4.0 * tb2 * t.cos_a * t.cos_a;
}

/// tan b lap beta - RHS of the Laplacian identity for beta.
inline std::optional<double> laplacian_identity_residual(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    if (!t.tan_b || !t.csc_b || !t.cot_b) return std::nullopt;
    const double tb = *t.tan_b, tb2 = tb * tb, csc = *t.csc_b, cot = *t.cot_b;
    const double sa = t.sin_a, ca = t.cos_a;
    const double lap_beta = detail::require(p.lap_beta, "lap_beta");

    const double beta_term = (p.beta1 + 2.0 * ca) * (p.beta1 + 2.0 * ca) + p.beta2 * p.beta2;
    const double w1 = cot * p.alpha1 + sa * (1.0 - cot * cot), w2 = cot * p.alpha2;
    const double alpha_term = w1 * w1 + w2 * w2;
    const double rhs = (1.0 + csc * csc) * (p.a * p.a + p.b * p.b) + 2.0 * p.b * csc * (p.alpha1 - sa * cot) -
                       2.0 * p.a * csc * p.alpha2 - tb2 * (beta_term - alpha_term) + sa * sa * (1.0 - tb2);
    return tb * lap_beta - rhs;
}

// ---------------------------------------------------------- Codazzi-Ricci

struct CodazziResiduals {
    std::optional<double> codazzi_skew, codazzi_trace, codazzi_skew_dual, codazzi_scalar;
};

/// The four scalar Codazzi-Ricci equations, evaluated as printed. Needs
/// a1, a2, b1, b2 and lap_alpha.
inline CodazziResiduals codazzi_residuals(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    const double a = p.a, b = p.b, al1 = p.alpha1, al2 = p.alpha2;
    const double a1 = detail::require(p.a1, "a1"), a2 = detail::require(p.a2, "a2");
    const double b1 = detail::require(p.b1, "b1"), b2 = detail::require(p.b2, "b2");
    const double sa = t.sin_a, ca = t.cos_a, sb = t.sin_b;
    const double ab2 = a * a + b * b, grad_alpha_sq = p.grad_alpha_sq();

    CodazziResiduals r;
    if (t.cot_a && t.csc_b && t.cot_b && t.sec_b && t.tan_b) {
        const double cota = *t.cot_a, csc = *t.csc_b, cot = *t.cot_b, sec = *t.sec_b, tb = *t.tan_b;
        const double cc = csc * csc + cot * cot;
        r.codazzi_skew = (b1 - a2) + ab2 * cota * csc * cot * cot - a * cota * cc * al2 +
                 b * (cota * cc * al1 - ca * cot * (cc - 3.0 * sec * sec * (1.0 + sb * sb))) -
                 ca * csc * (2.0 * (cot - tb) * al1 - sa * (cot * cot - 3.0)) + cota * csc * grad_alpha_sq;
    }
    if (t.cot_a && t.tan_b && t.sec_b) {
        const double cota = *t.cot_a, tb = *t.tan_b, sec = *t.sec_b;
        r.codazzi_trace = (a1 + b2) + b * cota * al2 + a * (cota * al1 + 6.0 * tb * ca) - 2.0 * sec * ca * al2;
    }
    if (t.cot_a && t.cot_b && t.tan_b) {
        const double cota = *t.cot_a, cot = *t.cot_b, tb = *t.tan_b;
        const double lap_alpha = detail::require(p.lap_alpha, "lap_alpha");
        r.codazzi_skew_dual = (a2 - b1) - ab2 * cota * sb * cot * cot + a * cota * al2 +
                 b * (-cota * al1 + 2.0 * ca * (cot - 3.0 * tb)) + 2.0 * ca * sb * (cot - tb) * al1 +
                 sa * ca * sb * (5.0 - cot * cot) + sb * lap_alpha;
    }
    if (t.csc_b && t.cot_b && t.tan_b) {
        const double csc = *t.csc_b, cot = *t.cot_b, tb = *t.tan_b;
        r.codazzi_scalar = ab2 * (1.0 + csc * csc) + 2.0 * b * csc * (al1 - cot * sa) - 2.0 * a * csc * al2 + grad_alpha_sq +
                 2.0 * sa * (tb - cot) * al1 - 4.0 * tb * tb * ca * ca - sa * sa * (1.0 - cot * cot);
    }
    return r;
}

// ---------------------------------------------------------- reduced system

struct ReducedResiduals {
    std::optional<double> gradient_constraint, laplacian_constraint, combined_laplacian;
};

/// Bounds under which a point counts as satisfying the reduced-system
/// hypothesis (a = b = 0 and beta locally constant).
inline constexpr double kReducedHypothesisTol = 1e-6;

/// Reduced equations for a = b = 0 and constant beta:
///   cos a (2(cot b - tan b) alpha1 - sin a (cot^2 b - 3)) - cot a |grad alpha|^2
///   2 cos a (cot b - tan b) alpha1 + sin a cos a (5 - cot^2 b) + lap alpha
///   lap alpha + sin 2a + cot a |grad alpha|^2
/// Throws HypothesisViolated when the point data contradict the hypothesis.
inline ReducedResiduals reduced_residuals(const PointData& p, double hypothesis_tol = kReducedHypothesisTol) {
    if (std::abs(p.a) > hypothesis_tol || std::abs(p.b) > hypothesis_tol || std::abs(p.beta1) > hypothesis_tol ||
        std::abs(p.beta2) > hypothesis_tol)
        throw GeometryError(ErrorKind::HypothesisViolated,
                            "reduced system needs a = b = 0 and constant beta (a = " + std::to_string(p.a) +
                                ", b = " + std::to_string(p.b) + ")");
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    const double sa = t.sin_a, ca = t.cos_a, grad_alpha_sq = p.grad_alpha_sq();
    const double lap_alpha = detail::require(p.lap_alpha, "lap_alpha");

    ReducedResiduals r;
    if (t.cot_a && t.cot_b && t.tan_b) {
        const double cot = *t.cot_b, tb = *t.tan_b;
        r.gradient_constraint = ca * (2.0 * (cot - tb) * p.alpha1 - sa * (cot * cot - 3.0)) - *t.cot_a * grad_alpha_sq;
    }
    if (t.cot_b && t.tan_b) {
        const double cot = *t.cot_b, tb = *t.tan_b;
        r.laplacian_constraint = 2.0 * ca * (cot - tb) * p.alpha1 + sa * ca * (5.0 - cot * cot) + lap_alpha;
    }
    if (t.cot_a) r.combined_laplacian = lap_alpha + std::sin(2.0 * p.alpha) + *t.cot_a * grad_alpha_sq;
    return r;
}

/// Solves the first two reduced equations for |grad alpha|^2 and lap alpha
/// given (alpha, beta, alpha1), then returns the residual of the third. The
/// third equation is an algebraic consequence of the first two, so the
/// result is zero up to rounding.
struct EliminationSample {
    double grad_alpha_sq = 0.0, lap_alpha = 0.0, combined_laplacian = 0.0;
};

inline EliminationSample reduced_elimination(double alpha, double beta, double alpha1) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double cot = std::cos(beta) / std::sin(beta), tb = std::tan(beta);
    EliminationSample s;
    // gradient constraint solved for |grad alpha|^2
    s.grad_alpha_sq = sa * (2.0 * (cot - tb) * alpha1 - sa * (cot * cot - 3.0));
    s.lap_alpha = -2.0 * ca * (cot - tb) * alpha1 - sa * ca * (5.0 - cot * cot);
    s.combined_laplacian = s.lap_alpha + std::sin(2.0 * alpha) + (ca / sa) * s.grad_alpha_sq;
    return s;
}

// ------------------------------------------------------ normal connection

struct ParallelNormal {
    double theta34_norm = 0.0, theta35_norm = 0.0; ///< measured |theta_3^4|, |theta_3^5|
    std::optional<double> theta34_closed_form;     ///< max_i |measured - closed form|
    std::optional<double> theta35_closed_form;
};

namespace detail {

inline std::array<double, 2> compose_j(double w1, double w2) { return {w2, -w1}; }

inline double form_norm(const std::array<double, 2>& w) { return std::hypot(w[0], w[1]); }

inline double form_gap(const std::array<double, 2>& measured, const std::array<double, 2>& closed) {
    return std::max(std::abs(measured[0] - closed[0]), std::abs(measured[1] - closed[1]));
}

} // namespace detail

/// theta_3^4 from the normal-connection closed form.
inline std::optional<std::array<double, 2>> theta34_closed_form(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    if (!t.sec_b || !t.cot_a || !t.csc_b || !t.cot_b) return std::nullopt;
    const double sec = *t.sec_b, cota = *t.cot_a, csc = *t.csc_b, cot = *t.cot_b, ca = t.cos_a;
    const auto dbJ = detail::compose_j(p.beta1, p.beta2);
    const auto daJ = detail::compose_j(p.alpha1, p.alpha2);
    const double c1 = p.a * cota * cot * cot;
    const double c2 = p.b * cota * cot * cot - ca * cot * csc + 2.0 * sec * ca;
    return std::array<double, 2>{-sec * dbJ[0] - cota * csc * daJ[0] + c1,
                                 -sec * dbJ[1] - cota * csc * daJ[1] + c2};
}

/// theta_3^5 = (b cot b - csc b sin a) theta^1 - a cot b theta^2.
inline std::optional<std::array<double, 2>> theta35_closed_form(const PointData& p) {
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    if (!t.csc_b || !t.cot_b) return std::nullopt;
    const double csc = *t.csc_b, cot = *t.cot_b;
    return std::array<double, 2>{p.b * cot - csc * t.sin_a, -p.a * cot};
}

/// Norms of the measured theta_3^4 and theta_3^5 (both vanish iff e3 is
/// parallel in the normal bundle) and their gaps to the closed forms.
inline ParallelNormal parallel_normal_residual(const PointData& p) {
    const ConnectionTable& t = detail::require_table(p);
    ParallelNormal r;
    r.theta34_norm = detail::form_norm(t.form(3, 4));
    r.theta35_norm = detail::form_norm(t.form(3, 5));
    if (auto c = theta34_closed_form(p)) r.theta34_closed_form = detail::form_gap(t.form(3, 4), *c);
    if (auto c = theta35_closed_form(p)) r.theta35_closed_form = detail::form_gap(t.form(3, 5), *c);
    return r;
}

// ------------------------------------------------- connection identities

struct IdentityResidual {
    std::string id;
    std::optional<double> value; ///< max_i |measured(e_i) - closed form(e_i)|
};

/// Closed forms of the connection table (intrinsic relations valid on any
/// surface, the minimal-surface expansions, theta_4^5 from the normal
/// connection, and theta_2^1) compared against the measured table.
inline std::vector<IdentityResidual> connection_table_identities(const PointData& p) {
    const ConnectionTable& m = detail::require_table(p);
    const TrigFactors t = trig_factors(p.alpha, p.beta);
    const double sa = t.sin_a, ca = t.cos_a, sb = t.sin_b, cb = t.cos_b;
    using F = std::array<double, 2>;
    const F th1{1.0, 0.0}, th2{0.0, 1.0};
    const F da{p.alpha1, p.alpha2}, db{p.beta1, p.beta2};
    const F daJ = detail::compose_j(p.alpha1, p.alpha2), dbJ = detail::compose_j(p.beta1, p.beta2);
    auto lin = [](double x, const F& f, double y = 0.0, const F& g = F{0.0, 0.0}) {
        return F{x * f[0] + y * g[0], x * f[1] + y * g[1]};
    };
    auto add = [](const F& f, const F& g) { return F{f[0] + g[0], f[1] + g[1]}; };

    std::vector<IdentityResidual> out;
    auto check = [&](const char* id, int j, int k, const std::optional<F>& closed) {
        out.push_back({id, closed ? std::optional<double>(detail::form_gap(m.form(j, k), *closed)) : std::nullopt});
    };
    const bool beta_cot = t.csc_b && t.cot_b;
    const double csc = t.csc_b.value_or(0.0), cot = t.cot_b.value_or(0.0);
    const double cota = t.cot_a.value_or(0.0);

    check("form_theta3_1", 3, 1, lin(-1.0, m.form(1, 3)));
    check("form_theta3_2", 3, 2, add(lin(sb, add(da, m.form(4, 1))), lin(-cb * sa, th1)));
    check("form_theta3_4", 3, 4,
          beta_cot && t.cot_a ? std::optional<F>(add(lin(csc, m.form(1, 2)),
                                                     lin(-cota, add(m.form(1, 3), lin(csc, m.form(2, 4))))))
                              : std::nullopt);
    check("form_theta3_5", 3, 5,
          beta_cot ? std::optional<F>(add(lin(cot, m.form(2, 3)), lin(-csc * sa, th1))) : std::nullopt);
    check("form_theta4_1", 4, 1,
          beta_cot ? std::optional<F>(add(add(lin(-1.0, da), lin(-csc, m.form(2, 3))), lin(sa * cot, th1)))
                   : std::nullopt);
    check("form_theta4_2", 4, 2, lin(-1.0, m.form(2, 4)));
    check("form_theta4_3", 4, 3,
          beta_cot && t.cot_a ? std::optional<F>(add(lin(csc, m.form(2, 1)),
                                                     lin(cota, add(m.form(1, 3), lin(csc, m.form(2, 4))))))
                              : std::nullopt);
    check("form_theta4_5", 4, 5, beta_cot ? std::optional<F>(add(lin(cot, m.form(2, 4)), lin(-sa, th2))) : std::nullopt);
    check("form_theta5_1", 5, 1,
          beta_cot ? std::optional<F>(add(lin(-ca, th2), lin(-cot, m.form(2, 1)))) : std::nullopt);
    check("form_theta5_2", 5, 2, add(db, lin(ca, th1)));
    check("form_theta5_3", 5, 3,
          beta_cot ? std::optional<F>(add(lin(-cot, m.form(2, 3)), lin(csc * sa, th1))) : std::nullopt);
    check("form_theta5_4", 5, 4, beta_cot ? std::optional<F>(add(lin(-cot, m.form(2, 4)), lin(sa, th2))) : std::nullopt);

    const double a = p.a, b = p.b;
    check("minimal_theta1_3", 1, 3, lin(a, th1, b, th2));
    check("minimal_theta2_3", 2, 3, lin(b, th1, -a, th2));
    check("minimal_theta1_4", 1, 4,
          beta_cot ? std::optional<F>(add(da, lin(b * csc - sa * cot, th1, -a * csc, th2))) : std::nullopt);
    check("minimal_theta2_4", 2, 4,
          beta_cot ? std::optional<F>(add(daJ, lin(-a * csc, th1, -(b * csc - sa * cot), th2))) : std::nullopt);
    check("minimal_theta1_5", 1, 5, add(dbJ, lin(-ca, th2)));
    check("minimal_theta2_5", 2, 5, add(lin(-1.0, db), lin(-ca, th1)));

    check("normal_theta4_5", 4, 5,
          beta_cot ? std::optional<F>(add(lin(cot, daJ),
                                          lin(-a * cot * csc, th1, -b * csc * cot + sa * (cot * cot - 1.0), th2)))
                   : std::nullopt);

    check("tangent_theta2_1", 2, 1,
          t.tan_b ? std::optional<F>(lin(*t.tan_b, add(dbJ, lin(-2.0 * ca, th2)))) : std::nullopt);
    return out;
}

} // namespace s5frames
