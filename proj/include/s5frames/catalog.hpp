#pragma once

// Built-in charts, the circle locus for constant-angle minimal tori, and a
// numerical search for minimal homogeneous tori.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "s5frames/connection.hpp"
#include "s5frames/errors.hpp"
#include "s5frames/parallel.hpp"

namespace s5frames {

using FrequencyPair = std::array<int, 2>;
using FrequencySet = std::array<FrequencyPair, 3>;

/// x(u, v) = (r_j exp(i (m_j u + n_j v + phi_j)))_j
struct HomogeneousTorusSpec {
    std::array<double, 3> radii{};
    FrequencySet freq{};
    std::array<double, 3> phases{};

    friend bool operator<(const HomogeneousTorusSpec& l, const HomogeneousTorusSpec& r) {
        return std::tie(l.radii, l.freq, l.phases) < std::tie(r.radii, r.freq, r.phases);
    }
    friend bool operator==(const HomogeneousTorusSpec&, const HomogeneousTorusSpec&) = default;

    std::string name() const {
        std::ostringstream os;
        os.precision(17);
        os << "torus:" << radii[0] << ',' << radii[1] << ',' << radii[2];
        for (const auto& k : freq) os << ';' << k[0] << ',' << k[1];
        return os.str();
    }
};

/// Validates a torus description. Radii whose squares sum to 1 within
/// `norm_tol` are rescaled onto the unit sphere exactly; anything further
/// off is rejected. Wave vectors of the non-vanishing components must span
/// the plane.
inline HomogeneousTorusSpec make_torus_spec(std::array<double, 3> radii, const FrequencySet& freq,
                                            std::array<double, 3> phases = {}, double norm_tol = 1e-6) {
    double sum = 0.0;
    for (double r : radii) {
        if (!(r >= 0.0)) throw GeometryError(ErrorKind::DegenerateSpec, "radii must be non-negative");
        sum += r * r;
    }
    if (!(std::abs(sum - 1.0) <= norm_tol))
        throw GeometryError(ErrorKind::DegenerateSpec,
                            "squared radii sum to " + std::to_string(sum) + ", not 1");
    const double scale = 1.0 / std::sqrt(sum);
    for (double& r : radii) r *= scale;

    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        const double w = radii[j] * radii[j];
        g11 += w * freq[j][0] * freq[j][0];
        g12 += w * freq[j][0] * freq[j][1];
        g22 += w * freq[j][1] * freq[j][1];
    }
    if (!(g11 * g22 - g12 * g12 > 1e-12))
        throw GeometryError(ErrorKind::DegenerateSpec, "wave vectors are linearly dependent");
    return {radii, freq, phases};
}

inline ChartSpec build_torus(const HomogeneousTorusSpec& raw) {
    const HomogeneousTorusSpec spec = make_torus_spec(raw.radii, raw.freq, raw.phases, 1e-12);
    auto phase = [spec](double u, double v, std::size_t j) {
        return spec.freq[j][0] * u + spec.freq[j][1] * v + spec.phases[j];
    };
    ChartSpec chart;
    chart.name = spec.name();
    chart.immersion = [spec, phase](double u, double v) {
        ComplexVec3 x;
        for (std::size_t j = 0; j < 3; ++j) x[j] = std::polar(spec.radii[j], phase(u, v, j));
        return x;
    };
    chart.analytic_jet = [spec, phase](double u, double v) {
        ComplexVec3 x, xu, xv, xuu, xuv, xvv;
        for (std::size_t j = 0; j < 3; ++j) {
            const cplx z = std::polar(spec.radii[j], phase(u, v, j));
            const double m = spec.freq[j][0], n = spec.freq[j][1];
            x[j] = z;
            xu[j] = kI * m * z;
            xv[j] = kI * n * z;
            xuu[j] = -m * m * z;
            xuv[j] = -m * n * z;
            xvv[j] = -n * n * z;
        }
        return Jet{SpherePoint(x), xu, xv, xuu, xuv, xvv};
    };
    return chart;
}

inline HomogeneousTorusSpec legendrian_clifford_spec() {
    const double r = 1.0 / std::sqrt(3.0);
    return {{r, r, r}, {{{1, 0}, {0, 1}, {-1, -1}}}, {}};
}

inline HomogeneousTorusSpec s3_clifford_spec() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{r, r, 0.0}, {{{1, 0}, {0, 1}, {0, 0}}}, {}};
}

/// Flat minimal torus with constant contact angle pi/4, holomorphic angle
/// pi/2 and a = b = 0.
inline HomogeneousTorusSpec quarter_contact_spec() {
    return {{0.5, 1.0 / std::sqrt(2.0), 0.5}, {{{1, 0}, {0, 1}, {-1, 0}}}, {}};
}

/// x = (cos u cos v, sin u cos v, sin v), v kept away from the poles.
inline ChartSpec geodesic_sphere_chart(double delta = 0.1) {
    ChartSpec chart;
    chart.name = "geodesic-s2";
    chart.u_range = {0.0, 2.0 * std::numbers::pi};
    chart.v_range = {-0.5 * std::numbers::pi + delta, 0.5 * std::numbers::pi - delta};
    chart.periodic_u = true;
    chart.periodic_v = false;
    chart.immersion = [](double u, double v) {
        return ComplexVec3{std::cos(u) * std::cos(v), std::sin(u) * std::cos(v), std::sin(v)};
    };
    chart.analytic_jet = [](double u, double v) {
        const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
        Jet j;
        j.x = SpherePoint(ComplexVec3{cu * cv, su * cv, sv});
        j.xu = {-su * cv, cu * cv, 0.0};
        j.xv = {-cu * sv, -su * sv, cv};
        j.xuu = {-cu * cv, -su * cv, 0.0};
        j.xuv = {su * sv, -cu * sv, 0.0};
        j.xvv = {-cu * cv, -su * cv, -sv};
        return j;
    };
    return chart;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

template <class T> T parse_number(const std::string& text) {
    std::istringstream is(text);
    T value{};
    is >> value;
    if (!is || !(is >> std::ws).eof())
        throw GeometryError(ErrorKind::InvalidChart, "cannot parse number '" + text + "'");
    return value;
}

inline HomogeneousTorusSpec parse_torus_name(const std::string& body) {
    const auto groups = split(body, ';');
    if (groups.size() != 4)
        throw GeometryError(ErrorKind::InvalidChart, "torus name needs radii and three frequency pairs");
    const auto r = split(groups[0], ',');
    if (r.size() != 3) throw GeometryError(ErrorKind::InvalidChart, "torus name needs three radii");
    std::array<double, 3> radii{};
    for (std::size_t k = 0; k < 3; ++k) radii[k] = parse_number<double>(r[k]);
    FrequencySet freq{};
    for (std::size_t j = 0; j < 3; ++j) {
        const auto mn = split(groups[j + 1], ',');
        if (mn.size() != 2) throw GeometryError(ErrorKind::InvalidChart, "frequency pairs have two entries");
        freq[j] = {parse_number<int>(mn[0]), parse_number<int>(mn[1])};
    }
    return make_torus_spec(radii, freq);
}

} // namespace detail

inline bool is_catalog_name(const std::string& name) {
    return name == "legendrian-clifford" || name == "geodesic-s2" || name == "s3-clifford" ||
           name.rfind("torus:", 0) == 0;
}

/// "legendrian-clifford", "geodesic-s2", "s3-clifford" or
/// "torus:<r1>,<r2>,<r3>;<m1>,<n1>;<m2>,<n2>;<m3>,<n3>".
inline ChartSpec chart_by_name(const std::string& name) {
    ChartSpec chart;
    if (name == "legendrian-clifford")
        chart = build_torus(legendrian_clifford_spec());
    else if (name == "geodesic-s2")
        chart = geodesic_sphere_chart();
    else if (name == "s3-clifford")
        chart = build_torus(s3_clifford_spec());
    else if (name.rfind("torus:", 0) == 0)
        chart = build_torus(detail::parse_torus_name(name.substr(6)));
    else
        throw GeometryError(ErrorKind::InvalidChart, "unknown catalog chart '" + name + "'");
    if (name.rfind("torus:", 0) != 0) chart.name = name;
    return chart;
}

// ------------------------------------------------------------ circle locus

/// a^2 + (b - cos b / (1 + sin^2 b))^2 - 2 sin^4 b / (1 + sin^2 b)^2
inline double circle_locus(double beta, double a, double b) {
    const double s = std::sin(beta), s2 = s * s, d = 1.0 + s2;
    const double shift = b - std::cos(beta) / d;
    return a * a + shift * shift - 2.0 * s2 * s2 / (d * d);
}

/// b on the a = 0 branch; `sign` picks the root.
inline double locus_b_for_a_zero(double beta, int sign = 1) {
    const double s = std::sin(beta), d = 1.0 + s * s;
    return std::cos(beta) / d + (sign < 0 ? -1.0 : 1.0) * std::numbers::sqrt2 * s * s / d;
}

/// a^2 on the b = 0 branch, -cos 2b / (1 + sin^2 b). Negative below
/// beta = pi/4, where the branch does not exist.
inline double locus_a_sq_for_b_zero(double beta) {
    const double s = std::sin(beta);
    return -std::cos(2.0 * beta) / (1.0 + s * s);
}

/// |a| on the b = 0 branch, which exists only for beta >= pi/4.
inline std::optional<double> locus_a_for_b_zero(double beta) {
    const double a2 = locus_a_sq_for_b_zero(beta);
    if (a2 < 0.0) return std::nullopt;
    return std::sqrt(a2);
}

struct LocusSample {
    double beta = 0.0, alpha = 0.0, a = 0.0, b = 0.0;
    double circle_residual = 0.0;
};

inline LocusSample make_locus_sample(double beta, double alpha, double a, double b) {
    return {beta, alpha, a, b, circle_locus(beta, a, b)};
}

// ------------------------------------------------------ minimality search

struct SearchOptions {
    std::size_t coarse_n = 16;
    std::size_t fine_n = 64;
    double h = 1e-3;
    double constancy_tol = 1e-6;
    unsigned workers = 1;
};

struct TorusCandidate {
    HomogeneousTorusSpec spec;
    double minimality_residual = 0.0; ///< max over the confirmation grid
    double beta_spread = 0.0, alpha_spread = 0.0;
    LocusSample sample;
};

/// Radius triples with r_j^2 = k_j / denominator, k_j >= 0, sum k_j = denominator.
inline std::vector<std::array<double, 3>> squared_radius_lattice(int denominator) {
    std::vector<std::array<double, 3>> out;
    for (int k0 = 0; k0 <= denominator; ++k0)
        for (int k1 = 0; k0 + k1 <= denominator; ++k1) {
            const int k2 = denominator - k0 - k1;
            const double d = denominator;
            out.push_back({std::sqrt(k0 / d), std::sqrt(k1 / d), std::sqrt(k2 / d)});
        }
    return out;
}

namespace detail {

struct GridScan {
    double max_mean_curvature = 0.0;
    double beta_min = 1e300, beta_max = -1e300, alpha_min = 1e300, alpha_max = -1e300;
    CompensatedSum beta, alpha, a, b;
    std::size_t n = 0;
};

inline GridScan scan_minimality(const ChartSpec& chart, std::size_t n, double h, double stop_above) {
    const Grid grid(chart, n, n);
    GridScan s;
    for (std::size_t j = 0; j < grid.nv; ++j)
        for (std::size_t i = 0; i < grid.nu; ++i) {
            const ConnectionTable t = connection_forms(chart, grid.u(i), grid.v(j), h);
            s.max_mean_curvature = std::max(s.max_mean_curvature, minimality_residual(t).mean_curvature);
            if (s.max_mean_curvature > stop_above) return s;
            s.beta_min = std::min(s.beta_min, t.beta);
            s.beta_max = std::max(s.beta_max, t.beta);
            s.alpha_min = std::min(s.alpha_min, t.alpha);
            s.alpha_max = std::max(s.alpha_max, t.alpha);
            s.beta.add(t.beta);
            s.alpha.add(t.alpha);
            s.a.add(t.a);
            s.b.add(t.b);
            ++s.n;
        }
    return s;
}

} // namespace detail

/// Tries every (radii, frequencies) combination, keeps tori whose mean
/// curvature stays below `tol` on a coarse grid and again on a confirmation
/// grid, and whose contact and holomorphic angles are constant. Candidates
/// that are not immersions or hit frame degeneracies are dropped. Output is
/// sorted by spec.
inline std::vector<TorusCandidate> minimal_torus_search(std::span<const std::array<double, 3>> radii,
                                                        std::span<const FrequencySet> freqs, double tol,
                                                        const SearchOptions& opt = {}) {
    std::vector<HomogeneousTorusSpec> specs;
    for (const auto& r : radii)
        for (const auto& f : freqs) {
            try {
                specs.push_back(make_torus_spec(r, f));
            } catch (const GeometryError&) {
            }
        }
    std::sort(specs.begin(), specs.end());

    std::vector<std::optional<TorusCandidate>> found(specs.size());
    parallel_for(specs.size(), opt.workers, [&](std::size_t idx) {
        const HomogeneousTorusSpec& spec = specs[idx];
        try {
            const ChartSpec chart = build_torus(spec);
            if (detail::scan_minimality(chart, opt.coarse_n, opt.h, tol).max_mean_curvature > tol) return;
            const detail::GridScan fine = detail::scan_minimality(chart, opt.fine_n, opt.h, tol);
            if (fine.max_mean_curvature > tol) return;
            TorusCandidate c;
            c.spec = spec;
            c.minimality_residual = fine.max_mean_curvature;
            c.beta_spread = fine.beta_max - fine.beta_min;
            c.alpha_spread = fine.alpha_max - fine.alpha_min;
            if (c.beta_spread > opt.constancy_tol || c.alpha_spread > opt.constancy_tol) return;
            const double n = static_cast<double>(fine.n);
            c.sample = make_locus_sample(fine.beta.value() / n, fine.alpha.value() / n, fine.a.value() / n,
                                         fine.b.value() / n);
            found[idx] = c;
        } catch (const GeometryError&) {
        }
    });

    std::vector<TorusCandidate> out;
    for (auto& c : found)
        if (c) out.push_back(*c);
    return out;
}

} // namespace s5frames
