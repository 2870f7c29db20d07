#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "s5frames/catalog.hpp"
#include "s5frames/structure.hpp"

using namespace s5frames;

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_gap(const ChartSpec& c) {
    double worst = 0.0;
    const Grid g(c, 9, 9);
    for (std::size_t j = 0; j < g.nv; ++j)
        for (std::size_t i = 0; i < g.nu; ++i) worst = std::max(worst, std::abs(norm(c.immersion(g.u(i), g.v(j))) - 1.0));
    return worst;
}

} // namespace

TEST(Torus, LegendrianCliffordIsMinimalAndLegendrian) {
    const ChartSpec c = build_torus(legendrian_clifford_spec());
    for (double u : {0.0, 1.0, 4.0}) {
        const Jet j = evaluate_jet(c, u, 2.0, 1e-3);
        EXPECT_LE(std::abs(real_inner(j.xu, reeb(j.x))), 1e-15);
        EXPECT_LE(std::abs(real_inner(j.xv, reeb(j.x))), 1e-15);
        EXPECT_LE(minimality_residual(connection_forms(c, u, 2.0, 1e-3)).mean_curvature, 1e-7);
    }
}

TEST(Torus, StaysOnTheSphere) {
    for (const auto& spec : {legendrian_clifford_spec(), s3_clifford_spec(), quarter_contact_spec()})
        EXPECT_LE(sphere_gap(build_torus(spec)), 1e-14);
}

TEST(Torus, S3CliffordFramesAreDegenerate) {
    const ChartSpec c = build_torus(s3_clifford_spec());
    try {
        build_frame(c, 0.3, 0.3, 1e-3);
        FAIL() << "expected DegenerateTangent";
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateTangent);
    }
}

TEST(Torus, DependentFrequenciesRejected) {
    const double r = 1.0 / std::sqrt(3.0);
    try {
        make_torus_spec({r, r, r}, {{{1, 1}, {2, 2}, {1, 1}}});
        FAIL() << "expected DegenerateSpec";
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateSpec);
    }
}

TEST(Torus, RadiiMustLieOnTheSphere) {
    EXPECT_THROW(make_torus_spec({1.0, 1.0, 1.0}, {{{1, 0}, {0, 1}, {-1, -1}}}), GeometryError);
    EXPECT_THROW(make_torus_spec({-0.5, 0.5, std::sqrt(0.5)}, {{{1, 0}, {0, 1}, {-1, -1}}}), GeometryError);
    const HomogeneousTorusSpec s = make_torus_spec({0.577350269, 0.577350269, 0.577350269}, {{{1, 0}, {0, 1}, {-1, -1}}});
    EXPECT_NEAR(s.radii[0] * s.radii[0] * 3.0, 1.0, 1e-15);
}

TEST(Torus, NameRoundTrip) {
    const HomogeneousTorusSpec s = quarter_contact_spec();
    const ChartSpec c = chart_by_name(s.name());
    const ChartSpec direct = build_torus(s);
    EXPECT_LE(norm(c.immersion(0.4, 2.2) - direct.immersion(0.4, 2.2)), 1e-15);
    EXPECT_THROW(chart_by_name("torus:1,2"), GeometryError);
    EXPECT_THROW(chart_by_name("torus:0.6,0.8,0;1,0;0,x;0,0"), GeometryError);
    EXPECT_THROW(chart_by_name("klein-bottle"), GeometryError);
}

TEST(GeodesicSphere, Fixture) {
    const ChartSpec c = geodesic_sphere_chart();
    EXPECT_NO_THROW(validate_chart(c));
    EXPECT_TRUE(c.periodic_u);
    EXPECT_FALSE(c.periodic_v);
    EXPECT_NEAR(c.v_range.hi, kPi / 2 - 0.1, 1e-15);
    const FramePoint f = build_frame(c, 3.0, -0.9, 1e-3);
    EXPECT_NEAR(f.beta, kPi / 2, 1e-15);
    EXPECT_NEAR(f.alpha, kPi / 2, 1e-15);
    EXPECT_NEAR(gauss_curvature_intrinsic(c, 3.0, -0.9, 1e-3), 1.0, 1e-5);
}

TEST(Locus, KenmotsuBranch) {
    for (int k = 0; k <= 50; ++k) {
        const double beta = 0.01 + k * (kPi / 2 - 0.02) / 50;
        for (int sign : {1, -1}) EXPECT_LE(std::abs(circle_locus(beta, 0.0, locus_b_for_a_zero(beta, sign))), 1e-12);
    }
}

TEST(Locus, RightContactAngle) {
    for (double t : {0.0, 0.7, 2.0, 4.5}) {
        const double r = std::sqrt(0.5);
        EXPECT_NEAR(circle_locus(kPi / 2, r * std::cos(t), r * std::sin(t)), 0.0, 1e-15);
        EXPECT_NEAR(circle_locus(kPi / 2, 0.3, 0.1), 0.09 + 0.01 - 0.5, 1e-15);
    }
}

TEST(Locus, ZeroBBranchBoundary) {
    EXPECT_LE(std::abs(locus_a_sq_for_b_zero(kPi / 4)), 1e-12);
    EXPECT_LE(std::abs(circle_locus(kPi / 4, 0.0, 0.0)), 1e-12);
    EXPECT_FALSE(locus_a_for_b_zero(kPi / 4 - 0.01).has_value());
    for (double beta : {kPi / 4 + 0.01, 1.0, 1.3, kPi / 2 - 1e-3}) {
        const auto a = locus_a_for_b_zero(beta);
        ASSERT_TRUE(a.has_value());
        EXPECT_GT(*a, 0.0);
        EXPECT_LE(std::abs(circle_locus(beta, *a, 0.0)), 1e-12);
    }
}

TEST(LocusProperty, SymmetricInA) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> beta(0.0, kPi / 2), d(-3.0, 3.0);
    for (int k = 0; k < 1000; ++k) {
        const double b = beta(rng), a = d(rng), bb = d(rng);
        EXPECT_EQ(circle_locus(b, a, bb), circle_locus(b, -a, bb));
    }
}

TEST(Search, KeepsLegendrianTorus) {
    const double r = 1.0 / std::sqrt(3.0);
    const std::vector<std::array<double, 3>> radii{{r, r, r}, {0.9, 0.3, 0.316227766016838}};
    const std::vector<FrequencySet> freqs{{{{1, 0}, {0, 1}, {-1, -1}}}, {{{1, 0}, {0, 1}, {0, 0}}}};
    const auto found = minimal_torus_search(radii, freqs, 1e-6);
    ASSERT_EQ(found.size(), 1u);
    const TorusCandidate& c = found.front();
    EXPECT_EQ(c.spec.freq, freqs[0]);
    EXPECT_NEAR(c.sample.beta, kPi / 2, 1e-9);
    EXPECT_LE(c.beta_spread, 1e-6);
    EXPECT_LE(c.alpha_spread, 1e-6);
    // Measured (a, b) sit on a^2 + b^2 = 1/2.
    EXPECT_NEAR(c.sample.a, 0.0, 1e-9);
    EXPECT_NEAR(std::abs(c.sample.b), std::sqrt(0.5), 1e-9);
    EXPECT_LE(std::abs(c.sample.circle_residual), 1e-9);
}

TEST(Search, NonMinimalRegionIsEmpty) {
    const std::vector<std::array<double, 3>> radii{{0.9, 0.3, 0.316227766016838}, {0.8, 0.6, 0.0}};
    const std::vector<FrequencySet> freqs{{{{1, 0}, {0, 1}, {0, 0}}}, {{{1, 0}, {0, 1}, {1, 1}}}};
    EXPECT_TRUE(minimal_torus_search(radii, freqs, 1e-6).empty());
}

TEST(Search, LatticeFindsSamplesOnTheCircle) {
    const auto radii = squared_radius_lattice(24);
    const std::vector<FrequencySet> freqs{{{{1, 0}, {0, 1}, {-1, 0}}}, {{{1, 0}, {0, 1}, {1, -1}}},
                                          {{{1, 0}, {0, 1}, {-1, -1}}}};
    SearchOptions opt;
    opt.fine_n = 24;
    opt.workers = 4;
    const auto found = minimal_torus_search(radii, freqs, 1e-6, opt);
    ASSERT_GE(found.size(), 3u);
    bool interior = false;
    for (const auto& c : found) {
        EXPECT_LE(std::abs(c.sample.circle_residual), 1e-9) << c.spec.name();
        interior = interior || (c.sample.beta > 0.2 && c.sample.beta < kPi / 2 - 0.2);
    }
    EXPECT_TRUE(interior);
}

TEST(Search, OrderIndependent) {
    auto radii = squared_radius_lattice(6);
    std::vector<FrequencySet> freqs{{{{1, 0}, {0, 1}, {-1, 0}}}, {{{1, 0}, {0, 1}, {-1, -1}}}, {{{1, 0}, {0, 1}, {0, 0}}}};
    SearchOptions opt;
    opt.fine_n = 16;
    const auto first = minimal_torus_search(radii, freqs, 1e-6, opt);
    std::reverse(radii.begin(), radii.end());
    std::reverse(freqs.begin(), freqs.end());
    opt.workers = 3;
    const auto second = minimal_torus_search(radii, freqs, 1e-6, opt);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t k = 0; k < first.size(); ++k) {
        EXPECT_EQ(first[k].spec, second[k].spec);
        EXPECT_EQ(first[k].sample.circle_residual, second[k].sample.circle_residual);
        EXPECT_EQ(first[k].minimality_residual, second[k].minimality_residual);
    }
}
