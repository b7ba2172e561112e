#include "seqesc/errors.hpp"
#include "seqesc/twonode.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace seqesc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const NodeParams kP{0.2, 0.0, 0.05};

// tests/oracles/two_node_reference.py (mpmath, 30 digits).
constexpr double kBetaSN = 0.0154297487344012485;
constexpr double kBetaPF = 0.164917470223339527;
constexpr double kC4 = 1.86470412712093178;
constexpr double kEkFirst0 = 89.4279526040427761;
constexpr double kEkFirst01 = 283.427917288794863;
constexpr double kEkSecond0001 = 151.040134112214872;
constexpr double kSync1 = 0.451256590746332777;

struct Counts {
    int sinks = 0, saddles = 0, sources = 0;
};

Counts count(const std::vector<CriticalPoint2D>& pts) {
    Counts c;
    for (const auto& p : pts) {
        c.sinks += p.kind == CriticalKind::Sink;
        c.saddles += p.kind == CriticalKind::Saddle;
        c.sources += p.kind == CriticalKind::Source;
    }
    return c;
}

} // namespace

TEST_CASE("critical points per regime", "[twonode]") {
    const auto weak = find_critical_points_2node(kP, 0.01);
    const auto mid = find_critical_points_2node(kP, 0.1);
    const auto strong = find_critical_points_2node(kP, 1.0);
    CHECK(weak.size() == 9);
    CHECK(mid.size() == 5);
    CHECK(strong.size() == 3);
    const auto cw = count(weak), cm = count(mid), cs = count(strong);
    CHECK((cw.sources == 1 && cw.sinks == 4 && cw.saddles == 4));
    CHECK((cm.sources == 1 && cm.sinks == 2 && cm.saddles == 2));
    CHECK((cs.sources == 0 && cs.sinks == 2 && cs.saddles == 1));

    for (double beta : {0.0, 0.01, 0.05, 0.1, 0.2, 1.0}) {
        const auto pts = find_critical_points_2node(kP, beta);
        for (const auto& c : pts) {
            const auto gh = grad_hess_2node(c.position(0), c.position(1), kP, beta);
            CHECK(gh.gradient.norm() < 1e-10);
            const int neg = (c.eigenvalues.array() < 0).count();
            CHECK(neg == (c.kind == CriticalKind::Sink ? 0 : c.kind == CriticalKind::Saddle ? 1 : 2));
            // Exchange partner with the same potential value.
            bool partner = false;
            for (const auto& d : pts) {
                if ((d.position - Eigen::Vector2d(c.position(1), c.position(0))).norm() < 1e-8) {
                    partner = true;
                    CHECK_THAT(d.value, WithinAbs(c.value, 1e-12));
                }
            }
            CHECK(partner);
        }
    }

    CriticalSearchOptions prune;
    prune.prune_symmetric = true;
    CHECK(find_critical_points_2node(kP, 0.01, prune).size() == 6);

    CriticalSearchOptions dense;
    dense.seed_grid = 80;
    const auto ref = find_critical_points_2node(kP, 0.01, dense);
    REQUIRE(ref.size() == weak.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK((ref[k].position - weak[k].position).norm() < 1e-10);
}

TEST_CASE("bifurcation detection", "[twonode]") {
    const auto scan = detect_bifurcations(kP, 1e-3, 1.0, 31);
    CHECK_THAT(scan.beta_sn, WithinAbs(kBetaSN, 1e-9));
    CHECK_THAT(scan.beta_pf, WithinAbs(kBetaPF, 1e-9));
    CHECK_THAT(scan.beta_sn, WithinAbs(0.0154297, 1e-4));
    CHECK_THAT(scan.beta_pf, WithinAbs(0.164917, 1e-4));
    CHECK_THAT(scan.beta_pf, WithinAbs(0.329834 / 2, 1e-6));
    CHECK(scan.regime(0.01) == CouplingRegime::Weak);
    CHECK(scan.regime(0.1) == CouplingRegime::Intermediate);
    CHECK(scan.regime(1.0) == CouplingRegime::Strong);
    for (std::size_t k = 0; k < scan.beta_grid.size(); ++k) {
        const auto expected = scan.regime(scan.beta_grid[k]) == CouplingRegime::Weak           ? 9u
                              : scan.regime(scan.beta_grid[k]) == CouplingRegime::Intermediate ? 5u
                                                                                               : 3u;
        CHECK(scan.branches[k].size() == expected);
    }
    // Across the events the counts drop by four and two.
    CHECK(find_critical_points_2node(kP, kBetaSN - 1e-5).size() == 9);
    CHECK(find_critical_points_2node(kP, kBetaSN + 1e-5).size() == 5);
    CHECK(find_critical_points_2node(kP, kBetaPF - 1e-4).size() == 5);
    CHECK(find_critical_points_2node(kP, kBetaPF + 1e-4).size() == 3);
    CHECK(transverse_eigenvalue(kP, kBetaPF - 1e-4) < 0);
    CHECK(transverse_eigenvalue(kP, kBetaPF + 1e-4) > 0);
    CHECK_THROWS_AS(detect_bifurcations(kP, 0.02, 1.0, 11), DomainError);
    CHECK_THROWS_AS(detect_bifurcations(kP, 1e-3, 0.1, 11), DomainError);
}

TEST_CASE("transverse eigenvalue model", "[twonode]") {
    for (double beta : {0.2, 0.5, 1.0}) {
        CHECK_THAT(transverse_eigenvalue(kP, beta), WithinRel(2 * beta - 0.329834, 0.02));
    }
}

TEST_CASE("Eyring-Kramers first and second escapes", "[twonode]") {
    const auto f0 = first_escape_ek(kP, 0.0);
    CHECK_THAT(f0.value, WithinRel(kEkFirst0, 1e-8));
    CHECK_THAT(f0.value, WithinRel(kramers_1d(0.2, 0.05).value / 2, 1e-6));
    CHECK(f0.meta.at("gates") == 2.0);
    CHECK_THAT(first_escape_ek(kP, 0.1).value, WithinRel(kEkFirst01, 1e-8));
    CHECK(first_escape_ek(kP, 1.0).meta.at("gates") == 1.0);
    CHECK_THAT(second_escape_ek(kP, 0.001).value, WithinRel(kEkSecond0001, 1e-8));
    CHECK_THROWS_AS(second_escape_ek(kP, 0.05), DomainError);
}

TEST_CASE("quartic coefficient", "[twonode]") {
    CHECK_THAT(quartic_coefficient(kP), WithinRel(kC4, 1e-4));
    const double a2 = potential_1d_curvature(*radial_equilibria(kP).r_c, kP);
    const double a3 = potential_1d_third(*radial_equilibria(kP).r_c, kP);
    const double a4 = potential_1d_fourth(*radial_equilibria(kP).r_c, kP);
    CHECK_THAT(quartic_coefficient(kP), WithinRel(a4 / 48 - a3 * a3 / (16 * a2), 1e-4));
}

TEST_CASE("pitchfork-corrected first escape", "[twonode]") {
    const auto bg = psi_berglund_gentz();
    // Away from the bifurcation the correction disappears.
    CHECK_THAT(first_escape_pitchfork(kP, 0.05, bg).value / first_escape_ek(kP, 0.05).value, WithinAbs(1.0, 0.10));
    CHECK_THAT(first_escape_pitchfork(kP, 1.0, bg).value / first_escape_ek(kP, 1.0).value, WithinAbs(1.0, 0.10));
    // Continuity across the pitchfork.
    const double below = first_escape_pitchfork(kP, kBetaPF - 1e-3, bg).value;
    const double above = first_escape_pitchfork(kP, kBetaPF + 1e-3, bg).value;
    CHECK(std::abs(above / below - 1.0) < 0.05);
    // Monotone increasing in beta without a singularity.
    double prev = 0.0;
    for (double beta : {0.01, 0.02, 0.05, 0.1, 0.15, 0.16, 0.17, 0.2, 0.5, 1.0}) {
        const double t = first_escape_pitchfork(kP, beta, bg).value;
        CHECK(std::isfinite(t));
        CHECK(t > prev);
        prev = t;
    }
    // With the default Psi the law stays finite on both branches.
    CHECK(std::isfinite(first_escape_pitchfork(kP, 0.1).value));
    CHECK(std::isfinite(first_escape_pitchfork(kP, 0.3).value));
}

TEST_CASE("unstable manifold passage", "[twonode]") {
    const double base = unstable_manifold_passage(kP, 0.0155, 0.5);
    CHECK(std::isfinite(base));
    CHECK_THAT(base, WithinRel(296.345297, 1e-4));
    double prev = base;
    for (double beta : {0.02, 0.04, 0.07, 0.1, 0.13, 0.16}) {
        const double t = unstable_manifold_passage(kP, beta, 0.5);
        CHECK(t < prev);
        prev = t;
    }
    for (double offset : {1e-7, 1e-5}) {
        CHECK_THAT(unstable_manifold_passage(kP, 0.05, 0.5, offset),
                   WithinRel(unstable_manifold_passage(kP, 0.05, 0.5), 5e-3));
    }
    CHECK_THROWS_AS(unstable_manifold_passage(kP, 0.01, 0.5), DomainError);
    CHECK_THROWS_AS(unstable_manifold_passage(kP, 0.3, 0.5), DomainError);
}

TEST_CASE("synchrony fluctuation estimate", "[twonode]") {
    CHECK_THAT(radial_drift(0.5, kP), WithinAbs(0.12125, 1e-12));
    CHECK_THAT(sync_fluctuation_estimate(kP, 1.0, 0.5), WithinRel(kSync1, 1e-9));
    CHECK_THAT(sync_fluctuation_estimate(kP, 1.0, 0.5), WithinRel(0.4513, 1e-3));
    CHECK_THROWS_AS(sync_fluctuation_estimate(kP, 0.1, 0.5), DomainError);
}
