#include "seqesc/analytics.hpp"
#include "seqesc/errors.hpp"
#include "seqesc/twonode.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace seqesc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kRc0 = std::sqrt(1.0 - std::sqrt(0.8));

// tests/oracles/escape_time_reference.py (mpmath, 30 digits).
constexpr double kT_Rc0 = 121.638475923083417720;
constexpr double kT_half = 193.015494930134898915;
constexpr double kT_sync = 7251.67858304846722967;
constexpr double kT_harmonic = 188.011262265514719368;
constexpr double kT_K = 178.855905208085552299;
constexpr double kK_sync = 1721.66102693132792711;

} // namespace

TEST_CASE("quadrature reproduces the reference integrals", "[analytics]") {
    const auto a = mean_escape_quadrature(0.2, 0.05, kRc0);
    CHECK(a.method == EscapeMethod::Quadrature);
    CHECK_THAT(a.value, WithinRel(kT_Rc0, 1e-8));
    CHECK_THAT(a.value, WithinRel(121.64, 5e-3));
    CHECK(a.meta.at("relative_error_estimate") < kQuadratureRelTol);
    CHECK_THAT(mean_escape_quadrature(0.2, 0.05, 0.5).value, WithinRel(kT_half, 1e-8));
    CHECK_THAT(mean_escape_quadrature(0.2, 0.05, 0.5).value, WithinRel(193.01, 5e-3));
    CHECK_THAT(mean_escape_quadrature(0.2, 0.05 / std::numbers::sqrt2, 0.5).value, WithinRel(kT_sync, 1e-8));
}

TEST_CASE("quadrature errors and refusals", "[analytics]") {
    CHECK_THROWS_AS(mean_escape_quadrature(0.2, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(mean_escape_quadrature(0.2, 0.05, 0.0), DomainError);
    CHECK_THROWS_AS(mean_escape_quadrature(0.6, 0.005, 0.5), NumericalError);
}

TEST_CASE("quadrature trends", "[analytics]") {
    const double t45 = mean_escape_quadrature(0.2, 0.05, 0.45).value;
    const double t55 = mean_escape_quadrature(0.2, 0.05, 0.55).value;
    CHECK(std::abs(t45 - t55) / kT_half < 0.02);
    double prev = 0.0;
    for (double nu : {0.2, 0.3, 0.4, 0.5}) {
        const double t = mean_escape_quadrature(nu, 0.08, 0.5).value;
        CHECK(t > prev);
        prev = t;
    }
    prev = 1e300;
    for (double alpha : {0.04, 0.06, 0.08, 0.1}) {
        const double t = mean_escape_quadrature(0.3, alpha, 0.5).value;
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("bounds sandwich the quadrature", "[analytics]") {
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double nu = 0.2 + 0.1 * i, alpha = 0.04 + 0.015 * j;
            const double xi = std::sqrt(1.0 - std::sqrt(1.0 - nu));
            const double t = mean_escape_quadrature(nu, alpha, xi).value;
            const auto [lo, up] = escape_bounds(nu, alpha, xi);
            INFO("nu " << nu << " alpha " << alpha);
            CHECK(lo.value < t * (1.0 - 10 * kQuadratureRelTol));
            CHECK(up.value > t * (1.0 + 10 * kQuadratureRelTol));
        }
    }
}

TEST_CASE("Laplace estimates of the bounds", "[analytics]") {
    CHECK_THAT(laplace_upper_centre(0.2), WithinAbs(0.105573, 1e-6));
    CHECK_THAT(laplace_lower_centre(0.2), WithinAbs(0.104060739, 1e-8));
    double prev_l = 1e9, prev_u = 1e9;
    for (double alpha : {0.05, 0.04, 0.03}) {
        const auto [lo, up] = escape_bounds(0.3, alpha, 0.5);
        const auto [llo, lup] = laplace_bounds(0.3, alpha, 0.5);
        const double el = std::abs(llo.value / lo.value - 1.0), eu = std::abs(lup.value / up.value - 1.0);
        CHECK(el < prev_l);
        CHECK(eu < prev_u);
        prev_l = el;
        prev_u = eu;
    }
    CHECK(prev_l < 0.2);
    CHECK(prev_u < 0.2);
    CHECK_THROWS_AS(laplace_bounds(1.2, 0.05, 0.5), DomainError);
    CHECK_THROWS_AS(laplace_bounds(0.2, 0.05, 0.2), DomainError);
}

TEST_CASE("one-node Kramers law", "[analytics]") {
    const auto k = kramers_1d(0.2, 0.05);
    CHECK_THAT(k.value, WithinRel(kT_K, 1e-10));
    CHECK(kramers_1d(0.2, 0.05, 0.4).value == kramers_1d(0.2, 0.05, 0.6).value);
    CHECK_THAT(kramers_synchronised(0.2, 0.05).value, WithinRel(kK_sync, 1e-10));
    // The radial well is not quadratic in R (the log term), so the ratio to the
    // quadrature tends to sqrt(pi) exp(-1/2) rather than one as alpha decreases.
    const double limit = std::sqrt(std::numbers::pi) * std::exp(-0.5);
    double prev = 1e9;
    for (double alpha : {0.05, 0.04, 0.03, 0.02}) {
        const double r = std::abs(kramers_1d(0.3, alpha).value / mean_escape_quadrature(0.3, alpha, 0.5).value - limit);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 0.01);
    // Doubling the barrier squares the exponential factor.
    const double pre = kramers_time(0.0, 1.0, -1.0, 0.1);
    CHECK_THAT(kramers_time(0.2, 1.0, -1.0, 0.1) / pre, WithinRel(std::pow(kramers_time(0.1, 1.0, -1.0, 0.1) / pre, 2), 1e-12));
    CHECK_THROWS_AS(kramers_1d(0.5, 0.3), DomainError);
}

TEST_CASE("coupling limits and calibration", "[analytics]") {
    const auto lim = coupling_limits(0.2, 0.05, 0.5);
    CHECK_THAT(lim.synchronised.value, WithinRel(kT_sync, 1e-8));
    CHECK(lim.uncoupled_first.value == lim.uncoupled_second.value / 2);
    CHECK_THAT(lim.uncoupled_first.value, WithinRel(96.51, 5e-3));
    CHECK_THAT(lim.uncoupled_second.value, WithinRel(193.01, 5e-3));
    CHECK_THAT(lim.unidirectional.value, WithinRel(kT_harmonic, 1e-8));
    CHECK_THAT(lim.unidirectional.value, WithinRel(188.01, 1e-2));

    const auto c = calibrate_AB(0.2, 0.05);
    CHECK_THAT(c.a, WithinRel(4.38, 0.05));
    CHECK_THAT(c.b, WithinRel(-295.0, 0.05));
    CHECK_THAT(c.a * c.k_uncoupled + c.b, WithinRel(c.t_uncoupled, 1e-12));
    CHECK_THAT(c.a * c.k_synchronised + c.b, WithinRel(c.t_synchronised, 1e-12));
    CHECK_THAT(c.k_uncoupled, WithinRel(kT_K / 2, 1e-10));
    CHECK_THROWS_AS(calibrate_AB(0.5, 0.3), DomainError);
    CHECK_THAT(suggested_horizon(0.2, 0.05, 0.5, true), WithinRel(100 * kT_sync, 1e-8));
    CHECK_THAT(suggested_horizon(0.2, 0.05, 0.5, false), WithinRel(100 * kT_half, 1e-8));
}

TEST_CASE("Psi correction functions", "[analytics]") {
    const auto bg = psi_berglund_gentz();
    CHECK_THAT(bg.plus(0.0), WithinRel(bg.minus(0.0), 1e-12));
    CHECK_THAT(bg.plus(1e-6), WithinRel(bg.plus(0.0), 1e-3));
    CHECK_THAT(bg.minus(1e-6), WithinRel(bg.minus(0.0), 1e-3));
    CHECK_THAT(bg.plus(1e4), WithinRel(1.0, 1e-3));
    CHECK_THAT(bg.minus(1e4), WithinRel(2.0, 1e-3));

    // The default form scales like sqrt(gamma (1 + gamma)) with alpha-dependent constants.
    const auto alpha_form = psi_alpha_argument(0.05);
    CHECK(alpha_form.plus(0.0) == 0.0);
    CHECK_THAT(alpha_form.plus(4.0) / alpha_form.plus(1.0), WithinRel(std::sqrt(10.0), 1e-12));
    CHECK_THAT(alpha_form.minus(4.0) / alpha_form.minus(1.0), WithinRel(std::sqrt(10.0), 1e-12));
}

TEST_CASE("Eyring-Kramers and pitchfork laws on the two-node potential", "[analytics]") {
    const NodeParams p{0.2, 0.0, 0.05};
    // Each gate at beta = 0 reproduces the one-node Kramers time.
    const auto gates = first_escape_gates(p, 0.0);
    REQUIRE(gates.gates.size() == 2);
    for (const auto& g : gates.gates) {
        CHECK_THAT(eyring_kramers_2d(gates.start, g, 0.05).value, WithinRel(kT_K, 1e-6));
    }
    const auto sd = saddle_data(gates.start, gates.gates[0]);
    CHECK(sd.barrier > 0);
    CHECK(sd.unstable_eig < 0);
    CHECK(sd.det_min > 0);
    CHECK_THROWS_AS(eyring_kramers_2d(gates.gates[0], gates.start, 0.05), DomainError);

    std::vector<CriticalPoint2D> one{gates.gates[0]};
    CHECK_THROWS_AS(bg_pitchfork(gates.start, one, 0.05, 0.0), DomainError);
    CHECK_THROWS_AS(bg_pitchfork(gates.start, one, 0.05, -1.0), DomainError);
}
