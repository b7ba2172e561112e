#include "seqesc/special.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace seqesc::special;

namespace {

enum class Kind { I, J, K };

struct Reference {
    Kind kind;
    double order;
    double x;
    double value;
};

// tests/oracles/bessel_reference.py (mpmath, 40 digits).
constexpr Reference kReference[] = {
    {Kind::I, 0.25, 0.00015625, 0.10372332398255744},
    {Kind::I, 0.25, 3.90625e-05, 0.07334346541953588},
    {Kind::I, 0.25, 0.01, 0.29337972909844187},
    {Kind::I, 0.25, 0.5, 0.81967596598872946},
    {Kind::I, 0.25, 2.0, 2.2033544516736299},
    {Kind::I, 0.25, 8.0, 425.77530467377249},
    {Kind::I, 0.25, 30.0, 780844410621.82163},
    {Kind::I, -0.25, 0.00015625, 8.6799795196630595},
    {Kind::I, -0.25, 3.90625e-05, 12.275344664174754},
    {Kind::I, -0.25, 0.01, 3.0689384597522913},
    {Kind::I, -0.25, 0.5, 1.2519701939928325},
    {Kind::I, -0.25, 2.0, 2.2552929242585873},
    {Kind::I, -0.25, 8.0, 425.77537085247924},
    {Kind::I, -0.25, 30.0, 780844410621.82163},
    {Kind::J, 0.25, 0.00015625, 0.10372332296963436},
    {Kind::J, 0.25, 3.90625e-05, 0.073343465374770581},
    {Kind::J, 0.25, 0.01, 0.29336799414397816},
    {Kind::J, 0.25, 0.5, 0.74165657015714606},
    {Kind::J, 0.25, 2.0, 0.39781106433817835},
    {Kind::J, 0.25, 8.0, 0.24363311985307725},
    {Kind::J, 0.25, 30.0, -0.12460443000880375},
    {Kind::K, 0.25, 0.00015625, 19.051651162531941},
    {Kind::K, 0.25, 3.90625e-05, 27.106031468668746},
    {Kind::K, 0.25, 0.01, 6.1657412641392401},
    {Kind::K, 0.25, 0.5, 0.96031632493188602},
    {Kind::K, 0.25, 2.0, 0.11537827684085676},
    {Kind::K, 0.25, 8.0, 0.00014701212355227993},
    {Kind::K, 0.25, 30.0, 2.1346641833090355e-14},
};

} // namespace

TEST_CASE("Bessel functions against arbitrary-precision references", "[special]") {
    for (const auto& r : kReference) {
        double v = 0.0;
        switch (r.kind) {
        case Kind::I: v = bessel_i(r.order, r.x); break;
        case Kind::J: v = bessel_j(r.order, r.x); break;
        case Kind::K: v = bessel_k(r.order, r.x); break;
        }
        INFO("kind " << static_cast<int>(r.kind) << " order " << r.order << " x " << r.x);
        CHECK_THAT(v, Catch::Matchers::WithinRel(r.value, 1e-10));
    }
}

TEST_CASE("scaled Bessel forms and identities", "[special]") {
    for (double x : {0.01, 1.0, 7.5, 40.0, 300.0}) {
        if (x < 100.0) {
            CHECK_THAT(bessel_i_scaled(0.25, x), Catch::Matchers::WithinRel(std::exp(-x) * bessel_i(0.25, x), 1e-12));
            CHECK_THAT(bessel_k_scaled(0.25, x), Catch::Matchers::WithinRel(std::exp(x) * bessel_k(0.25, x), 1e-12));
        }
        // K_nu = pi/2 (I_{-nu} - I_nu) / sin(nu pi), in scaled form.
        const double lhs = bessel_k_scaled(0.25, x);
        const double rhs = std::numbers::pi / 2 * std::exp(2 * x) *
                           (bessel_i_scaled(-0.25, x) - bessel_i_scaled(0.25, x)) / std::sin(0.25 * std::numbers::pi);
        if (x < 20.0) CHECK_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-9));
        // Large-x behaviour of the scaled forms.
        if (x >= 40.0) {
            CHECK_THAT(bessel_i_scaled(0.25, x) * std::sqrt(2 * std::numbers::pi * x), Catch::Matchers::WithinRel(1.0, 0.01));
            CHECK_THAT(bessel_k_scaled(0.25, x) * std::sqrt(2 * x / std::numbers::pi), Catch::Matchers::WithinRel(1.0, 0.01));
        }
    }
    CHECK(bessel_i(0.25, 0.0) == 0.0);
    CHECK(bessel_j(0.25, 0.0) == 0.0);
}
