#include "seqesc/special.hpp"

#include "seqesc/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace seqesc::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Beyond this argument exp(x) overflows long before the scaled value does.
constexpr double kScaledSwitch = 600.0;

void require_nonnegative(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("Bessel argument must be finite and >= 0");
}

// sum_k s^k a_k(nu) / x^k with a_k = prod_{m=1..k} (4nu^2 - (2m-1)^2) / (k! 8^k),
// truncated at the smallest term.
double hankel_sum(double nu, double x, double s) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= s * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(term) >= prev) break;
        sum += term;
        prev = std::abs(term);
        if (prev < kEps * std::abs(sum)) break;
    }
    return sum;
}

} // namespace

double bessel_i(double nu, double x) {
    require_nonnegative(x);
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return boost::math::cyl_bessel_i(nu, x);
}

double bessel_i_scaled(double nu, double x) {
    require_nonnegative(x);
    if (x <= kScaledSwitch) return std::exp(-x) * bessel_i(nu, x);
    // The exp(-2x) K_nu term separating I_{-nu} from I_nu is far below double precision.
    return hankel_sum(nu, x, -1.0) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_j(double nu, double x) {
    require_nonnegative(x);
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    return boost::math::cyl_bessel_j(nu, x);
}

double bessel_k(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("K_nu requires a finite argument > 0");
    return boost::math::cyl_bessel_k(nu, x);
}

double bessel_k_scaled(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("K_nu requires a finite argument > 0");
    if (x <= kScaledSwitch) return std::exp(x) * boost::math::cyl_bessel_k(nu, x);
    return hankel_sum(nu, x, 1.0) * std::sqrt(std::numbers::pi / (2.0 * x));
}

} // namespace seqesc::special
