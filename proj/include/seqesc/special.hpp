#pragma once

// Bessel functions of real (fractional) order for real non-negative arguments.
// Thin wrappers over Boost.Math; the exponentially scaled forms switch to the
// Hankel expansions where exp(+-x) would leave the double range.

namespace seqesc::special {

/// Modified Bessel function of the first kind I_nu(x), x >= 0.
double bessel_i(double nu, double x);
/// exp(-x) I_nu(x).
double bessel_i_scaled(double nu, double x);

/// Bessel function of the first kind J_nu(x), x >= 0.
double bessel_j(double nu, double x);

/// Modified Bessel function of the second kind K_nu(x), x > 0.
double bessel_k(double nu, double x);
/// exp(x) K_nu(x).
double bessel_k_scaled(double nu, double x);

} // namespace seqesc::special
