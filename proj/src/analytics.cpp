#include "seqesc/analytics.hpp"

#include "seqesc/errors.hpp"
#include "seqesc/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace seqesc {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kMaxExponent = 700.0;
constexpr unsigned kMaxDepth = 30;
constexpr double kInnerRelTol = 1e-11;
constexpr double kAbsFloor = 1e-12;

void require_alpha_positive(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("noise amplitude alpha must be > 0 (got " + std::to_string(alpha) + ")");
    }
}

void require_xi_positive(double xi) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("threshold xi must be > 0");
}

// g(s) = nu s^2 - s^4 + s^6/3 = 2 V_0(s), the log-free radial potential doubled.
double doubled_potential(double s, double nu) {
    const double s2 = s * s;
    return nu * s2 - s2 * s2 + s2 * s2 * s2 / 3.0;
}

// max over 0 <= y <= x <= xi of g(x) - g(y), sampled on a fine grid.
double max_exponent_numerator(double nu, double xi) {
    constexpr int kGrid = 4000;
    double running_min = 0.0;
    double best = 0.0;
    for (int k = 0; k <= kGrid; ++k) {
        const double s = xi * k / kGrid;
        const double g = doubled_potential(s, nu);
        running_min = std::min(running_min, g);
        best = std::max(best, g - running_min);
    }
    return best;
}

// (e^s - 1) / s with the removable singularity at s = 0.
double exprel(double s) {
    if (std::abs(s) < 1e-4) return 1.0 + s * (0.5 + s / 6.0);
    return std::expm1(s) / s;
}

template <class F>
double integrate(F f, double a, double b, double rel_tol, double* error) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, rel_tol, &err, &l1);
    if (error) *error = err;
    return v;
}

void check_bound_exponent(double nu, double alpha, double qmax, double cubic) {
    constexpr int kGrid = 4000;
    double best = 0.0;
    for (int k = 0; k <= kGrid; ++k) {
        const double q = qmax * k / kGrid;
        best = std::max(best, q * (nu - q + cubic * q * q));
    }
    if (best / (alpha * alpha) > kMaxExponent) {
        throw NumericalError("bound integrand exponent exceeds 700; use laplace_bounds instead");
    }
}

// 2 pi sqrt((mu + s) / (|mu_neg| det_min)) e^{dV/eps} / psi(mu / s)
double pitchfork_branch(double mu_pos, double mu_neg, double det_min, double barrier,
                        double epsilon, double scale, const std::function<double(double)>& psi) {
    const double gamma = mu_pos / scale;
    const double psi_v = psi(gamma);
    if (!(psi_v > 0.0) || !std::isfinite(psi_v)) {
        throw NumericalError("Psi correction is not positive and finite (gamma=" +
                             std::to_string(gamma) + ")");
    }
    return 2.0 * std::numbers::pi * std::sqrt((mu_pos + scale) / (std::abs(mu_neg) * det_min)) *
           std::exp(barrier / epsilon) / psi_v;
}

} // namespace

const char* to_string(EscapeMethod m) {
    switch (m) {
    case EscapeMethod::Quadrature: return "quadrature";
    case EscapeMethod::Lower: return "lower";
    case EscapeMethod::Upper: return "upper";
    case EscapeMethod::LaplaceLower: return "laplace_lower";
    case EscapeMethod::LaplaceUpper: return "laplace_upper";
    case EscapeMethod::Kramers1D: return "kramers1d";
    case EscapeMethod::EyringKramers: return "ek_nd";
    case EscapeMethod::PitchforkCorrected: return "bg_pitchfork";
    case EscapeMethod::Limit: return "limit";
    }
    return "?";
}

EscapeEstimate mean_escape_quadrature(double nu, double alpha, double xi) {
    require_alpha_positive(alpha);
    require_xi_positive(xi);
    const double a2 = alpha * alpha;
    const double max_exp = max_exponent_numerator(nu, xi) / a2;
    if (max_exp > kMaxExponent) {
        throw NumericalError("first-passage integrand exponent " + std::to_string(max_exp) +
                             " exceeds 700; use laplace_bounds or kramers_1d instead");
    }

    double inner_err_max = 0.0;
    auto inner = [&](double x) {
        if (x <= 0.0) return 0.0;
        const double gx = doubled_potential(x, nu);
        auto integrand = [&](double y) {
            return (y / x) * std::exp((gx - doubled_potential(y, nu)) / a2);
        };
        double err = 0.0;
        const double v = integrate(integrand, 0.0, x, kInnerRelTol, &err);
        inner_err_max = std::max(inner_err_max, err / std::max(std::abs(v), kAbsFloor));
        return v;
    };
    double outer_err = 0.0;
    const double outer = integrate(inner, 0.0, xi, kQuadratureRelTol * 0.1, &outer_err);

    EscapeEstimate est;
    est.method = EscapeMethod::Quadrature;
    est.value = 2.0 / a2 * outer;
    const double rel_err = outer_err / std::max(std::abs(outer), kAbsFloor) + inner_err_max;
    est.meta["error_estimate"] = rel_err * est.value;
    est.meta["relative_error_estimate"] = rel_err;
    est.meta["max_exponent"] = max_exp;
    if (!(rel_err < kQuadratureRelTol) || !(est.value > 0.0)) {
        throw NumericalError("quadrature did not reach the requested tolerance (rel err " +
                             std::to_string(rel_err) + ")");
    }
    return est;
}

std::pair<EscapeEstimate, EscapeEstimate> escape_bounds(double nu, double alpha, double xi) {
    require_alpha_positive(alpha);
    require_xi_positive(xi);
    const double a2 = alpha * alpha;
    const double ql = xi * xi;
    const double qu = 2.0 * xi * xi;
    check_bound_exponent(nu, alpha, ql, 0.25);
    check_bound_exponent(nu, alpha, qu, 1.0 / 3.0);

    auto lower_integrand = [&](double q) {
        return exprel(q * (nu - q + 0.25 * q * q) / a2) / (4.0 * a2);
    };
    auto upper_integrand = [&](double q) {
        return exprel(q * (nu - q + q * q / 3.0) / a2) / (2.0 * a2);
    };

    EscapeEstimate lo, up;
    double err = 0.0;
    lo.method = EscapeMethod::Lower;
    lo.value = integrate(lower_integrand, 0.0, ql, 1e-12, &err);
    lo.meta["error_estimate"] = err * lo.value;
    up.method = EscapeMethod::Upper;
    up.value = integrate(upper_integrand, 0.0, qu, 1e-12, &err);
    up.meta["error_estimate"] = err * up.value;
    return {lo, up};
}

double laplace_lower_centre(double nu) { return (4.0 - 2.0 * std::sqrt(4.0 - 3.0 * nu)) / 3.0; }

double laplace_upper_centre(double nu) { return 1.0 - std::sqrt(1.0 - nu); }

std::pair<EscapeEstimate, EscapeEstimate> laplace_bounds(double nu, double alpha, double xi) {
    require_alpha_positive(alpha);
    require_xi_positive(xi);
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("laplace_bounds requires 0 < nu < 1");
    const double cl = laplace_lower_centre(nu);
    const double cu = laplace_upper_centre(nu);
    if (!(cl < xi * xi) || !(cu < 2.0 * xi * xi)) {
        throw DomainError("Laplace centre lies outside the integration range; increase xi");
    }
    const double a2 = alpha * alpha;

    const double fl = 1.0 / (4.0 * cl * (nu - cl + 0.25 * cl * cl));
    const double gl = cl * (-nu + cl - 0.25 * cl * cl);
    const double gl2 = 2.0 - 1.5 * cl;
    const double fu = 1.0 / (2.0 * cu * (nu - cu + cu * cu / 3.0));
    const double gu = cu * (-nu + cu - cu * cu / 3.0);
    const double gu2 = 2.0 - 2.0 * cu;

    EscapeEstimate lo, up;
    lo.method = EscapeMethod::LaplaceLower;
    lo.value = fl * std::sqrt(2.0 * std::numbers::pi * a2 / std::abs(gl2)) * std::exp(-gl / a2);
    lo.meta["centre"] = cl;
    up.method = EscapeMethod::LaplaceUpper;
    up.value = fu * std::sqrt(2.0 * std::numbers::pi * a2 / std::abs(gu2)) * std::exp(-gu / a2);
    up.meta["centre"] = cu;
    return {lo, up};
}

double kramers_time(double barrier, double curvature_min, double curvature_gate, double epsilon) {
    if (!(curvature_min > 0.0) || !(curvature_gate < 0.0)) {
        throw DomainError("Kramers law needs a minimum (V''>0) and a gate (V''<0)");
    }
    const double exponent = barrier / epsilon;
    if (exponent > kMaxExponent) throw NumericalError("Kramers exponent exceeds 700");
    return 2.0 * std::numbers::pi / std::sqrt(std::abs(curvature_gate) * curvature_min) *
           std::exp(exponent);
}

namespace {

struct RadialWell {
    double r_min, r_c, barrier, curv_min, curv_gate;
};

RadialWell radial_well(double nu, double alpha) {
    require_alpha_positive(alpha);
    const NodeParams p{nu, 0.0, alpha};
    const auto eq = radial_equilibria(p);
    if (!eq.bistable()) {
        throw DomainError("radial potential is not bistable at nu=" + std::to_string(nu) +
                          ", alpha=" + std::to_string(alpha));
    }
    RadialWell w;
    w.r_min = *eq.r_min;
    w.r_c = *eq.r_c;
    w.barrier = potential_1d(w.r_c, p) - potential_1d(w.r_min, p);
    w.curv_min = potential_1d_curvature(w.r_min, p);
    w.curv_gate = potential_1d_curvature(w.r_c, p);
    return w;
}

} // namespace

EscapeEstimate kramers_1d(double nu, double alpha, double /*xi*/) {
    const auto w = radial_well(nu, alpha);
    EscapeEstimate est;
    est.method = EscapeMethod::Kramers1D;
    est.value = kramers_time(w.barrier, w.curv_min, w.curv_gate, 0.5 * alpha * alpha);
    est.meta["r_min"] = w.r_min;
    est.meta["r_c"] = w.r_c;
    est.meta["barrier"] = w.barrier;
    est.meta["curvature_min"] = w.curv_min;
    est.meta["curvature_gate"] = w.curv_gate;
    return est;
}

EscapeEstimate kramers_synchronised(double nu, double alpha) {
    const auto w = radial_well(nu, alpha);
    EscapeEstimate est;
    est.method = EscapeMethod::EyringKramers;
    // On the diagonal the two-node potential is twice the radial one; as beta grows the
    // transverse curvatures cancel in the determinant ratio.
    est.value = kramers_time(2.0 * w.barrier, w.curv_min, w.curv_gate, 0.5 * alpha * alpha);
    est.meta["barrier"] = 2.0 * w.barrier;
    return est;
}

SaddleData saddle_data(const CriticalPoint2D& min, const CriticalPoint2D& saddle) {
    if (min.kind != CriticalKind::Sink) throw DomainError("escape must start from a sink");
    if (saddle.kind != CriticalKind::Saddle) throw DomainError("gate must be a saddle");
    SaddleData d;
    d.location = saddle;
    d.barrier = saddle.value - min.value;
    d.unstable_eig = saddle.eigenvalues(0);
    d.stable_eigs = saddle.eigenvalues.tail(1);
    d.det_min = min.eigenvalues.prod();
    if (!(d.barrier > 0.0)) throw DomainError("saddle lies below the minimum");
    return d;
}

EscapeEstimate eyring_kramers_2d(const CriticalPoint2D& min, const CriticalPoint2D& saddle,
                                 double alpha) {
    require_alpha_positive(alpha);
    const auto d = saddle_data(min, saddle);
    if (std::abs(d.unstable_eig) < 1e-6) {
        throw NumericalError("saddle near bifurcation; use bg_pitchfork");
    }
    const double epsilon = 0.5 * alpha * alpha;
    const double exponent = d.barrier / epsilon;
    if (exponent > kMaxExponent) throw NumericalError("Eyring-Kramers exponent exceeds 700");
    const double det_saddle = saddle.eigenvalues.prod();
    EscapeEstimate est;
    est.method = EscapeMethod::EyringKramers;
    est.value = 2.0 * std::numbers::pi / std::abs(d.unstable_eig) *
                std::sqrt(std::abs(det_saddle) / d.det_min) * std::exp(exponent);
    est.meta["barrier"] = d.barrier;
    est.meta["lambda1"] = d.unstable_eig;
    est.meta["lambda2"] = saddle.eigenvalues(1);
    est.meta["det_min"] = d.det_min;
    return est;
}

PsiFunctions psi_alpha_argument(double alpha) {
    using special::bessel_i;
    using special::bessel_j;
    const double x_plus = alpha * alpha / 16.0;
    const double x_minus = alpha * alpha / 64.0;
    const double c_plus = std::exp(x_plus) * bessel_j(0.25, x_plus);
    const double c_minus = std::exp(-x_minus) * (bessel_i(-0.25, x_minus) + bessel_i(0.25, x_minus));
    PsiFunctions psi;
    psi.plus = [c_plus](double g) { return std::sqrt(g * (1.0 + g) / (8.0 * std::numbers::pi)) * c_plus; };
    psi.minus = [c_minus](double g) { return std::sqrt(std::numbers::pi * g * (1.0 + g) / 32.0) * c_minus; };
    return psi;
}

PsiFunctions psi_berglund_gentz() {
    using special::bessel_i_scaled;
    using special::bessel_k_scaled;
    // Common gamma -> 0 limit of both functions.
    const double at_zero = std::tgamma(0.25) * std::pow(32.0, 0.25) /
                           (2.0 * std::sqrt(8.0 * std::numbers::pi));
    PsiFunctions psi;
    psi.plus = [at_zero](double g) {
        if (g < 1e-12) return at_zero;
        const double x = g * g / 16.0;
        return std::sqrt(g * (1.0 + g) / (8.0 * std::numbers::pi)) * bessel_k_scaled(0.25, x);
    };
    psi.minus = [at_zero](double g) {
        if (g < 1e-12) return at_zero;
        const double x = g * g / 64.0;
        return std::sqrt(std::numbers::pi * g * (1.0 + g) / 32.0) *
               (bessel_i_scaled(-0.25, x) + bessel_i_scaled(0.25, x));
    };
    return psi;
}

EscapeEstimate bg_pitchfork(const CriticalPoint2D& min, std::span<const CriticalPoint2D> saddles,
                            double alpha, double c4, const PsiFunctions& psi) {
    require_alpha_positive(alpha);
    if (!(c4 > 0.0)) throw DomainError("quartic coefficient C4 must be > 0");
    if (saddles.empty() || saddles.size() > 2) {
        throw DomainError("bg_pitchfork takes one synchronised saddle or two symmetric saddles");
    }
    const double epsilon = 0.5 * alpha * alpha;
    const double scale = std::sqrt(2.0 * epsilon * c4);
    const auto d = saddle_data(min, saddles.front());
    if (d.barrier / epsilon > kMaxExponent) throw NumericalError("pitchfork exponent exceeds 700");

    EscapeEstimate est;
    est.method = EscapeMethod::PitchforkCorrected;
    const double mu_neg = saddles.front().eigenvalues(0);
    const double mu_pos = saddles.front().eigenvalues(1);
    if (saddles.size() == 2) {
        const auto d2 = saddle_data(min, saddles.back());
        if (std::abs(d2.barrier - d.barrier) > 1e-8 * std::max(1.0, std::abs(d.barrier))) {
            throw DomainError("the two saddles below the pitchfork must be symmetric");
        }
        est.value = pitchfork_branch(mu_pos, mu_neg, d.det_min, d.barrier, epsilon, scale, psi.minus);
        est.meta["branch"] = -1.0;
    } else {
        est.value = pitchfork_branch(mu_pos, mu_neg, d.det_min, d.barrier, epsilon, scale, psi.plus);
        est.meta["branch"] = 1.0;
    }
    est.meta["gamma"] = mu_pos / scale;
    est.meta["scale"] = scale;
    est.meta["barrier"] = d.barrier;
    return est;
}

EscapeEstimate bg_pitchfork(const CriticalPoint2D& min, std::span<const CriticalPoint2D> saddles,
                            double alpha, double c4) {
    return bg_pitchfork(min, saddles, alpha, c4, psi_alpha_argument(alpha));
}

CouplingLimits coupling_limits(double nu, double alpha, double xi) {
    const auto single = mean_escape_quadrature(nu, alpha, xi);
    const auto sync = mean_escape_quadrature(nu, alpha / std::numbers::sqrt2, xi);
    CouplingLimits lim;
    lim.synchronised = sync;
    lim.synchronised.method = EscapeMethod::Limit;
    lim.uncoupled_first.method = EscapeMethod::Limit;
    lim.uncoupled_first.value = single.value / 2.0;
    lim.uncoupled_second = single;
    lim.uncoupled_second.method = EscapeMethod::Limit;
    lim.unidirectional.method = EscapeMethod::Limit;
    lim.unidirectional.value = single.value * sync.value / (single.value + sync.value);
    return lim;
}

Calibration calibrate_AB(double nu, double alpha, double xi) {
    const double alpha_sync = alpha / std::numbers::sqrt2;
    if (!bistable_radial({nu, 0.0, alpha}) || !bistable_radial({nu, 0.0, alpha_sync})) {
        throw DomainError("calibration needs (nu, alpha) and (nu, alpha/sqrt 2) to be bistable");
    }
    Calibration c;
    c.k_uncoupled = kramers_1d(nu, alpha).value / 2.0;
    c.k_synchronised = kramers_synchronised(nu, alpha).value;
    c.t_uncoupled = mean_escape_quadrature(nu, alpha, xi).value / 2.0;
    c.t_synchronised = mean_escape_quadrature(nu, alpha_sync, xi).value;
    const double dk = c.k_synchronised - c.k_uncoupled;
    if (std::abs(dk) < 1e-12 * std::max(1.0, std::abs(c.k_synchronised))) {
        throw NumericalError("degenerate calibration: Kramers times coincide");
    }
    c.a = (c.t_synchronised - c.t_uncoupled) / dk;
    c.b = c.t_uncoupled - c.a * c.k_uncoupled;
    return c;
}

double suggested_horizon(double nu, double alpha, double xi, bool coupled) {
    double t = mean_escape_quadrature(nu, alpha, xi).value;
    if (coupled) t = std::max(t, mean_escape_quadrature(nu, alpha / std::numbers::sqrt2, xi).value);
    return 100.0 * t;
}

} // namespace seqesc
