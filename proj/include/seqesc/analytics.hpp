#pragma once

// Mean escape times: exact quadrature of the first-passage integral, rigorous
// bounds and their Laplace asymptotics, Kramers / Eyring-Kramers laws, the
// pitchfork-corrected law, coupling limits and the linear calibration T ~ A T_K + B.

#include "seqesc/model.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>

namespace seqesc {

enum class EscapeMethod {
    Quadrature,
    Lower,
    Upper,
    LaplaceLower,
    LaplaceUpper,
    Kramers1D,
    EyringKramers,
    PitchforkCorrected,
    Limit,
};

const char* to_string(EscapeMethod m);

struct EscapeEstimate {
    double value = 0.0;
    EscapeMethod method = EscapeMethod::Quadrature;
    std::map<std::string, double> meta;
};

struct SaddleData {
    CriticalPoint2D location;
    double barrier = 0.0;
    double unstable_eig = 0.0;
    Eigen::VectorXd stable_eigs;
    double det_min = 0.0;
};

/// Relative tolerance of the nested quadrature.
inline constexpr double kQuadratureRelTol = 1e-8;

/// T(nu, alpha) for a start at the origin and threshold xi, by nested adaptive
/// Gauss-Kronrod quadrature. Refuses with NumericalError if the integrand
/// exponent could exceed 700.
EscapeEstimate mean_escape_quadrature(double nu, double alpha, double xi);

/// (T_l, T_u) with T_l < T < T_u.
std::pair<EscapeEstimate, EscapeEstimate> escape_bounds(double nu, double alpha, double xi);

/// Minimisers of g_l on [0, xi^2] and g_u on [0, 2 xi^2].
double laplace_lower_centre(double nu);
double laplace_upper_centre(double nu);

/// Leading-order Laplace estimates of (T_l, T_u) as alpha -> 0.
std::pair<EscapeEstimate, EscapeEstimate> laplace_bounds(double nu, double alpha, double xi);

/// 2 pi / sqrt(|V''_gate| V''_min) * exp(barrier / epsilon).
double kramers_time(double barrier, double curvature_min, double curvature_gate, double epsilon);

/// One-dimensional Kramers law on the alpha-dependent radial potential. Independent of xi.
EscapeEstimate kramers_1d(double nu, double alpha, double xi = 0.5);

/// Limit beta -> infinity of the synchronised-saddle Eyring-Kramers time of two
/// nodes: the radial Kramers law with the barrier doubled and alpha kept in the potential.
EscapeEstimate kramers_synchronised(double nu, double alpha);

SaddleData saddle_data(const CriticalPoint2D& min, const CriticalPoint2D& saddle);

/// Eyring-Kramers time over one saddle with epsilon = alpha^2 / 2.
EscapeEstimate eyring_kramers_2d(const CriticalPoint2D& min, const CriticalPoint2D& saddle,
                                 double alpha);

/// The Psi_+ / Psi_- correction functions of the pitchfork-corrected law.
struct PsiFunctions {
    std::function<double(double)> plus;
    std::function<double(double)> minus;
};

/// Default Psi_+-: Bessel arguments alpha^2/16 and alpha^2/64 (independent of gamma), J_{1/4} in Psi_+.
PsiFunctions psi_alpha_argument(double alpha);

/// Psi_+- with the Bessel arguments gamma^2/16 and gamma^2/64 and K_{1/4} in Psi_+.
/// Psi_+(gamma) -> 1 and Psi_-(gamma) -> 2 as gamma -> infinity, and the two
/// agree at gamma = 0.
PsiFunctions psi_berglund_gentz();

/// Pitchfork-corrected escape time with the error terms set to zero. Pass the
/// two symmetric saddles below the pitchfork or the single synchronised saddle above it.
EscapeEstimate bg_pitchfork(const CriticalPoint2D& min, std::span<const CriticalPoint2D> saddles,
                            double alpha, double c4, const PsiFunctions& psi);
EscapeEstimate bg_pitchfork(const CriticalPoint2D& min, std::span<const CriticalPoint2D> saddles,
                            double alpha, double c4);

struct CouplingLimits {
    EscapeEstimate synchronised;     ///< T(nu, alpha/sqrt 2): strong bidirectional T^{1|0}
    EscapeEstimate uncoupled_first;  ///< T(nu, alpha)/2: uncoupled T^{1|0}
    EscapeEstimate uncoupled_second; ///< T(nu, alpha): uncoupled T^{2|1}
    EscapeEstimate unidirectional;   ///< harmonic combination: strong unidirectional T^{1|0}
};

CouplingLimits coupling_limits(double nu, double alpha, double xi);

struct Calibration {
    double a = 0.0;
    double b = 0.0;
    double k_uncoupled = 0.0;    ///< Eyring-Kramers T^{1|0} at beta = 0, i.e. T_K / 2
    double k_synchronised = 0.0; ///< Eyring-Kramers T^{1|0} as beta -> infinity
    double t_uncoupled = 0.0;    ///< T(nu, alpha) / 2
    double t_synchronised = 0.0; ///< T(nu, alpha/sqrt 2)
};

/// A, B such that A K + B reproduces the two one-node limits of T^{1|0}.
Calibration calibrate_AB(double nu, double alpha, double xi = 0.5);

/// Simulation horizon: 100 times the slowest one-node limit relevant to the network.
double suggested_horizon(double nu, double alpha, double xi, bool coupled);

} // namespace seqesc
