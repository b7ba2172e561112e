#pragma once

// Deterministic skeleton of the bistable node network: drifts, potentials,
// derivatives and equilibria. Everything here is a pure function.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace seqesc {

using Complex = std::complex<double>;

/// Single-node physics. The node is bistable for 0 < nu < 1 and small enough alpha.
struct NodeParams {
    double nu = 0.2;     ///< excitability
    double omega = 0.0;  ///< angular frequency
    double alpha = 0.05; ///< additive noise amplitude per real dimension

    /// Throws DomainError when alpha < 0 or a field is not finite.
    void validate() const;
};

/// Node count, binary adjacency and coupling strength.
///
/// Index convention: `influences(j, i)` is A_{ji}; when set, node j drives node i
/// through the term beta * (z_j - z_i) in node i's drift.
class NetworkSpec {
public:
    NetworkSpec(std::size_t n, std::vector<std::uint8_t> adjacency, double beta);

    static NetworkSpec all_to_all(std::size_t n, double beta);
    static NetworkSpec disconnected(std::size_t n);
    /// Two nodes, node 0 drives node 1 (A_{01}=1, A_{10}=0).
    static NetworkSpec unidirectional_pair(double beta);

    std::size_t size() const noexcept { return n_; }
    double beta() const noexcept { return beta_; }
    bool influences(std::size_t j, std::size_t i) const { return adjacency_[j * n_ + i] != 0; }
    /// Nodes j with A_{ji} = 1.
    const std::vector<std::size_t>& drivers_of(std::size_t i) const { return drivers_[i]; }

private:
    std::size_t n_;
    std::vector<std::uint8_t> adjacency_;
    double beta_;
    std::vector<std::vector<std::size_t>> drivers_;
};

/// Positive critical points of the radial potential. For alpha = 0 the inner
/// minimum is reported at R = 0 by convention.
struct RadialEquilibria {
    std::optional<double> r_min;
    std::optional<double> r_c;
    std::optional<double> r_max;

    bool bistable() const { return r_min && r_c && r_max; }
};

enum class CriticalKind { Sink, Saddle, Source };

const char* to_string(CriticalKind kind);

/// Critical point of the two-node potential restricted to phi = 0.
struct CriticalPoint2D {
    Eigen::Vector2d position;    ///< (R1, R2)
    double phi = 0.0;
    double value = 0.0;          ///< potential value
    Eigen::Vector2d eigenvalues; ///< ascending
    Eigen::Matrix2d eigenvectors;///< columns match eigenvalues
    CriticalKind kind = CriticalKind::Sink;
};

/// f(z) = (-nu + i omega) z + 2 z |z|^2 - z |z|^4.
Complex complex_drift(Complex z, const NodeParams& p);

/// Radial drift -V'(R) including the Ito term alpha^2 / (2R).
double radial_drift(double r, const NodeParams& p);

/// V(R) = nu R^2/2 - R^4/2 + R^6/6 - (alpha^2/2) ln R. The log term is dropped when alpha = 0.
double potential_1d(double r, const NodeParams& p);
/// dV/dR.
double potential_1d_slope(double r, const NodeParams& p);
/// d^2V/dR^2.
double potential_1d_curvature(double r, const NodeParams& p);
/// d^3V/dR^3.
double potential_1d_third(double r, const NodeParams& p);
/// d^4V/dR^4.
double potential_1d_fourth(double r, const NodeParams& p);

RadialEquilibria radial_equilibria(const NodeParams& p);

/// True iff the radial potential has exactly three positive critical points.
bool bistable_radial(const NodeParams& p);

/// Zero set of this polynomial is the saddle-node locus of the radial dynamics in (nu, alpha).
double saddle_node_residual(double nu, double alpha);

/// Positive alpha roots of saddle_node_residual at fixed nu, ascending. Empty if none.
std::vector<double> saddle_node_alpha(double nu);

/// Two-node potential with phase difference phi.
double potential_2node(double r1, double r2, double phi, const NodeParams& p, double beta);

struct GradHess2D {
    Eigen::Vector2d gradient;
    Eigen::Matrix2d hessian;
};

/// Analytic gradient and Hessian of potential_2node at phi = 0.
GradHess2D grad_hess_2node(double r1, double r2, const NodeParams& p, double beta);

/// Classifies a (R1, R2) point by the Hessian of the two-node potential.
CriticalPoint2D make_critical_point(const Eigen::Vector2d& position, const NodeParams& p, double beta);

/// Complex drift of the coupled network, written into `out`.
void network_drift(std::span<const Complex> z, const NetworkSpec& net, const NodeParams& p,
                   std::span<Complex> out);
std::vector<Complex> network_drift(std::span<const Complex> z, const NetworkSpec& net,
                                   const NodeParams& p);

} // namespace seqesc
