#pragma once

// Critical-point structure of the two-node potential at phi = 0 as the coupling
// varies, the Eyring-Kramers and pitchfork-corrected first/second escape
// estimates, and the two non-Kramers second-escape estimates.

#include "seqesc/analytics.hpp"
#include "seqesc/model.hpp"

#include <vector>

namespace seqesc {

struct CriticalSearchOptions {
    int seed_grid = 40;           ///< Newton seeds per axis
    double upper = 1.6;           ///< search box (0, upper]^2
    double dedup_distance = 1e-6;
    bool prune_symmetric = false; ///< keep one member of each exchange-symmetric pair (R1 >= R2)
};

/// All critical points in the search box, sorted by (R1, R2).
std::vector<CriticalPoint2D> find_critical_points_2node(const NodeParams& p, double beta,
                                                        const CriticalSearchOptions& opt = {});

enum class CouplingRegime { Weak, Intermediate, Strong };

const char* to_string(CouplingRegime r);

struct BifurcationScan {
    std::vector<double> beta_grid;
    std::vector<std::vector<CriticalPoint2D>> branches;
    double beta_sn = 0.0;
    double beta_pf = 0.0;

    CouplingRegime regime(double beta) const;
};

/// Eigenvalue of the symmetric critical point (R_c, R_c) along (1, -1).
double transverse_eigenvalue(const NodeParams& p, double beta);

/// Locates the saddle-node and pitchfork values in [beta_lo, beta_hi] to 1e-10 and
/// records the critical points on a logarithmic grid of `grid_points` values.
/// Throws DomainError when an event is not bracketed.
BifurcationScan detect_bifurcations(const NodeParams& p, double beta_lo, double beta_hi,
                                    int grid_points = 41, const CriticalSearchOptions& opt = {});

/// A sink of the potential together with the saddles through which it is left
/// towards a designated target.
struct GateSet {
    CriticalPoint2D start;
    std::vector<CriticalPoint2D> gates;
};

/// Gates out of the quiescent sink, i.e. the saddles whose unstable manifold joins it to another sink.
GateSet first_escape_gates(const NodeParams& p, double beta);

/// Gates out of the asymmetric sink with R1 > R2 into the fully active sink.
/// Throws DomainError when no asymmetric sink exists (beta >= beta_SN).
GateSet second_escape_gates(const NodeParams& p, double beta);

/// Eyring-Kramers first escape time with the rates of all gates added.
EscapeEstimate first_escape_ek(const NodeParams& p, double beta);

/// Eyring-Kramers second escape time from the asymmetric sink.
EscapeEstimate second_escape_ek(const NodeParams& p, double beta);

/// Quartic coefficient of the potential along the transverse direction at the
/// symmetric point, after eliminating the synchronous direction. Finite differences
/// with step `step`; independent of beta.
double quartic_coefficient(const NodeParams& p, double step = 1e-2);

/// Pitchfork-corrected first escape time.
EscapeEstimate first_escape_pitchfork(const NodeParams& p, double beta, const PsiFunctions& psi);
EscapeEstimate first_escape_pitchfork(const NodeParams& p, double beta);

/// Deterministic passage time between R1 = xi and R2 = xi along the unstable
/// manifold of the asymmetric saddle (R1 > R2). Valid for beta_SN < beta < beta_PF.
/// The flow starts `offset` away from the saddle along the unstable eigenvector,
/// on the branch where R1 grows; the eigenvector sign is normalised first.
double unstable_manifold_passage(const NodeParams& p, double beta, double xi, double offset = 1e-6);

/// (alpha / Delta) sqrt(2 / L) with Delta the radial drift at xi and L the transverse eigenvalue.
double sync_fluctuation_estimate(const NodeParams& p, double beta, double xi);

} // namespace seqesc
