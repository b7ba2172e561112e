#pragma once

// Stochastic integration of the coupled network, escape detection and
// ensemble statistics of sequential escape times.

#include "seqesc/errors.hpp"
#include "seqesc/model.hpp"
#include "seqesc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace seqesc {

struct SimConfig {
    double h = 1e-3;                  ///< step size
    double xi = 0.5;                  ///< escape threshold on |z_i|
    double t_max = 1e5;               ///< horizon; realizations still running are censored
    std::uint64_t seed = 20170601;
    std::size_t ensemble = 2000;
    bool record_path = false;
    std::size_t sample_stride = 1000; ///< steps between recorded path samples

    void validate() const;
};

struct TrajectorySample {
    double t = 0.0;
    std::vector<Complex> z;
};

struct EscapeRecord {
    std::vector<std::optional<double>> first_escape; ///< per node
    std::vector<std::size_t> order;                  ///< escaped nodes in escape order
    std::vector<double> ordered_times;               ///< tau^1 <= tau^2 <= ...
    bool censored = false;
    std::vector<TrajectorySample> path;
};

/// Additive-noise Heun predictor-corrector. The same Gaussian increment is used
/// in the predictor and the corrector, which makes the scheme strong order 1.
///
/// `Drift` is callable as drift(std::span<const double> x, std::span<double> out).
template <class Drift>
class HeunStepper {
public:
    HeunStepper(std::size_t dim, Drift drift)
        : drift_(std::move(drift)), f0_(dim), f1_(dim), pred_(dim), noise_(dim) {}

    /// Advances x in place by one step of size h. `t` is only used in error reports.
    void step(std::span<double> x, std::span<const double> amplitude, double h,
              NormalSource& normal, double t = 0.0) {
        const std::size_t n = x.size();
        const double sqrt_h = std::sqrt(h);
        drift_(std::span<const double>(x), std::span<double>(f0_));
        for (std::size_t i = 0; i < n; ++i) {
            noise_[i] = sqrt_h * amplitude[i] * normal();
            pred_[i] = x[i] + h * f0_[i] + noise_[i];
        }
        drift_(std::span<const double>(pred_), std::span<double>(f1_));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += 0.5 * h * (f0_[i] + f1_[i]) + noise_[i];
            if (!std::isfinite(x[i])) throw IntegrationError("non-finite state in Heun step", t);
        }
    }

private:
    Drift drift_;
    std::vector<double> f0_, f1_, pred_, noise_;
};

/// One Heun step returning the new state.
template <class Drift>
std::vector<double> heun_step(std::span<const double> x, Drift drift,
                              std::span<const double> amplitude, double h, NormalSource& normal) {
    if (!(h > 0.0)) throw DomainError("step size must be positive");
    std::vector<double> next(x.begin(), x.end());
    HeunStepper<Drift> stepper(x.size(), std::move(drift));
    stepper.step(next, amplitude, h, normal);
    return next;
}

/// Integrates the network from z = 0 until every node has crossed |z_i| >= xi
/// or t_max is reached. Realization `index` selects the random stream.
EscapeRecord simulate_escape(const NetworkSpec& net, const NodeParams& p, const SimConfig& cfg,
                             std::uint64_t realization_index);

struct PairStats {
    double mean = 0.0;
    double se = 0.0;
    std::vector<double> samples; ///< sorted passage times tau^k - tau^l
};

struct EnsembleStats {
    std::size_t nodes = 0;
    std::size_t realizations = 0;
    std::size_t censored_count = 0;
    /// Keyed by (k, l) with k > l; k counts escapes, l = 0 is the start.
    std::map<std::pair<int, int>, PairStats> pairs;
    std::vector<EscapeRecord> records;

    const PairStats& pair(int k, int l) const;
    double mean(int k, int l) const { return pair(k, l).mean; }
};

/// Number of workers from SEQESC_WORKERS, falling back to the hardware concurrency.
std::size_t default_worker_count();

/// Runs cfg.ensemble independent realizations on a worker pool. The result does
/// not depend on the worker count.
EnsembleStats run_ensemble(const NetworkSpec& net, const NodeParams& p, const SimConfig& cfg,
                           std::size_t workers = 0);

struct Ecdf {
    std::vector<double> times;  ///< sorted samples
    std::vector<double> values; ///< i/n at the i-th sample (1-based)

    /// Fraction of samples <= t.
    double operator()(double t) const;
};

Ecdf empirical_cdf(const EnsembleStats& stats, int k, int l);

} // namespace seqesc
