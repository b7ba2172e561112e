#pragma once

// Irreversible Markov jump model of sequential escape on the hypercube {0,1}^n.
// State X is encoded as an integer whose bit j is X_j.

#include "seqesc/sde.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace seqesc {

/// Escape rates per remaining node given k escaped nodes, k = 0..N-1 (r_N = 0).
struct AllToAllRates {
    std::vector<double> r;

    std::size_t nodes() const noexcept { return r.size(); }
    /// Throws DomainError unless every rate is positive and finite.
    void validate() const;
    /// lambda_k = -(N - k) r_k for k = 0..N; lambda_N = 0.
    std::vector<double> eigenvalues() const;
};

class EscapeChain {
public:
    static constexpr std::size_t kMaxNodes = 12;

    explicit EscapeChain(std::size_t n);

    /// r_j^X = r_{|X|} for every state.
    static EscapeChain all_to_all(const AllToAllRates& rates);

    std::size_t nodes() const noexcept { return n_; }
    std::size_t states() const noexcept { return std::size_t{1} << n_; }

    /// Throws DomainError for a negative rate or when node j has already escaped in X.
    void set_rate(std::uint32_t state, std::size_t node, double rate);
    double rate(std::uint32_t state, std::size_t node) const;

private:
    std::size_t n_;
    std::vector<double> rates_; ///< rates_[X * n + j]
};

/// Column-stochastic-rate generator M with dp/dt = M p.
Eigen::MatrixXd build_generator(const EscapeChain& chain);

/// (N+1)-level generator of the all-to-all chain counting escaped nodes.
Eigen::MatrixXd reduced_generator(const AllToAllRates& rates);

struct MasterSolution {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> p;
    std::size_t absorbing_state = 0;
};

/// p(t) = exp(M t) p0 on the given times.
MasterSolution solve_master(const Eigen::MatrixXd& m, const Eigen::VectorXd& p0,
                            std::span<const double> times);

/// Closed-form level probabilities p_{N,0..N}(t) started from level 0.
/// Throws DomainError for resonant eigenvalues.
Eigen::VectorXd all_to_all_pnk(const AllToAllRates& rates, double t);

/// q_{N,k}(t) = P(tau^k <= t), 1 <= k <= N.
double cumulative_q(const AllToAllRates& rates, std::size_t k, double t);

/// Q_N^{k|l}(t): distribution of tau^k - tau^l, 0 <= l < k <= N.
double shifted_cdf(const AllToAllRates& rates, std::size_t k, std::size_t l, double t);

/// Mean of tau^k - tau^l: the sum of 1/|lambda_j| for l <= j < k.
double chain_means(const AllToAllRates& rates, std::size_t k, std::size_t l);

/// r_k = 1 / ((N - k) T^{k+1|k}); `means` maps k+1 to T^{k+1|k}.
AllToAllRates rates_from_means(const std::map<std::size_t, double>& means, std::size_t n);

/// sum_j prod_{n != j} 1 / (lambda_n - lambda_j), which vanishes for distinct lambda
/// and at least two entries.
double lagrange_identity_sum(std::span<const double> lambda);

/// Kolmogorov-Smirnov distance between sorted samples and a continuous CDF.
double ks_distance(std::span<const double> sorted_samples, const std::function<double(double)>& cdf);

/// Two-sample critical value at the 5% level, 1.358 sqrt((n + m) / (n m)).
double ks_critical_5pct(std::size_t n, std::size_t m);

} // namespace seqesc
