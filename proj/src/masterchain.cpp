#include "seqesc/masterchain.hpp"

#include "seqesc/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace seqesc {

namespace {

void check_resonance(std::span<const double> lambda) {
    double scale = 0.0;
    for (double l : lambda) scale = std::max(scale, std::abs(l));
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        for (std::size_t j = i + 1; j < lambda.size(); ++j) {
            if (std::abs(lambda[i] - lambda[j]) <= 1e-9 * scale) {
                throw DomainError("resonant eigenvalues lambda_" + std::to_string(i) + " = lambda_" +
                                  std::to_string(j) + "; the closed form needs distinct values");
            }
        }
    }
}

// Probabilities of levels l..k-1 for the sub-chain started at level l, evaluated as
// [prod_{i<m} lambda_i] sum_j e^{lambda_j t} / prod_{n != j} (lambda_n - lambda_j)
// with the products carried as log-magnitude and sign.
std::vector<double> level_probabilities(const std::vector<double>& lambda, std::size_t l,
                                        std::size_t k, double t) {
    std::vector<double> out;
    double log_prefix = 0.0;
    int sign_prefix = 1;
    for (std::size_t m = l; m < k; ++m) {
        double sum = 0.0;
        for (std::size_t j = l; j <= m; ++j) {
            double log_den = 0.0;
            int sign = sign_prefix;
            for (std::size_t n = l; n <= m; ++n) {
                if (n == j) continue;
                const double d = lambda[n] - lambda[j];
                log_den += std::log(std::abs(d));
                if (d < 0.0) sign = -sign;
            }
            sum += sign * std::exp(log_prefix + lambda[j] * t - log_den);
        }
        out.push_back(sum);
        log_prefix += std::log(std::abs(lambda[m]));
        if (lambda[m] < 0.0) sign_prefix = -sign_prefix;
    }
    return out;
}

} // namespace

void AllToAllRates::validate() const {
    if (r.empty()) throw DomainError("at least one node is required");
    for (double v : r) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("all-to-all rates must be positive");
    }
}

std::vector<double> AllToAllRates::eigenvalues() const {
    const std::size_t n = r.size();
    std::vector<double> lambda(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) lambda[k] = -static_cast<double>(n - k) * r[k];
    return lambda;
}

EscapeChain::EscapeChain(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxNodes) {
        throw DomainError("full chain supports 1.." + std::to_string(kMaxNodes) +
                          " nodes; use the reduced all-to-all chain for more");
    }
    rates_.assign(states() * n_, 0.0);
}

EscapeChain EscapeChain::all_to_all(const AllToAllRates& rates) {
    rates.validate();
    EscapeChain chain(rates.nodes());
    for (std::uint32_t x = 0; x < chain.states(); ++x) {
        for (std::size_t j = 0; j < chain.n_; ++j) {
            if (!((x >> j) & 1U)) chain.set_rate(x, j, rates.r[static_cast<std::size_t>(std::popcount(x))]);
        }
    }
    return chain;
}

void EscapeChain::set_rate(std::uint32_t state, std::size_t node, double rate) {
    if (state >= states() || node >= n_) throw DomainError("state or node out of range");
    if ((state >> node) & 1U) throw DomainError("node has already escaped in this state");
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("rates must be nonnegative");
    rates_[state * n_ + node] = rate;
}

double EscapeChain::rate(std::uint32_t state, std::size_t node) const {
    if (state >= states() || node >= n_) throw DomainError("state or node out of range");
    return rates_[state * n_ + node];
}

Eigen::MatrixXd build_generator(const EscapeChain& chain) {
    const auto s = static_cast<Eigen::Index>(chain.states());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
    for (std::uint32_t x = 0; x < chain.states(); ++x) {
        for (std::size_t j = 0; j < chain.nodes(); ++j) {
            if ((x >> j) & 1U) continue;
            const double r = chain.rate(x, j);
            const std::uint32_t y = x | (1U << j);
            m(y, x) += r;
            m(x, x) -= r;
        }
    }
    return m;
}

Eigen::MatrixXd reduced_generator(const AllToAllRates& rates) {
    rates.validate();
    const auto lambda = rates.eigenvalues();
    const auto n = static_cast<Eigen::Index>(rates.nodes());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index k = 0; k < n; ++k) {
        m(k, k) = lambda[static_cast<std::size_t>(k)];
        m(k + 1, k) = -lambda[static_cast<std::size_t>(k)];
    }
    return m;
}

MasterSolution solve_master(const Eigen::MatrixXd& m, const Eigen::VectorXd& p0,
                            std::span<const double> times) {
    if (m.rows() != m.cols() || m.rows() != p0.size()) throw DomainError("generator and p0 sizes differ");
    if (p0.minCoeff() < 0.0 || std::abs(p0.sum() - 1.0) > 1e-12) {
        throw DomainError("p0 must be a probability vector");
    }
    MasterSolution sol;
    sol.absorbing_state = static_cast<std::size_t>(m.rows() - 1);
    for (double t : times) {
        if (!(t >= 0.0)) throw DomainError("times must be nonnegative");
        const Eigen::MatrixXd e = (m * t).exp();
        sol.times.push_back(t);
        sol.p.push_back(e * p0);
    }
    return sol;
}

Eigen::VectorXd all_to_all_pnk(const AllToAllRates& rates, double t) {
    rates.validate();
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
    const auto lambda = rates.eigenvalues();
    const std::size_t n = rates.nodes();
    check_resonance(std::span<const double>(lambda).first(n));
    const auto levels = level_probabilities(lambda, 0, n, t);
    Eigen::VectorXd p(static_cast<Eigen::Index>(n + 1));
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        p(static_cast<Eigen::Index>(k)) = levels[k];
        total += levels[k];
    }
    p(static_cast<Eigen::Index>(n)) = 1.0 - total;
    return p;
}

double shifted_cdf(const AllToAllRates& rates, std::size_t k, std::size_t l, double t) {
    rates.validate();
    const std::size_t n = rates.nodes();
    if (!(l < k && k <= n)) throw DomainError("shifted_cdf needs 0 <= l < k <= N");
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
    const auto lambda = rates.eigenvalues();
    check_resonance(std::span<const double>(lambda).subspan(l, k - l));
    const auto levels = level_probabilities(lambda, l, k, t);
    double below = 0.0;
    for (double v : levels) below += v;
    return std::clamp(1.0 - below, 0.0, 1.0);
}

double cumulative_q(const AllToAllRates& rates, std::size_t k, double t) {
    if (k == 0) throw DomainError("cumulative_q needs 1 <= k <= N");
    return shifted_cdf(rates, k, 0, t);
}

double chain_means(const AllToAllRates& rates, std::size_t k, std::size_t l) {
    rates.validate();
    if (!(l < k && k <= rates.nodes())) throw DomainError("chain_means needs 0 <= l < k <= N");
    const auto lambda = rates.eigenvalues();
    double mean = 0.0;
    for (std::size_t j = l; j < k; ++j) mean += 1.0 / std::abs(lambda[j]);
    return mean;
}

AllToAllRates rates_from_means(const std::map<std::size_t, double>& means, std::size_t n) {
    AllToAllRates rates;
    for (std::size_t k = 0; k < n; ++k) {
        const auto it = means.find(k + 1);
        if (it == means.end()) throw DomainError("missing mean T^{" + std::to_string(k + 1) + "|" +
                                                 std::to_string(k) + "}");
        if (!(it->second > 0.0)) throw DomainError("means must be positive");
        rates.r.push_back(1.0 / (static_cast<double>(n - k) * it->second));
    }
    return rates;
}

double lagrange_identity_sum(std::span<const double> lambda) {
    check_resonance(lambda);
    double sum = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        double prod = 1.0;
        for (std::size_t n = 0; n < lambda.size(); ++n) {
            if (n != j) prod /= (lambda[n] - lambda[j]);
        }
        sum += prod;
    }
    return sum;
}

double ks_distance(std::span<const double> sorted_samples, const std::function<double(double)>& cdf) {
    if (sorted_samples.empty()) throw DomainError("no samples");
    const double n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_critical_5pct(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw DomainError("sample sizes must be positive");
    const double a = static_cast<double>(n), b = static_cast<double>(m);
    return 1.358 * std::sqrt((a + b) / (a * b));
}

} // namespace seqesc
