#include "seqesc/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace seqesc {

namespace {

constexpr double kBlowUpRadius = 10.0;

struct NetworkDrift {
    const NetworkSpec* net;
    const NodeParams* p;

    void operator()(std::span<const double> x, std::span<double> out) const {
        const std::size_t n = net->size();
        const auto* z = reinterpret_cast<const Complex*>(x.data());
        auto* f = reinterpret_cast<Complex*>(out.data());
        network_drift(std::span<const Complex>(z, n), *net, *p, std::span<Complex>(f, n));
    }
};

TrajectorySample sample_state(double t, std::span<const double> x) {
    TrajectorySample s;
    s.t = t;
    s.z.reserve(x.size() / 2);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) s.z.emplace_back(x[i], x[i + 1]);
    return s;
}

} // namespace

void SimConfig::validate() const {
    if (!(h > 0.0)) throw DomainError("step size h must be positive");
    if (!(xi > 0.0)) throw DomainError("threshold xi must be positive");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    if (ensemble < 1) throw DomainError("ensemble must contain at least one realization");
    if (record_path && sample_stride < 1) throw DomainError("sample_stride must be >= 1");
}

EscapeRecord simulate_escape(const NetworkSpec& net, const NodeParams& p, const SimConfig& cfg,
                             std::uint64_t realization_index) {
    cfg.validate();
    p.validate();
    const std::size_t n = net.size();
    std::vector<double> x(2 * n, 0.0);
    const std::vector<double> amplitude(2 * n, p.alpha);
    HeunStepper<NetworkDrift> stepper(2 * n, NetworkDrift{&net, &p});
    NormalSource normal(PhiloxStream(cfg.seed, realization_index));

    EscapeRecord rec;
    rec.first_escape.assign(n, std::nullopt);
    if (cfg.record_path) rec.path.push_back(sample_state(0.0, x));

    const double xi2 = cfg.xi * cfg.xi;
    const double blow2 = kBlowUpRadius * kBlowUpRadius;
    const auto max_steps = static_cast<std::uint64_t>(std::ceil(cfg.t_max / cfg.h));
    std::size_t remaining = n;
    std::vector<std::pair<double, std::size_t>> crossing; // (excess, node) within one step

    for (std::uint64_t step = 1; step <= max_steps && remaining > 0; ++step) {
        const double t = static_cast<double>(step) * cfg.h;
        stepper.step(x, amplitude, cfg.h, normal, t);

        crossing.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const double m2 = x[2 * i] * x[2 * i] + x[2 * i + 1] * x[2 * i + 1];
            if (m2 > blow2) throw IntegrationError("trajectory left |z| <= 10", t);
            if (!rec.first_escape[i] && m2 >= xi2) crossing.emplace_back(m2, i);
        }
        if (!crossing.empty()) {
            // Escapes detected on the same grid step: the larger overshoot is taken as earlier.
            std::sort(crossing.begin(), crossing.end(), [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first > b.first : a.second < b.second;
            });
            for (const auto& c : crossing) {
                rec.first_escape[c.second] = t;
                rec.order.push_back(c.second);
                rec.ordered_times.push_back(t);
                --remaining;
            }
        }
        if (cfg.record_path && step % cfg.sample_stride == 0) rec.path.push_back(sample_state(t, x));
    }
    rec.censored = remaining > 0;
    return rec;
}

const PairStats& EnsembleStats::pair(int k, int l) const {
    const auto it = pairs.find({k, l});
    if (it == pairs.end()) {
        throw DomainError("no statistics recorded for pair (" + std::to_string(k) + "|" +
                          std::to_string(l) + ")");
    }
    return it->second;
}

std::size_t default_worker_count() {
    if (const char* env = std::getenv("SEQESC_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleStats run_ensemble(const NetworkSpec& net, const NodeParams& p, const SimConfig& cfg,
                           std::size_t workers) {
    cfg.validate();
    p.validate();
    if (workers == 0) workers = default_worker_count();
    workers = std::min(workers, cfg.ensemble);

    SimConfig run_cfg = cfg;
    run_cfg.record_path = false;

    std::vector<EscapeRecord> records(cfg.ensemble);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = cfg.ensemble;
    std::exception_ptr error;

    auto work = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cfg.ensemble) return;
            try {
                records[idx] = simulate_escape(net, p, run_cfg, idx);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (idx < error_index) {
                    error_index = idx;
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);

    EnsembleStats stats;
    stats.nodes = net.size();
    stats.realizations = cfg.ensemble;
    std::vector<const EscapeRecord*> complete;
    for (const auto& r : records) {
        if (r.censored) {
            ++stats.censored_count;
        } else {
            complete.push_back(&r);
        }
    }
    if (complete.empty()) {
        throw NumericalError("all " + std::to_string(cfg.ensemble) +
                             " realizations were censored; increase t_max");
    }

    const int n = static_cast<int>(net.size());
    for (int k = 1; k <= n; ++k) {
        for (int l = 0; l < k; ++l) {
            PairStats ps;
            ps.samples.reserve(complete.size());
            for (const auto* r : complete) {
                const double tk = r->ordered_times[k - 1];
                const double tl = l == 0 ? 0.0 : r->ordered_times[l - 1];
                ps.samples.push_back(tk - tl);
            }
            // Mean over realization order keeps the telescoping sums consistent.
            const double count = static_cast<double>(ps.samples.size());
            ps.mean = std::accumulate(ps.samples.begin(), ps.samples.end(), 0.0) / count;
            if (ps.samples.size() > 1) {
                double ss = 0.0;
                for (double s : ps.samples) ss += (s - ps.mean) * (s - ps.mean);
                ps.se = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
            }
            std::sort(ps.samples.begin(), ps.samples.end());
            stats.pairs.emplace(std::make_pair(k, l), std::move(ps));
        }
    }
    stats.records = std::move(records);
    return stats;
}

double Ecdf::operator()(double t) const {
    if (times.empty()) return 0.0;
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<double>(it - times.begin()) / static_cast<double>(times.size());
}

Ecdf empirical_cdf(const EnsembleStats& stats, int k, int l) {
    if (!(k > l && l >= 0)) throw DomainError("empirical_cdf needs k > l >= 0");
    const auto& ps = stats.pair(k, l);
    Ecdf e;
    e.times = ps.samples;
    e.values.resize(e.times.size());
    const double n = static_cast<double>(e.times.size());
    for (std::size_t i = 0; i < e.times.size(); ++i) e.values[i] = static_cast<double>(i + 1) / n;
    return e;
}

} // namespace seqesc
