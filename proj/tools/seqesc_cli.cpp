// seqesc: command-line front end for the escape-time experiments.

#include "seqesc/analytics.hpp"
#include "seqesc/errors.hpp"
#include "seqesc/masterchain.hpp"
#include "seqesc/output.hpp"
#include "seqesc/sde.hpp"
#include "seqesc/twonode.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace seqesc;
using nlohmann::json;

namespace {

struct Common {
    double nu = 0.2;
    double alpha = 0.05;
    double omega = 0.0;
    std::optional<double> beta;
    std::string xi = "auto";
    double h = 1e-3;
    std::optional<double> tmax;
    std::size_t ensemble = 2000;
    std::uint64_t seed = 20170601;
    std::size_t workers = 0;
    std::string out = "-";

    NodeParams node() const { return {nu, omega, alpha}; }

    double xi_value(double automatic) const {
        if (xi == "auto") return automatic;
        std::size_t used = 0;
        const double v = std::stod(xi, &used);
        if (used != xi.size()) throw DomainError("--xi must be a number or 'auto'");
        return v;
    }

    json to_json() const {
        json j;
        j["nu"] = nu;
        j["alpha"] = alpha;
        j["omega"] = omega;
        j["beta"] = beta ? json(*beta) : json(nullptr);
        j["xi"] = xi;
        j["h"] = h;
        j["tmax"] = tmax ? json(*tmax) : json(nullptr);
        j["ensemble"] = ensemble;
        j["workers"] = workers;
        j["out"] = out;
        return j;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--nu", c.nu, "excitability")->capture_default_str();
    cmd->add_option("--alpha", c.alpha, "noise amplitude")->capture_default_str();
    cmd->add_option("--omega", c.omega, "angular frequency")->capture_default_str();
    cmd->add_option("--beta", c.beta, "coupling strength");
    cmd->add_option("--xi", c.xi, "escape threshold or 'auto'")->capture_default_str();
    cmd->add_option("--h", c.h, "SDE step size")->capture_default_str();
    cmd->add_option("--tmax", c.tmax, "simulation horizon (default: 100 x slowest one-node time)");
    cmd->add_option("--ensemble", c.ensemble, "Monte Carlo realizations")->capture_default_str();
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "worker threads (default: $SEQESC_WORKERS or all cores)");
    cmd->add_option("--out", c.out, "output file, '-' for stdout")->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
    if (c.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + c.out);
    f << text;
    if (!f) throw std::runtime_error("failed writing " + c.out);
}

std::size_t workers_of(const Common& c) { return c.workers ? c.workers : default_worker_count(); }

SimConfig sim_config(const Common& c, double xi, double default_tmax) {
    SimConfig cfg;
    cfg.h = c.h;
    cfg.xi = xi;
    cfg.t_max = c.tmax.value_or(default_tmax);
    cfg.seed = c.seed;
    cfg.ensemble = c.ensemble;
    return cfg;
}

std::vector<double> grid(double lo, double hi, int points, bool logarithmic) {
    if (points < 1) throw DomainError("grid needs at least one point");
    if (points == 1) return {lo};
    if (logarithmic && !(lo > 0.0 && hi > 0.0)) throw DomainError("logarithmic grid needs positive bounds");
    std::vector<double> g;
    for (int k = 0; k < points; ++k) {
        const double s = static_cast<double>(k) / (points - 1);
        g.push_back(logarithmic ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo));
    }
    std::sort(g.begin(), g.end());
    return g;
}

double quiescent_gate_radius(double nu) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("automatic xi needs 0 < nu < 1");
    return std::sqrt(1.0 - std::sqrt(1.0 - nu));
}

std::string num(double v) { return format_number(v); }

template <class F>
std::string try_num(F&& f) {
    try {
        return num(f());
    } catch (const DomainError&) {
        return "";
    } catch (const NumericalError&) {
        return "";
    }
}

// ---------------------------------------------------------------- single-node

struct SingleNodeOpts {
    std::string sweep = "none";
    double from = 0.0, to = 0.0;
    int points = 1;
    bool mc = false;
};

std::string run_single_node(const Common& c, const SingleNodeOpts& o) {
    std::vector<std::pair<double, double>> params;
    if (o.sweep == "none") {
        params.emplace_back(c.nu, c.alpha);
    } else {
        for (double v : grid(o.from, o.to, o.points, false)) {
            params.emplace_back(o.sweep == "nu" ? v : c.nu, o.sweep == "alpha" ? v : c.alpha);
        }
    }
    Table table;
    table.columns = {"nu", "alpha", "xi", "T", "T_l", "T_u", "T_K", "method_flags"};
    if (o.mc) {
        for (const char* col : {"mc_mean", "mc_se", "mc_n"}) table.columns.push_back(col);
    }
    for (const auto& [nu, alpha] : params) {
        const double xi = c.xi_value(quiescent_gate_radius(nu));
        const auto t = mean_escape_quadrature(nu, alpha, xi);
        const auto [lo, up] = escape_bounds(nu, alpha, xi);
        const auto tk = kramers_1d(nu, alpha, xi);
        std::vector<std::string> row = {num(nu),       num(alpha),    num(xi),
                                        num(t.value),  num(lo.value), num(up.value),
                                        num(tk.value), o.mc ? "quadrature;bounds;kramers1d;mc" : "quadrature;bounds;kramers1d"};
        if (o.mc) {
            const NodeParams p{nu, c.omega, alpha};
            const auto stats = run_ensemble(NetworkSpec::disconnected(1), p,
                                            sim_config(c, xi, 100.0 * t.value), workers_of(c));
            const auto& ps = stats.pair(1, 0);
            row.push_back(num(ps.mean));
            row.push_back(num(ps.se));
            row.push_back(std::to_string(ps.samples.size()));
        }
        table.add_row(std::move(row));
    }
    json cfg = c.to_json();
    cfg["sweep"] = o.sweep;
    cfg["from"] = o.from;
    cfg["to"] = o.to;
    cfg["points"] = o.points;
    cfg["mc"] = o.mc;
    std::ostringstream os;
    write_csv(os, {"single-node", cfg, c.seed}, table);
    return os.str();
}

// ---------------------------------------------------------------- two-node

struct TwoNodeOpts {
    std::string topology = "all";
    double beta_min = 1e-3, beta_max = 1.0;
    int points = 7;
};

std::string run_two_node(const Common& c, const TwoNodeOpts& o) {
    const NodeParams p = c.node();
    const double xi = c.xi_value(0.5);
    const std::vector<double> betas = c.beta ? std::vector<double>{*c.beta}
                                             : grid(o.beta_min, o.beta_max, o.points, true);
    std::vector<std::string> topologies;
    if (o.topology == "all") topologies = {"bi", "uni", "dis"};
    else topologies = {o.topology};

    const auto limits = coupling_limits(c.nu, c.alpha, xi);
    const auto cal = calibrate_AB(c.nu, c.alpha, xi);
    const auto scan = detect_bifurcations(p, 1e-3, 1.0, 25);
    const double horizon = suggested_horizon(c.nu, c.alpha, xi, true);

    Table table;
    table.columns = {"topology", "beta",   "T10",     "T10_se",       "T21",       "T21_se",
                     "n",        "censored", "regime", "beta_SN",     "beta_PF",   "ek_T10_cal",
                     "bg_T10_cal", "ek_T21_cal", "Ttilde_21", "T_lim1", "T_lim2", "T_lim3", "T_lim4"};
    for (const auto& topo : topologies) {
        for (double beta : betas) {
            NetworkSpec net = topo == "bi"    ? NetworkSpec::all_to_all(2, beta)
                              : topo == "uni" ? NetworkSpec::unidirectional_pair(beta)
                                              : NetworkSpec::disconnected(2);
            std::vector<std::string> row = {topo, num(beta)};
            if (c.ensemble > 0) {
                const auto stats = run_ensemble(net, p, sim_config(c, xi, horizon), workers_of(c));
                row.push_back(num(stats.pair(1, 0).mean));
                row.push_back(num(stats.pair(1, 0).se));
                row.push_back(num(stats.pair(2, 1).mean));
                row.push_back(num(stats.pair(2, 1).se));
                row.push_back(std::to_string(stats.pair(1, 0).samples.size()));
                row.push_back(std::to_string(stats.censored_count));
            } else {
                row.insert(row.end(), 6, "");
            }
            if (topo == "bi") {
                const auto regime = scan.regime(beta);
                row.push_back(to_string(regime));
                row.push_back(num(scan.beta_sn));
                row.push_back(num(scan.beta_pf));
                row.push_back(try_num([&] { return cal.a * first_escape_ek(p, beta).value + cal.b; }));
                row.push_back(try_num([&] { return cal.a * first_escape_pitchfork(p, beta).value + cal.b; }));
                row.push_back(try_num([&] { return cal.a * second_escape_ek(p, beta).value + cal.b; }));
                row.push_back(try_num([&] {
                    return regime == CouplingRegime::Strong ? sync_fluctuation_estimate(p, beta, xi)
                                                            : unstable_manifold_passage(p, beta, xi);
                }));
            } else {
                row.insert(row.end(), 7, "");
            }
            row.push_back(num(limits.synchronised.value));
            row.push_back(num(limits.uncoupled_first.value));
            row.push_back(num(limits.uncoupled_second.value));
            row.push_back(num(limits.unidirectional.value));
            table.add_row(std::move(row));
        }
    }
    json cfg = c.to_json();
    cfg["topology"] = o.topology;
    cfg["beta_min"] = o.beta_min;
    cfg["beta_max"] = o.beta_max;
    cfg["points"] = o.points;
    cfg["A"] = cal.a;
    cfg["B"] = cal.b;
    std::ostringstream os;
    write_csv(os, {"two-node", cfg, c.seed}, table);
    return os.str();
}

// ---------------------------------------------------------------- bifurcation

struct BifurcationOpts {
    double beta_min = 1e-3, beta_max = 1.0;
    int points = 41;
    int seed_grid = 40;
    bool prune = false;
};

std::string run_bifurcation(const Common& c, const BifurcationOpts& o) {
    const NodeParams p = c.node();
    const double xi = c.xi_value(0.5);
    CriticalSearchOptions search;
    search.seed_grid = o.seed_grid;
    search.prune_symmetric = o.prune;
    const auto scan = detect_bifurcations(p, o.beta_min, o.beta_max, o.points, search);
    Table table;
    table.columns = {"beta", "n_points", "kinds", "regime", "beta_SN", "beta_PF", "Ttilde_21", "points"};
    for (std::size_t k = 0; k < scan.beta_grid.size(); ++k) {
        const double beta = scan.beta_grid[k];
        int sinks = 0, saddles = 0, sources = 0;
        std::string points;
        for (const auto& cp : scan.branches[k]) {
            sinks += cp.kind == CriticalKind::Sink;
            saddles += cp.kind == CriticalKind::Saddle;
            sources += cp.kind == CriticalKind::Source;
            if (!points.empty()) points += ';';
            points += fmt::format("{}/{}/{}", num(cp.position(0)), num(cp.position(1)), to_string(cp.kind));
        }
        const auto regime = scan.regime(beta);
        std::string ttilde;
        if (regime == CouplingRegime::Intermediate) {
            ttilde = try_num([&] { return unstable_manifold_passage(p, beta, xi); });
        } else if (regime == CouplingRegime::Strong) {
            ttilde = try_num([&] { return sync_fluctuation_estimate(p, beta, xi); });
        }
        table.add_row({num(beta), std::to_string(scan.branches[k].size()),
                       fmt::format("sink={} saddle={} source={}", sinks, saddles, sources), to_string(regime),
                       num(scan.beta_sn), num(scan.beta_pf), ttilde, points});
    }
    json cfg = c.to_json();
    cfg["beta_min"] = o.beta_min;
    cfg["beta_max"] = o.beta_max;
    cfg["points"] = o.points;
    cfg["seed_grid"] = o.seed_grid;
    cfg["prune"] = o.prune;
    std::ostringstream os;
    write_csv(os, {"bifurcation", cfg, c.seed}, table);
    return os.str();
}

// ---------------------------------------------------------------- master

struct MasterOpts {
    std::vector<double> rates;
    std::size_t nodes = 2;
    int time_points = 200;
    std::string format = "json";
};

std::string run_master(const Common& c, const MasterOpts& o) {
    AllToAllRates rates;
    json summary;
    std::optional<EnsembleStats> stats;
    if (!o.rates.empty()) {
        rates.r = o.rates;
    } else {
        const double beta = c.beta.value_or(0.01);
        const double xi = c.xi_value(0.5);
        const NodeParams p = c.node();
        stats = run_ensemble(NetworkSpec::all_to_all(o.nodes, beta), p,
                             sim_config(c, xi, suggested_horizon(c.nu, c.alpha, xi, true)), workers_of(c));
        std::map<std::size_t, double> means;
        for (std::size_t k = 1; k <= o.nodes; ++k) means[k] = stats->mean(static_cast<int>(k), static_cast<int>(k - 1));
        rates = rates_from_means(means, o.nodes);
        summary["simulation"] = to_json(*stats);
    }
    rates.validate();
    const std::size_t n = rates.nodes();
    const auto lambda = rates.eigenvalues();
    summary["rates"] = rates.r;
    summary["eigenvalues"] = lambda;

    json means = json::array();
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t l = 0; l < k; ++l) {
            means.push_back({{"k", k}, {"l", l}, {"mean", chain_means(rates, k, l)}});
        }
    }
    summary["chain_means"] = means;

    if (stats) {
        json ks = json::array();
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t l = 0; l < k; ++l) {
                const auto& samples = stats->pair(static_cast<int>(k), static_cast<int>(l)).samples;
                const double d = ks_distance(samples, [&](double t) { return shifted_cdf(rates, k, l, t); });
                ks.push_back({{"k", k},
                              {"l", l},
                              {"ks", d},
                              {"critical_5pct", ks_critical_5pct(samples.size(), samples.size())},
                              {"n", samples.size()}});
            }
        }
        summary["ks"] = ks;
    }

    const double t_end = 5.0 * chain_means(rates, n, 0);
    Table table;
    table.columns.push_back("t");
    for (std::size_t k = 0; k <= n; ++k) table.columns.push_back(fmt::format("p_{}", k));
    for (std::size_t k = 1; k <= n; ++k) table.columns.push_back(fmt::format("q_{}", k));
    // Model CDFs of tau^k - tau^l for every pair, with the empirical ones when simulated.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<Ecdf> ecdfs;
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t l = 0; l < k; ++l) {
            pairs.emplace_back(k, l);
            table.columns.push_back(fmt::format("Qhat_{}|{}", k, l));
            if (stats) {
                table.columns.push_back(fmt::format("Q_{}|{}", k, l));
                ecdfs.push_back(empirical_cdf(*stats, static_cast<int>(k), static_cast<int>(l)));
            }
        }
    }
    json curve = json::array();
    for (double t : grid(0.0, t_end, o.time_points, false)) {
        const auto pk = all_to_all_pnk(rates, t);
        std::vector<std::string> row = {num(t)};
        json entry = {{"t", t}, {"p", json::array()}, {"q", json::array()}};
        for (Eigen::Index k = 0; k < pk.size(); ++k) {
            row.push_back(num(pk(k)));
            entry["p"].push_back(pk(k));
        }
        for (std::size_t k = 1; k <= n; ++k) {
            const double q = cumulative_q(rates, k, t);
            row.push_back(num(q));
            entry["q"].push_back(q);
        }
        entry["Qhat"] = json::array();
        if (stats) entry["Q"] = json::array();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double model = shifted_cdf(rates, pairs[i].first, pairs[i].second, t);
            row.push_back(num(model));
            entry["Qhat"].push_back(model);
            if (stats) {
                row.push_back(num(ecdfs[i](t)));
                entry["Q"].push_back(ecdfs[i](t));
            }
        }
        table.add_row(std::move(row));
        curve.push_back(entry);
    }
    summary["curve"] = curve;

    json cfg = c.to_json();
    cfg["rates"] = o.rates;
    cfg["nodes"] = o.nodes;
    cfg["time_points"] = o.time_points;
    cfg["format"] = o.format;
    std::ostringstream os;
    if (o.format == "csv") write_csv(os, {"master", cfg, c.seed}, table);
    else write_json(os, {"master", cfg, c.seed}, summary);
    return os.str();
}

// ---------------------------------------------------------------- limits / calibrate

std::string run_limits(const Common& c) {
    const double xi = c.xi_value(0.5);
    const auto lim = coupling_limits(c.nu, c.alpha, xi);
    Table table;
    table.columns = {"quantity", "value", "description"};
    table.add_row({"T_lim1", num(lim.synchronised.value), "strong bidirectional first escape"});
    table.add_row({"T_lim2", num(lim.uncoupled_first.value), "uncoupled first escape"});
    table.add_row({"T_lim3", num(lim.uncoupled_second.value), "uncoupled second escape"});
    table.add_row({"T_lim4", num(lim.unidirectional.value), "strong unidirectional first escape"});
    std::ostringstream os;
    write_csv(os, {"limits", c.to_json(), c.seed}, table);
    return os.str();
}

std::string run_calibrate(const Common& c) {
    const double xi = c.xi_value(0.5);
    const auto cal = calibrate_AB(c.nu, c.alpha, xi);
    Table table;
    table.columns = {"A", "B", "K_uncoupled", "K_synchronised", "T_uncoupled", "T_synchronised"};
    table.add_row({num(cal.a), num(cal.b), num(cal.k_uncoupled), num(cal.k_synchronised), num(cal.t_uncoupled),
                   num(cal.t_synchronised)});
    std::ostringstream os;
    write_csv(os, {"calibrate", c.to_json(), c.seed}, table);
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential noise-induced escapes in networks of bistable nodes"};
    app.require_subcommand(1);
    // "-h" is taken by the step-size option.
    app.set_help_flag("--help", "print this help message and exit");
    app.set_version_flag("--version", kToolVersion);

    Common common;

    SingleNodeOpts single;
    auto* cmd_single = app.add_subcommand("single-node", "one-node escape times: quadrature, bounds, Kramers, MC");
    add_common(cmd_single, common);
    cmd_single->add_option("--sweep", single.sweep, "swept parameter")
        ->check(CLI::IsMember({"none", "nu", "alpha"}))
        ->capture_default_str();
    cmd_single->add_option("--from", single.from, "sweep start");
    cmd_single->add_option("--to", single.to, "sweep end");
    cmd_single->add_option("--points", single.points, "sweep points")->capture_default_str();
    cmd_single->add_flag("--mc", single.mc, "add Monte Carlo means");

    TwoNodeOpts two;
    auto* cmd_two = app.add_subcommand("two-node", "two-node first and second escape times against beta");
    add_common(cmd_two, common);
    cmd_two->add_option("--topology", two.topology, "coupling topology")
        ->check(CLI::IsMember({"all", "bi", "uni", "dis"}))
        ->capture_default_str();
    cmd_two->add_option("--beta-min", two.beta_min)->capture_default_str();
    cmd_two->add_option("--beta-max", two.beta_max)->capture_default_str();
    cmd_two->add_option("--points", two.points, "logarithmic beta points")->capture_default_str();

    BifurcationOpts bif;
    auto* cmd_bif = app.add_subcommand("bifurcation", "critical points of the two-node potential against beta");
    add_common(cmd_bif, common);
    cmd_bif->add_option("--beta-min", bif.beta_min)->capture_default_str();
    cmd_bif->add_option("--beta-max", bif.beta_max)->capture_default_str();
    cmd_bif->add_option("--points", bif.points)->capture_default_str();
    cmd_bif->add_option("--seed-grid", bif.seed_grid, "Newton seeds per axis")->capture_default_str();
    cmd_bif->add_flag("--prune", bif.prune, "keep one point of each exchange-symmetric pair");

    MasterOpts master;
    auto* cmd_master = app.add_subcommand("master", "master-equation distributions, optionally fitted to simulation");
    add_common(cmd_master, common);
    cmd_master->add_option("--rates", master.rates, "r_0,...,r_{N-1}; skips the simulation")->delimiter(',');
    cmd_master->add_option("--nodes", master.nodes, "all-to-all network size")->capture_default_str();
    cmd_master->add_option("--time-points", master.time_points)->capture_default_str();
    cmd_master->add_option("--format", master.format)
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    auto* cmd_limits = app.add_subcommand("limits", "limiting first/second escape times");
    add_common(cmd_limits, common);
    auto* cmd_cal = app.add_subcommand("calibrate", "A, B of the linear calibration T = A K + B");
    add_common(cmd_cal, common);

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text;
        if (*cmd_single) text = run_single_node(common, single);
        else if (*cmd_two) text = run_two_node(common, two);
        else if (*cmd_bif) text = run_bifurcation(common, bif);
        else if (*cmd_master) text = run_master(common, master);
        else if (*cmd_limits) text = run_limits(common);
        else if (*cmd_cal) text = run_calibrate(common);
        emit(common, text);
    } catch (const std::exception& e) {
        std::cerr << "seqesc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
