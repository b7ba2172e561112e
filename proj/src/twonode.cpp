#include "seqesc/twonode.hpp"

#include "seqesc/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace seqesc {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kGradTol = 1e-10;

std::optional<Eigen::Vector2d> newton_critical(Eigen::Vector2d x, const NodeParams& p, double beta,
                                               double upper) {
    for (int it = 0; it < 100; ++it) {
        const auto gh = grad_hess_2node(x(0), x(1), p, beta);
        if (gh.gradient.norm() < 1e-14) break;
        const double det = gh.hessian.determinant();
        if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
        Eigen::Vector2d dx = -gh.hessian.inverse() * gh.gradient;
        int halvings = 0;
        while ((x + dx).minCoeff() <= 0.0 || (x + dx).maxCoeff() > 2.0 * upper) {
            dx *= 0.5;
            if (++halvings > 40) return std::nullopt;
        }
        x += dx;
        if (dx.norm() < 1e-15 * (1.0 + x.norm())) break;
    }
    const auto g = grad_hess_2node(x(0), x(1), p, beta).gradient;
    if (!(g.norm() < kGradTol)) return std::nullopt;
    if (x.minCoeff() <= 0.0 || x.maxCoeff() > upper + 1e-9) return std::nullopt;
    return x;
}

struct GradientFlow {
    const NodeParams& p;
    double beta;
    void operator()(const State& x, State& dxdt, double /*t*/) const {
        const auto g = grad_hess_2node(x[0], x[1], p, beta).gradient;
        dxdt[0] = -g(0);
        dxdt[1] = -g(1);
    }
};

// Index of the sink reached by steepest descent from x0, or -1.
int descend_to_sink(const Eigen::Vector2d& x0, const NodeParams& p, double beta,
                    const std::vector<CriticalPoint2D>& points) {
    State x{x0(0), x0(1)};
    GradientFlow flow{p, beta};
    auto stepper = odeint::make_controlled(1e-12, 1e-10, odeint::runge_kutta_dopri5<State>());
    double t = 0.0;
    for (int chunk = 0; chunk < 400; ++chunk) {
        odeint::integrate_adaptive(stepper, flow, x, t, t + 50.0, 0.1);
        t += 50.0;
        if (x[0] <= 0.0 || x[1] <= 0.0) return -1;
        const auto g = grad_hess_2node(x[0], x[1], p, beta).gradient;
        if (g.norm() < 1e-9) break;
    }
    const Eigen::Vector2d end(x[0], x[1]);
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].kind == CriticalKind::Sink && (points[k].position - end).norm() < 1e-4) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

std::pair<int, int> manifold_ends(const CriticalPoint2D& saddle, const NodeParams& p, double beta,
                                  const std::vector<CriticalPoint2D>& points) {
    const Eigen::Vector2d v = saddle.eigenvectors.col(0);
    constexpr double kOffset = 1e-5;
    return {descend_to_sink(saddle.position + kOffset * v, p, beta, points),
            descend_to_sink(saddle.position - kOffset * v, p, beta, points)};
}

int extreme_sink(const std::vector<CriticalPoint2D>& points, bool largest) {
    int best = -1;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].kind != CriticalKind::Sink) continue;
        if (best < 0) {
            best = static_cast<int>(k);
            continue;
        }
        const double s = points[k].position.sum();
        const double b = points[static_cast<std::size_t>(best)].position.sum();
        if (largest ? s > b : s < b) best = static_cast<int>(k);
    }
    return best;
}

bool is_asymmetric(const CriticalPoint2D& c) { return c.position(0) - c.position(1) > 1e-6; }

EscapeEstimate combine_rates(const GateSet& set, double alpha) {
    if (set.gates.empty()) throw NumericalError("no escape gate found");
    double rate = 0.0;
    EscapeEstimate first;
    for (std::size_t k = 0; k < set.gates.size(); ++k) {
        const auto e = eyring_kramers_2d(set.start, set.gates[k], alpha);
        if (k == 0) first = e;
        rate += 1.0 / e.value;
    }
    EscapeEstimate est = first;
    est.value = 1.0 / rate;
    est.meta["gates"] = static_cast<double>(set.gates.size());
    return est;
}

double central_second(const std::function<double(double)>& f, double h) {
    return (-f(2 * h) + 16 * f(h) - 30 * f(0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
}

} // namespace

const char* to_string(CouplingRegime r) {
    switch (r) {
    case CouplingRegime::Weak: return "weak";
    case CouplingRegime::Intermediate: return "intermediate";
    case CouplingRegime::Strong: return "strong";
    }
    return "?";
}

std::vector<CriticalPoint2D> find_critical_points_2node(const NodeParams& p, double beta,
                                                        const CriticalSearchOptions& opt) {
    p.validate();
    if (opt.seed_grid < 2 || !(opt.upper > 0.0)) throw DomainError("invalid critical-point search box");
    std::vector<Eigen::Vector2d> found;
    for (int i = 0; i < opt.seed_grid; ++i) {
        for (int j = 0; j < opt.seed_grid; ++j) {
            const Eigen::Vector2d seed(opt.upper * (i + 0.5) / opt.seed_grid,
                                       opt.upper * (j + 0.5) / opt.seed_grid);
            const auto root = newton_critical(seed, p, beta, opt.upper);
            if (!root) continue;
            const bool known = std::any_of(found.begin(), found.end(), [&](const Eigen::Vector2d& f) {
                return (f - *root).norm() < opt.dedup_distance;
            });
            if (!known) found.push_back(*root);
        }
    }
    std::sort(found.begin(), found.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
    });
    std::vector<CriticalPoint2D> out;
    for (const auto& x : found) {
        if (opt.prune_symmetric && x(1) > x(0) + opt.dedup_distance) continue;
        out.push_back(make_critical_point(x, p, beta));
    }
    return out;
}

CouplingRegime BifurcationScan::regime(double beta) const {
    if (beta < beta_sn) return CouplingRegime::Weak;
    if (beta < beta_pf) return CouplingRegime::Intermediate;
    return CouplingRegime::Strong;
}

double transverse_eigenvalue(const NodeParams& p, double beta) {
    const auto eq = radial_equilibria(p);
    if (!eq.r_c) throw DomainError("radial potential has no gate R_c");
    const auto gh = grad_hess_2node(*eq.r_c, *eq.r_c, p, beta);
    const Eigen::Vector2d d(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
    return d.dot(gh.hessian * d);
}

BifurcationScan detect_bifurcations(const NodeParams& p, double beta_lo, double beta_hi,
                                    int grid_points, const CriticalSearchOptions& opt) {
    if (!(beta_lo >= 0.0 && beta_hi > beta_lo) || grid_points < 2) {
        throw DomainError("detect_bifurcations needs 0 <= beta_lo < beta_hi and >= 2 grid points");
    }
    if (!bistable_radial(p)) throw DomainError("node is not bistable");

    BifurcationScan scan;
    for (int k = 0; k < grid_points; ++k) {
        const double s = static_cast<double>(k) / (grid_points - 1);
        scan.beta_grid.push_back(beta_lo > 0.0 ? beta_lo * std::pow(beta_hi / beta_lo, s)
                                               : beta_lo + s * (beta_hi - beta_lo));
        scan.branches.push_back(find_critical_points_2node(p, scan.beta_grid.back(), opt));
    }

    // Pitchfork: transverse eigenvalue of the symmetric point changes sign.
    double lo = beta_lo, hi = beta_hi;
    if (!(transverse_eigenvalue(p, lo) < 0.0 && transverse_eigenvalue(p, hi) > 0.0)) {
        throw DomainError("pitchfork bifurcation not bracketed by the beta range");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (transverse_eigenvalue(p, mid) < 0.0 ? lo : hi) = mid;
    }
    scan.beta_pf = 0.5 * (lo + hi);

    // Saddle-node: the asymmetric sink disappears. Bracket on the grid, then solve the
    // fold system grad V = 0, det H = 0 for (R1, R2, beta).
    auto asym_sink = [](const std::vector<CriticalPoint2D>& pts) -> const CriticalPoint2D* {
        for (const auto& c : pts) {
            if (c.kind == CriticalKind::Sink && is_asymmetric(c)) return &c;
        }
        return nullptr;
    };
    std::size_t last = scan.beta_grid.size();
    for (std::size_t k = 0; k < scan.beta_grid.size(); ++k) {
        if (asym_sink(scan.branches[k])) last = k;
    }
    if (last == scan.beta_grid.size() || last + 1 == scan.beta_grid.size() ||
        asym_sink(scan.branches[last + 1])) {
        throw DomainError("saddle-node bifurcation not bracketed by the beta range");
    }
    const CriticalPoint2D& sink = *asym_sink(scan.branches[last]);
    const CriticalPoint2D* partner = nullptr;
    for (const auto& c : scan.branches[last]) {
        if (c.kind != CriticalKind::Saddle || !is_asymmetric(c)) continue;
        if (!partner || (c.position - sink.position).norm() < (partner->position - sink.position).norm()) {
            partner = &c;
        }
    }
    if (!partner) throw NumericalError("no saddle partner for the asymmetric sink");

    auto fold = [&](const Eigen::Vector3d& y) {
        const auto gh = grad_hess_2node(y(0), y(1), p, y(2));
        return Eigen::Vector3d(gh.gradient(0), gh.gradient(1), gh.hessian.determinant());
    };
    Eigen::Vector3d y;
    y << 0.5 * (sink.position + partner->position), scan.beta_grid[last];
    bool converged = false;
    for (int it = 0; it < 100 && !converged; ++it) {
        const Eigen::Vector3d f = fold(y);
        Eigen::Matrix3d jac;
        for (int c = 0; c < 3; ++c) {
            const double step = 1e-7 * std::max(1.0, std::abs(y(c)));
            Eigen::Vector3d yp = y, ym = y;
            yp(c) += step;
            ym(c) -= step;
            jac.col(c) = (fold(yp) - fold(ym)) / (2.0 * step);
        }
        Eigen::Vector3d dy = jac.fullPivLu().solve(-f);
        while ((y + dy).head<2>().minCoeff() <= 0.0) dy *= 0.5;
        y += dy;
        converged = dy.norm() < 1e-13 && fold(y).norm() < 1e-11;
    }
    if (!converged || !(y(2) >= scan.beta_grid[last] && y(2) <= scan.beta_grid[last + 1])) {
        throw NumericalError("saddle-node continuation failed to converge inside its bracket");
    }
    scan.beta_sn = y(2);
    if (!(scan.beta_sn < scan.beta_pf)) throw NumericalError("expected beta_SN < beta_PF");
    return scan;
}

GateSet first_escape_gates(const NodeParams& p, double beta) {
    const auto pts = find_critical_points_2node(p, beta);
    const int q = extreme_sink(pts, false);
    if (q < 0) throw NumericalError("no quiescent sink found");
    GateSet set;
    set.start = pts[static_cast<std::size_t>(q)];
    for (const auto& c : pts) {
        if (c.kind != CriticalKind::Saddle) continue;
        const auto [a, b] = manifold_ends(c, p, beta, pts);
        if (a < 0 || b < 0 || a == b) continue;
        if (a == q || b == q) set.gates.push_back(c);
    }
    return set;
}

GateSet second_escape_gates(const NodeParams& p, double beta) {
    const auto pts = find_critical_points_2node(p, beta);
    const int active = extreme_sink(pts, true);
    int start = -1;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (pts[k].kind == CriticalKind::Sink && is_asymmetric(pts[k])) start = static_cast<int>(k);
    }
    if (start < 0) throw DomainError("no asymmetric sink: beta is at or beyond the saddle-node value");
    GateSet set;
    set.start = pts[static_cast<std::size_t>(start)];
    for (const auto& c : pts) {
        if (c.kind != CriticalKind::Saddle) continue;
        const auto [a, b] = manifold_ends(c, p, beta, pts);
        if ((a == start && b == active) || (a == active && b == start)) set.gates.push_back(c);
    }
    return set;
}

EscapeEstimate first_escape_ek(const NodeParams& p, double beta) {
    return combine_rates(first_escape_gates(p, beta), p.alpha);
}

EscapeEstimate second_escape_ek(const NodeParams& p, double beta) {
    return combine_rates(second_escape_gates(p, beta), p.alpha);
}

double quartic_coefficient(const NodeParams& p, double step) {
    const auto eq = radial_equilibria(p);
    if (!eq.r_c) throw DomainError("radial potential has no gate R_c");
    const double rc = *eq.r_c;
    const double s = std::numbers::sqrt2 / 2;
    // Synchronous coordinate u and transverse coordinate v about (R_c, R_c).
    auto f = [&](double u, double v) {
        return potential_2node(rc + s * (u + v), rc + s * (u - v), 0.0, p, 0.0);
    };
    const double h = step;
    const double d_vvvv = (f(0, 2 * h) - 4 * f(0, h) + 6 * f(0, 0) - 4 * f(0, -h) + f(0, -2 * h)) /
                          (h * h * h * h);
    const double d_uu = central_second([&](double u) { return f(u, 0); }, h);
    auto d_vv = [&](double u) { return central_second([&](double v) { return f(u, v); }, h); };
    const double d_uvv = (-d_vv(2 * h) + 8 * d_vv(h) - 8 * d_vv(-h) + d_vv(-2 * h)) / (12 * h);
    // Eliminating u = -d_uvv v^2 / (2 d_uu) leaves the v^4 coefficient below.
    return d_vvvv / 24.0 - d_uvv * d_uvv / (8.0 * d_uu);
}

EscapeEstimate first_escape_pitchfork(const NodeParams& p, double beta, const PsiFunctions& psi) {
    const auto set = first_escape_gates(p, beta);
    if (set.gates.empty()) throw NumericalError("no escape gate found");
    auto est = bg_pitchfork(set.start, set.gates, p.alpha, quartic_coefficient(p), psi);
    est.meta["gates"] = static_cast<double>(set.gates.size());
    return est;
}

EscapeEstimate first_escape_pitchfork(const NodeParams& p, double beta) {
    return first_escape_pitchfork(p, beta, psi_alpha_argument(p.alpha));
}

double unstable_manifold_passage(const NodeParams& p, double beta, double xi, double offset) {
    if (!(offset > 0.0)) throw DomainError("manifold offset must be > 0");
    if (!(xi > 0.0)) throw DomainError("threshold xi must be > 0");
    if (!(transverse_eigenvalue(p, beta) < 0.0)) {
        throw DomainError("beta is at or beyond the pitchfork value");
    }
    const auto pts = find_critical_points_2node(p, beta);
    const CriticalPoint2D* saddle = nullptr;
    for (const auto& c : pts) {
        if (c.kind == CriticalKind::Sink && is_asymmetric(c)) {
            throw DomainError("beta is below the saddle-node value");
        }
        if (c.kind == CriticalKind::Saddle && is_asymmetric(c)) saddle = &c;
    }
    if (!saddle) throw DomainError("no asymmetric saddle");
    Eigen::Vector2d v = saddle->eigenvectors.col(0);
    if (v(0) < 0.0) v = -v;
    if (saddle->position(0) >= xi) throw DomainError("saddle lies beyond the threshold");

    const GradientFlow flow{p, beta};
    auto stepper = odeint::make_dense_output(1e-12, 1e-9, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(State{saddle->position(0) + offset * v(0), saddle->position(1) + offset * v(1)},
                       0.0, 1e-2);

    auto locate = [&](int comp, double t0, double t1) {
        State s;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (t0 + t1);
            stepper.calc_state(mid, s);
            (s[comp] < xi ? t0 : t1) = mid;
        }
        return 0.5 * (t0 + t1);
    };

    std::optional<double> t_first, t_second;
    constexpr double kHorizon = 1e4;
    while (!t_second) {
        const auto [t0, t1] = stepper.do_step(flow);
        const State& x = stepper.current_state();
        if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
            throw IntegrationError("manifold integration diverged", t1);
        }
        if (!t_first && x[0] >= xi) t_first = locate(0, t0, t1);
        if (t_first && x[1] >= xi) t_second = locate(1, t0, t1);
        if (t1 > kHorizon && !t_second) {
            throw NumericalError("unstable manifold did not cross both thresholds before t = 1e4");
        }
    }
    return *t_second - *t_first;
}

double sync_fluctuation_estimate(const NodeParams& p, double beta, double xi) {
    const double l = transverse_eigenvalue(p, beta);
    if (!(l > 0.0)) throw DomainError("transverse eigenvalue L <= 0: beta is below the pitchfork value");
    const double delta = radial_drift(xi, p);
    if (!(delta > 0.0)) throw DomainError("radial drift at xi must be positive");
    return p.alpha / delta * std::sqrt(2.0 / l);
}

} // namespace seqesc
