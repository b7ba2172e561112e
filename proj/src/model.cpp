#include "seqesc/model.hpp"

#include "seqesc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace seqesc {

namespace {

void require_positive_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("radius must be positive and finite, got " + std::to_string(r));
    }
}

// R * V'(R): same sign as V' on R > 0 and free of the 1/R singularity.
double scaled_slope(double r, const NodeParams& p) {
    const double r2 = r * r;
    return p.nu * r2 - 2.0 * r2 * r2 + r2 * r2 * r2 - 0.5 * p.alpha * p.alpha;
}

double refine_root(double lo, double hi, const NodeParams& p) {
    double flo = scaled_slope(lo, p);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = scaled_slope(mid, p);
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double d2 = potential_1d_curvature(r, p);
        if (d2 == 0.0) break;
        const double step = potential_1d_slope(r, p) / d2;
        if (!std::isfinite(step) || std::abs(step) > 1e-6) break;
        r -= step;
    }
    return r;
}

} // namespace

void NodeParams::validate() const {
    if (!std::isfinite(nu) || !std::isfinite(omega) || !std::isfinite(alpha)) {
        throw DomainError("node parameters must be finite");
    }
    if (alpha < 0.0) {
        throw DomainError("noise amplitude alpha must be >= 0");
    }
}

NetworkSpec::NetworkSpec(std::size_t n, std::vector<std::uint8_t> adjacency, double beta)
    : n_(n), adjacency_(std::move(adjacency)), beta_(beta), drivers_(n) {
    if (n_ == 0) throw DomainError("network needs at least one node");
    if (adjacency_.size() != n_ * n_) throw DomainError("adjacency must be n*n");
    if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw DomainError("coupling beta must be >= 0");
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            const auto a = adjacency_[j * n_ + i];
            if (a > 1) throw DomainError("adjacency entries must be 0 or 1");
            if (i == j && a != 0) throw DomainError("adjacency diagonal must be zero");
            if (a) drivers_[i].push_back(j);
        }
    }
}

NetworkSpec NetworkSpec::all_to_all(std::size_t n, double beta) {
    std::vector<std::uint8_t> a(n * n, 1);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 0;
    return {n, std::move(a), beta};
}

NetworkSpec NetworkSpec::disconnected(std::size_t n) {
    return {n, std::vector<std::uint8_t>(n * n, 0), 0.0};
}

NetworkSpec NetworkSpec::unidirectional_pair(double beta) {
    return {2, {0, 1, 0, 0}, beta};
}

const char* to_string(CriticalKind kind) {
    switch (kind) {
    case CriticalKind::Sink: return "sink";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::Source: return "source";
    }
    return "?";
}

Complex complex_drift(Complex z, const NodeParams& p) {
    const double m2 = std::norm(z);
    return Complex(-p.nu, p.omega) * z + 2.0 * z * m2 - z * (m2 * m2);
}

double radial_drift(double r, const NodeParams& p) {
    require_positive_radius(r);
    return -potential_1d_slope(r, p);
}

double potential_1d(double r, const NodeParams& p) {
    if (p.alpha == 0.0 && r == 0.0) return 0.0;
    require_positive_radius(r);
    const double r2 = r * r;
    double v = 0.5 * p.nu * r2 - 0.5 * r2 * r2 + r2 * r2 * r2 / 6.0;
    if (p.alpha != 0.0) v -= 0.5 * p.alpha * p.alpha * std::log(r);
    return v;
}

double potential_1d_slope(double r, const NodeParams& p) {
    require_positive_radius(r);
    const double r2 = r * r;
    return p.nu * r - 2.0 * r2 * r + r2 * r2 * r - 0.5 * p.alpha * p.alpha / r;
}

double potential_1d_curvature(double r, const NodeParams& p) {
    require_positive_radius(r);
    const double r2 = r * r;
    return p.nu - 6.0 * r2 + 5.0 * r2 * r2 + 0.5 * p.alpha * p.alpha / r2;
}

double potential_1d_third(double r, const NodeParams& p) {
    require_positive_radius(r);
    const double r2 = r * r;
    return -12.0 * r + 20.0 * r2 * r - p.alpha * p.alpha / (r2 * r);
}

double potential_1d_fourth(double r, const NodeParams& p) {
    require_positive_radius(r);
    const double r2 = r * r;
    return -12.0 + 60.0 * r2 + 3.0 * p.alpha * p.alpha / (r2 * r2);
}

RadialEquilibria radial_equilibria(const NodeParams& p) {
    p.validate();
    RadialEquilibria eq;
    if (p.alpha == 0.0) {
        eq.r_min = 0.0;
        if (p.nu > 0.0 && p.nu < 1.0) {
            const double s = std::sqrt(1.0 - p.nu);
            eq.r_c = std::sqrt(1.0 - s);
            eq.r_max = std::sqrt(1.0 + s);
        }
        return eq;
    }

    // Every root lies in (0, 2]: R_max^2 <= 1 + sqrt(1 - nu) <= 2 for the bistable range.
    constexpr int kGrid = 4000;
    constexpr double kUpper = 2.0;
    std::vector<double> roots;
    double prev_r = 1e-9;
    double prev_f = scaled_slope(prev_r, p);
    for (int k = 1; k <= kGrid; ++k) {
        const double r = kUpper * static_cast<double>(k) / kGrid;
        const double f = scaled_slope(r, p);
        if (f == 0.0) {
            roots.push_back(r);
        } else if ((f < 0.0) != (prev_f < 0.0) && prev_f != 0.0) {
            roots.push_back(refine_root(prev_r, r, p));
        }
        prev_r = r;
        prev_f = f;
    }

    if (roots.size() == 3) {
        eq.r_min = roots[0];
        eq.r_c = roots[1];
        eq.r_max = roots[2];
    } else if (roots.size() == 1) {
        // A lone root is a minimum; R >= 1 marks the oscillatory well.
        if (roots[0] >= 1.0) {
            eq.r_max = roots[0];
        } else {
            eq.r_min = roots[0];
        }
    } else if (roots.size() == 2) {
        // Tangential contact at the saddle-node locus: a double root and a simple one.
        eq.r_min = roots[0];
        eq.r_max = roots[1];
    }
    return eq;
}

bool bistable_radial(const NodeParams& p) {
    if (p.alpha == 0.0) return p.nu > 0.0 && p.nu < 1.0;
    return radial_equilibria(p).bistable();
}

double saddle_node_residual(double nu, double alpha) {
    const double a2 = alpha * alpha;
    return nu * nu * nu - nu * nu - 4.5 * nu * a2 + (27.0 / 16.0) * a2 * a2 + 4.0 * a2;
}

std::vector<double> saddle_node_alpha(double nu) {
    // Quadratic in s = alpha^2: (27/16) s^2 + (4 - 9 nu / 2) s + nu^3 - nu^2 = 0.
    const double a = 27.0 / 16.0;
    const double b = 4.0 - 4.5 * nu;
    const double c = nu * nu * nu - nu * nu;
    const double disc = b * b - 4.0 * a * c;
    std::vector<double> out;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    // Stable pairing of the two roots.
    const double qv = -0.5 * (b + std::copysign(sq, b));
    std::vector<double> s;
    if (qv != 0.0) {
        s.push_back(qv / a);
        s.push_back(c / qv);
    } else {
        s.push_back(0.0);
    }
    for (double si : s) {
        if (si > 0.0) out.push_back(std::sqrt(si));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double potential_2node(double r1, double r2, double phi, const NodeParams& p, double beta) {
    require_positive_radius(r1);
    require_positive_radius(r2);
    const double a = r1 * r1, b = r2 * r2;
    double bracket = (a * a * a + b * b * b) / 3.0 - (a * a + b * b) + (p.nu + beta) * (a + b);
    if (p.alpha != 0.0) bracket -= p.alpha * p.alpha * std::log(r1 * r2);
    return 0.5 * bracket - beta * r1 * r2 * std::cos(phi);
}

GradHess2D grad_hess_2node(double r1, double r2, const NodeParams& p, double beta) {
    require_positive_radius(r1);
    require_positive_radius(r2);
    GradHess2D out;
    out.gradient << potential_1d_slope(r1, p) + beta * (r1 - r2),
                    potential_1d_slope(r2, p) + beta * (r2 - r1);
    const double off = -beta;
    out.hessian << potential_1d_curvature(r1, p) + beta, off,
                   off, potential_1d_curvature(r2, p) + beta;
    return out;
}

CriticalPoint2D make_critical_point(const Eigen::Vector2d& position, const NodeParams& p,
                                    double beta) {
    CriticalPoint2D cp;
    cp.position = position;
    cp.value = potential_2node(position.x(), position.y(), 0.0, p, beta);
    const auto gh = grad_hess_2node(position.x(), position.y(), p, beta);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(gh.hessian);
    cp.eigenvalues = solver.eigenvalues();
    cp.eigenvectors = solver.eigenvectors();
    if (cp.eigenvalues(0) > 0.0) {
        cp.kind = CriticalKind::Sink;
    } else if (cp.eigenvalues(1) < 0.0) {
        cp.kind = CriticalKind::Source;
    } else {
        cp.kind = CriticalKind::Saddle;
    }
    return cp;
}

void network_drift(std::span<const Complex> z, const NetworkSpec& net, const NodeParams& p,
                   std::span<Complex> out) {
    const std::size_t n = net.size();
    if (z.size() != n || out.size() != n) {
        throw DomainError("state dimension does not match network size");
    }
    const double beta = net.beta();
    for (std::size_t i = 0; i < n; ++i) {
        Complex coupling{0.0, 0.0};
        for (std::size_t j : net.drivers_of(i)) coupling += z[j] - z[i];
        out[i] = complex_drift(z[i], p) + beta * coupling;
    }
}

std::vector<Complex> network_drift(std::span<const Complex> z, const NetworkSpec& net,
                                   const NodeParams& p) {
    std::vector<Complex> out(net.size());
    network_drift(z, net, p, out);
    return out;
}

} // namespace seqesc
