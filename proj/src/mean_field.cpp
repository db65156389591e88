#include "pairlat/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/Polynomials>

namespace pairlat {

double gaussian_site_density(double delta_e, Complex g, double kappa) {
    const double g2 = std::norm(g);
    const double denom = kappa * kappa + 4.0 * delta_e * delta_e - 16.0 * g2;
    if (denom <= 0.0)
        throw std::domain_error("gaussian_site_density: at or above parametric threshold");
    return 8.0 * g2 / denom;
}

namespace {

// cubic coefficients, ascending order: c0 + c1 n + c2 n^2 + c3 n^3
std::array<double, 4> density_cubic(double big_u, double delta, double kappa, double g2) {
    return {-8.0 * g2, kappa * kappa + 4.0 * delta * delta - 16.0 * g2,
            -16.0 * big_u * delta, 16.0 * big_u * big_u};
}

// discriminant of c3 x^3 + c2 x^2 + c1 x + c0; positive iff three distinct real roots
double cubic_discriminant(const std::array<double, 4>& c) {
    const double a = c[3], b = c[2], cc = c[1], d = c[0];
    return 18.0 * a * b * cc * d - 4.0 * b * b * b * d + b * b * cc * cc -
           4.0 * a * cc * cc * cc - 27.0 * a * a * d * d;
}

}  // namespace

std::vector<MFSolution> solve_selfconsistent(const ModelSpec& spec) {
    spec.validate();
    if (spec.d != 0)
        throw ModelError("solve_selfconsistent: mean field is defined for the d = 0 model");
    const double g2 = std::norm(spec.g);
    if (g2 == 0.0) {
        return {MFSolution{0.0, 0, true, 0.0}};
    }

    const auto c = density_cubic(spec.big_u, spec.delta, spec.kappa, g2);
    Eigen::Vector4d coeffs(c[0], c[1], c[2], c[3]);
    Eigen::PolynomialSolver<double, 3> solver;
    solver.compute(coeffs);

    std::vector<double> roots;
    for (const auto& r : solver.roots()) {
        if (std::abs(r.imag()) > 1e-9 * std::max(1.0, std::abs(r.real()))) continue;
        double n = r.real();
        if (n < -1e-12) continue;
        // Newton polish on the cubic
        for (int it = 0; it < 4; ++it) {
            const double p = ((c[3] * n + c[2]) * n + c[1]) * n + c[0];
            const double dp = (3.0 * c[3] * n + 2.0 * c[2]) * n + c[1];
            if (dp == 0.0) break;
            n -= p / dp;
        }
        if (n >= 0.0) roots.push_back(n);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9 * (1.0 + a); }),
                roots.end());

    std::vector<MFSolution> out;
    for (size_t i = 0; i < roots.size(); ++i) {
        MFSolution s;
        s.nbar = roots[i];
        s.branch = static_cast<int>(i);
        const auto map = [&](double n) {
            return gaussian_site_density(2.0 * spec.big_u * n - spec.delta, spec.g, spec.kappa);
        };
        s.residual = std::abs(map(s.nbar) - s.nbar);
        // slope of the self-consistency map; < 1 means the branch attracts
        const double h = 1e-7 * (1.0 + s.nbar);
        double slope;
        try {
            slope = (map(s.nbar + h) - map(s.nbar - h)) / (2.0 * h);
        } catch (const std::domain_error&) {
            slope = 2.0;  // bordering the unstable Gaussian region
        }
        s.stable = slope < 1.0;
        out.push_back(s);
    }
    return out;
}

CriticalPoint critical_point(double big_u, Complex g, const CriticalScan& scan) {
    if (big_u == 0.0) throw std::invalid_argument("critical_point: U must be nonzero");
    const double g2 = std::norm(g);
    const double uu = std::abs(big_u);

    // largest cubic discriminant over the detuning window (units of |U|)
    const auto max_disc = [&](double kappa) {
        double best = -1e300;
        double best_delta = 0.0;
        double lo = 0.0, hi = scan.delta_max * uu;
        int pts = scan.delta_points;
        for (int round = 0; round < 3; ++round) {
            const double step = (hi - lo) / (pts - 1);
            for (int i = 0; i < pts; ++i) {
                const double delta = lo + i * step;
                const double disc =
                    cubic_discriminant(density_cubic(big_u, delta, kappa, g2));
                if (disc > best) {
                    best = disc;
                    best_delta = delta;
                }
            }
            lo = std::max(0.0, best_delta - 2.0 * step);
            hi = best_delta + 2.0 * step;
        }
        return std::pair<double, double>(best, best_delta);
    };

    double lo = scan.kappa_lo * uu, hi = scan.kappa_hi * uu;
    if (max_disc(lo).first <= 0.0)
        throw std::domain_error("critical_point: no tristable region found (drive too weak)");
    if (max_disc(hi).first > 0.0)
        throw std::domain_error("critical_point: tristable at the upper kappa bracket");

    while ((hi - lo) > scan.kappa_rel_tol * uu) {
        const double mid = 0.5 * (lo + hi);
        (max_disc(mid).first > 0.0 ? lo : hi) = mid;
    }
    CriticalPoint cp;
    cp.kappa_star = 0.5 * (lo + hi);
    cp.delta_star = max_disc(lo).second;
    cp.method_tolerance = hi - lo;
    return cp;
}

SusceptibilityPoint susceptibility_max(const std::function<double(double)>& nbar_of_delta,
                                       double delta_lo, double delta_hi, int grid,
                                       double fd_step, int refine_rounds) {
    if (grid < 4) throw std::invalid_argument("susceptibility_max: grid too coarse");
    const auto chi = [&](double delta) {
        return std::abs(nbar_of_delta(delta + fd_step) - nbar_of_delta(delta - fd_step)) /
               (2.0 * fd_step);
    };

    double lo = delta_lo, hi = delta_hi;
    SusceptibilityPoint best;
    int pts = grid;
    for (int round = 0; round <= refine_rounds; ++round) {
        const double step = (hi - lo) / (pts - 1);
        double round_best = -1.0, round_delta = lo;
        for (int i = 0; i < pts; ++i) {
            const double d = lo + i * step;
            const double c = chi(d);
            if (c > round_best) {
                round_best = c;
                round_delta = d;
            }
        }
        if (round == 0 && (round_delta <= lo + 0.5 * step || round_delta >= hi - 0.5 * step))
            throw std::domain_error("susceptibility_max: maximum at the grid edge");
        best.chi_max = round_best;
        best.delta_at_max = round_delta;
        lo = round_delta - step;
        hi = round_delta + step;
        pts = std::max(9, pts / 4);
    }
    return best;
}

}  // namespace pairlat
