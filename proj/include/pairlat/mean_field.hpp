// Leading-order dynamical mean field for the on-site-drive model: the
// self-consistent single-site Gaussian problem, its cubic density equation,
// the tristability critical point, and susceptibility scans of the exact
// solution.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pairlat/model.hpp"

namespace pairlat {

// Steady-state <n> of a detuned parametric amplifier with loss,
//   H = delta_e n + g a^dag2 + g* a^2,  loss kappa.
// Throws std::domain_error at or above the parametric threshold
// 4|g|^2 >= delta_e^2 + kappa^2/4, where no Gaussian steady state exists.
double gaussian_site_density(double delta_e, Complex g, double kappa);

struct MFSolution {
    double nbar = 0.0;
    int branch = 0;        // 0 = lowest density
    bool stable = false;   // slope criterion d(map - id)/dn < 0
    double residual = 0.0;
};

// All real non-negative self-consistent densities n = g(2 U n - Delta), found
// as roots of the equivalent cubic
//   16 U^2 n^3 - 16 U Delta n^2 + (kappa^2 + 4 Delta^2 - 16|G|^2) n - 8|G|^2 = 0
// and polished by Newton steps on the cubic. The effective detuning carries
// the sign 2 U n - Delta so that the mean-field fold sits on the same side of
// Delta = 0 as the multiphoton resonances of the exact solution.
std::vector<MFSolution> solve_selfconsistent(const ModelSpec& spec);

struct CriticalPoint {
    double kappa_star = 0.0;
    double delta_star = 0.0;
    double method_tolerance = 0.0;
};

struct CriticalScan {
    double kappa_lo = 0.05;     // bisection bracket, units of |U|
    double kappa_hi = 12.0;
    double delta_max = 40.0;    // detuning search window, units of |U|
    int delta_points = 400;
    double kappa_rel_tol = 1e-6;
};

// Cusp of the tristable region: the largest kappa at which the cubic still has
// three distinct real roots for some Delta. Throws when no tristability exists
// anywhere in the bracket.
CriticalPoint critical_point(double big_u, Complex g, const CriticalScan& scan = {});

struct SusceptibilityPoint {
    double delta_at_max = 0.0;
    double chi_max = 0.0;
};

// max_Delta |d nbar / d Delta| of the exact solution at n_modes sites, kappa
// fixed, scanning the grid then refining around the winner. The density
// callback lets callers route through the closed-form pipeline of choice.
SusceptibilityPoint susceptibility_max(const std::function<double(double)>& nbar_of_delta,
                                       double delta_lo, double delta_hi, int grid,
                                       double fd_step, int refine_rounds = 3);

}  // namespace pairlat
