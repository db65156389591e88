// Pointwise steady-state Wigner and Husimi-Q functions, quadrature
// normalization checks at small mode count, and the max-pairing photon
// concentration diagnostic.

#pragma once

#include "pairlat/moments.hpp"

namespace pairlat {

struct WignerContext {
    MatrixXc m_over_u;        // pairing matrix divided by u
    PairingSpectrum ps;
    Complex delta;
    double log_norm = 0.0;    // log <Psi|Psi>
    MomentOptions opt;
};

WignerContext make_wigner_context(const ModelSpec& spec, const PairingSpectrum& ps,
                                  Complex delta, const MomentOptions& opt = {});

// W_ss(alpha) = (2/pi)^N |0F1(delta; -alpha*^T (M/u) alpha*)|^2 e^{-2|alpha|^2} / Norm
double wigner_at(const WignerContext& ctx, const VectorXc& alpha);

// Q_ss(alpha) = W evaluated at rescaled argument: (1/pi)^N |0F1(delta; -alpha*^T (M/u) alpha*/2)|^2 ...
double husimi_q_at(const WignerContext& ctx, const VectorXc& alpha);

// integral of W over phase space by tensor-product trapezoid quadrature;
// n_modes <= 2 or the cost explodes.
double wigner_norm_check(const WignerContext& ctx, double radius, int points_per_axis);

// fraction of the photons sitting in the max-pairing singular modes
double max_pairing_concentration(const PairingSpectrum& ps, Complex delta,
                                 const MomentOptions& opt = {});

}  // namespace pairlat
