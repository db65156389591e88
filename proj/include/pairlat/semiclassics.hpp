// Fixed points and linear stability of the semiclassical amplitude equations
// in the singular-mode frame, the stable max-pairing sphere, and numerical
// Jacobian cross-validation.

#pragma once

#include <optional>
#include <vector>

#include "pairlat/model.hpp"

namespace pairlat {

// d beta_j / dt = -i u [ 2 lambda_j conj(beta_j)
//                        + beta_j (2 sum_k |beta_k|^2 + 1 - Delta_eff / u) ]
VectorXc eom_rhs(const ModelSpec& spec, const PairingSpectrum& ps, const VectorXc& beta);

struct SpherePoint {
    double radius = 0.0;        // R of the stable sphere
    double theta = 0.0;         // common phase, principal branch (-pi/2, pi/2]
    int multiplicity = 1;       // s, dimension count of the max-pairing class
    double radius_minus = 0.0;  // second quadratic root, < 0 disallowed -> 0
    bool minus_exists = false;
};

// Nonzero stable stationary set: exists when (2 lambda_*)^2 > (kappa/2u)^2 and
// the radius formula is positive; otherwise only the origin is stable.
std::optional<SpherePoint> stable_sphere(const ModelSpec& spec, const PairingSpectrum& ps);

struct FixedPoint {
    VectorXc beta;              // amplitudes in the singular-mode frame
    double lambda_class = 0.0;  // shared singular value of the nonzero components
    double theta = 0.0;
    double radius = 0.0;        // |beta|
};

// a point on the (possibly unstable) ring/sphere attached to singular value
// class `cls`, along direction `dir` inside that class (real coefficients)
std::optional<FixedPoint> ring_fixed_point(const ModelSpec& spec, const PairingSpectrum& ps,
                                           int cls, const Eigen::VectorXd& dir,
                                           bool plus_root = true);

// max-norm of the equation-of-motion residual in u^-1 units at beta
double fixed_point_residual(const ModelSpec& spec, const PairingSpectrum& ps,
                            const VectorXc& beta);

// closed-form stability eigenvalues (absolute rate units):
//   transverse: -kappa/2 +- sqrt((kappa/2)^2 - 4 u^2 (lambda^2 - lambda_j^2))
//   radial:     -kappa/2 +- sqrt((kappa/2)^2 - 8 u^2 R^2 (2R^2+1) + 8 u Delta R^2)
// At the origin the per-mode pairs -kappa/2 +- sqrt(4 u^2 lambda_j^2 - (u-Delta)^2)
// apply instead.
std::vector<Complex> stability_eigenvalues_closed(const ModelSpec& spec,
                                                  const PairingSpectrum& ps,
                                                  const FixedPoint& fp);

// 2N x 2N real Jacobian of the equations of motion at beta, central
// differences with Richardson extrapolation.
Eigen::MatrixXd jacobian_numeric(const ModelSpec& spec, const PairingSpectrum& ps,
                                 const VectorXc& beta, double step = 1e-7);

// eigenvalues of the numerical Jacobian
std::vector<Complex> stability_eigenvalues_numeric(const ModelSpec& spec,
                                                   const PairingSpectrum& ps,
                                                   const VectorXc& beta);

// greedy multiset match; returns the largest pairing distance
double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b);

}  // namespace pairlat
