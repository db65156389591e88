// Brute-force steady states in the truncated Fock space: Liouvillian
// null-vector solves via pinned sparse LU, direct purification construction,
// hidden-TRS condition residuals, hopping invariance, nonthermality, and a
// displaced-parity Wigner transform of the density matrix.

#pragma once

#include <map>
#include <stdexcept>

#include "pairlat/fock.hpp"
#include "pairlat/moments.hpp"

namespace pairlat {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleOptions {
    double residual_tol = 1e-10;
    double truncation_reject = 1e-3;   // boundary-shell population above this fails hard
    double gmres_tol = 1e-13;
    int gmres_max_iters = 3000;
    int gmres_restart = 120;
    bool uniqueness_check = true;
};

struct SteadyStateOracle {
    FockBasis basis;
    MatrixXc rho;
    double residual = 0.0;              // ||L rho||_2 after hermitization
    double truncation_indicator = 0.0;  // boundary-shell population
    double min_eigenvalue = 0.0;
};

SteadyStateOracle steady_state(const ModelSpec& spec, const FockConfig& fock,
                               const MatrixXc* extra_one_body = nullptr,
                               const OracleOptions& opt = {});

// per-mode cutoff suggestion from a density estimate; total cutoff is twice
// the per-mode one since the drive adds excitations in pairs
FockConfig suggest_fock(const ModelSpec& spec, double nbar_est, int n_max_cap = 60);

// observables mirroring the exact pipeline, computed from the density matrix
struct OracleObservables {
    double nbar = 0.0;
    Eigen::VectorXd nbar_site;
    std::map<int, Complex> one_particle;
    std::map<int, Complex> pairing;
    std::map<int, double> g2;
    double g2_k = 0.0;
    Complex k_pairing = 0.0;
    bool has_g2_k = false;
    double g2_phi = 0.0;
    bool has_g2_phi = false;
};

OracleObservables oracle_observables(const ModelSpec& spec, const SteadyStateOracle& ss,
                                     const std::vector<int>& displacements,
                                     int ref_site = -1);

// ---------------------------------------------------------------------------
// purification on the doubled space
// ---------------------------------------------------------------------------

struct Purification {
    FockBasis basis;   // 2 n_modes, left modes first
    VectorXc psi;      // normalized
    long pairs_used = 0;
};

Purification purification_state(const ModelSpec& spec, const FockConfig& doubled);

// partial trace over the right factor, mapped onto `target`
MatrixXc trace_out_right(const Purification& p, const FockBasis& target);

// norms of the two hidden-TRS condition vectors applied to psi
struct HtrsResidual {
    double pairing_condition = 0.0;     // number-difference-plus-drive condition
    double antisymmetric_vacuum = 0.0;  // || alpha_{j,-} psi || summed over modes
};

HtrsResidual htrs_residual(const ModelSpec& spec, const Purification& p);

// || (K_- + 1) psi || / || psi || in the doubled Fock space
double pcs_residual_fock(const ModelSpec& spec, const Purification& p);

// trace distance of the steady state with and without the one-body term added
double hopping_invariance(const ModelSpec& spec, const FockConfig& fock,
                          const MatrixXc& hopping, const OracleOptions& opt = {});

// max-norm of [H, rho_ss]
double nonthermality(const ModelSpec& spec, const SteadyStateOracle& ss);

// displaced-parity Wigner transform of rho at a phase-space point
double oracle_wigner_at(const SteadyStateOracle& ss, const VectorXc& alpha);

// 0.5 * trace norm of the difference of two density matrices
double trace_distance(const MatrixXc& a, const MatrixXc& b);

}  // namespace pairlat
