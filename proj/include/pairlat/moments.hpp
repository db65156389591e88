// Steady-state expectation values from the pair-condensate purification:
// collective ladder moments (closed hypergeometric forms when the singular
// values are degenerate, form-factor series otherwise), normally ordered
// local moments in the singular-mode basis, and physical-basis correlators
// assembled by re-expansion through the Takagi factor V.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pairlat/form_factors.hpp"
#include "pairlat/model.hpp"
#include "pairlat/special_functions.hpp"

namespace pairlat {

// kappa = 0 exactly on a multiphoton resonance: the steady state is singular
// there and every series in sight divides by zero.
struct ResonanceError : std::runtime_error {
    explicit ResonanceError(const std::string& msg, double suggested_kappa = 0.0)
        : std::runtime_error(msg), suggested_kappa(suggested_kappa) {}
    double suggested_kappa;
};

// Throws when the dimensionless detuning sits within tol of a non-positive
// integer. `u` (when nonzero) is used to phrase the nearest safe kappa.
void check_nonresonant(Complex delta, double u = 0.0, double tol = 1e-12);

struct MomentOptions {
    double tol = 1e-12;
    long max_cutoff = 1'000'000;   // hard cap on the form-factor cutoff
    long start_cutoff = 64;
    SeriesOptions series{};
};

// Expansion coefficients of the purification over the pair ladder.
struct PurificationCoefficients {
    Complex delta;
    // sum_m (c_m / m!) K_+^m |vac>, c_m = (-1)^m / (delta)_m
    LogComplex main_text(long m) const;
    // sum_m c_m K_+^m |vac>, 1/m! absorbed into c_m
    LogComplex absorbed(long m) const;
};

// <K_+^n N_+^k K_-^m> / <1|1>, all singular values equal to lambda.
Complex collective_moment_unitary(int n, int k, int m, double lambda, int n_modes,
                                  Complex delta, const SeriesOptions& opt = {});

// Same moment for a general singular-value spectrum, via the form-factor series.
Complex collective_moment_general(int n, int k, int m, const PairingSpectrum& ps,
                                  Complex delta, const MomentOptions& opt = {});

// Shared form-factor ladder for many collective moments at one parameter
// point: the table depends on the singular values only, so sweeps over the
// moment orders reuse it.
class CollectiveLadder {
  public:
    CollectiveLadder(const PairingSpectrum& ps, Complex delta, MomentOptions opt = {});
    Complex moment(int n, int k, int m);
    double log_norm() const { return log_norm_.log_mag; }
    long cutoff() const { return table_.cutoff; }

  private:
    PairingSpectrum ps_;
    Complex delta_;
    MomentOptions opt_;
    FormFactorTable table_;
    LogComplex log_norm_;
    long norm_terms_ = 0;

    friend Complex collective_moment_general(int, int, int, const PairingSpectrum&,
                                             Complex, const MomentOptions&);
};

// Normally ordered <b^dag^nu b^mu> in the singular-mode basis; exactly zero
// whenever nu_j and mu_j differ in parity for any mode (weak parity symmetry).
Complex local_moment(const std::vector<int>& nu, const std::vector<int>& mu,
                     const PairingSpectrum& ps, Complex delta,
                     const MomentOptions& opt = {});

// || (K_- + 1) |Psi> || / || |Psi> ||, evaluated on the pair ladder without
// any Fock-space construction; vanishes identically at delta = N/2.
double pcs_residual(const PairingSpectrum& ps, int n_modes, Complex delta, int cutoff,
                    const MomentOptions& opt = {});

struct ObservableSet {
    double nbar = 0.0;                       // site-averaged density
    Eigen::VectorXd nbar_site;               // per-site <n_i>
    std::map<int, Complex> one_particle;     // r -> <a_i^dag a_{i+r}>
    std::map<int, Complex> pairing;          // r -> <a_i a_{i+r}>
    std::map<int, double> g2;                // r -> g2 with exact per-site densities
    std::map<int, double> g2_avg;            // r -> site-averaged version
    double g2_k = 0.0;                       // fluctuation of the inverse-pairing observable
    Complex k_pairing = 0.0;                 // <k_-> itself
    bool has_g2_k = false;                   // M must be invertible
    double g2_phi = 0.0;                     // on-site pairing fluctuation
    bool has_g2_phi = false;
    double norm_log = 0.0;                   // log <Psi|Psi>
    int ref_site = 0;
    long cutoff_used = 0;
};

struct CorrelatorRequest {
    std::vector<int> displacements;   // along axis 0 (site-index offsets for d == 0)
    bool quartics = true;             // density-density / pair-pair blocks
    bool averaged_g2 = true;
    int ref_site = -1;                // -1: site 0 (periodic) or central site (open)
};

ObservableSet correlators(const ModelSpec& spec, const PairingSpectrum& ps, Complex delta,
                          const CorrelatorRequest& req, const MomentOptions& opt = {});

// Occupations of the singular modes, <b_j^dag b_j>, ordered like ps.lambda.
Eigen::VectorXd mode_occupations(const PairingSpectrum& ps, Complex delta,
                                 const MomentOptions& opt = {});

// <b_j^dag b_j'^dag b_j b_j'> for j != j', and <b_j^dag2 b_j'^2>.
double mode_density_correlation(int j, int jp, const PairingSpectrum& ps, Complex delta,
                                const MomentOptions& opt = {});

// Mean on-site density through the cheap collective path.
double mean_density(const PairingSpectrum& ps, int n_modes, Complex delta,
                    const MomentOptions& opt = {});

// log <Psi|Psi> = log sum_l Phi_l / ((delta)_l (delta*)_l)
double log_normalization(const PairingSpectrum& ps, Complex delta,
                         const MomentOptions& opt = {});

// Total-pair-number fluctuation Delta N_+ = sqrt(<N_+^2> - <N_+>^2).
double pair_number_rms(const PairingSpectrum& ps, int n_modes, Complex delta,
                       const MomentOptions& opt = {});

}  // namespace pairlat
