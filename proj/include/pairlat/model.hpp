// Model definition: lattice pair-driving matrix, its Takagi factorization,
// and the derived scalar parameters entering the steady-state solution.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pairlat/log_complex.hpp"

namespace pairlat {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

enum class Boundary { periodic, open };

struct ModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ModelSpec {
    int n = 1;                       // number of bosonic modes
    int d = 0;                       // lattice dimension, 0 = no spatial structure
    std::vector<int> dims;           // extent per dimension, product == n (empty when d == 0)
    Boundary boundary = Boundary::periodic;
    double big_u = 1.0;              // global Hubbard energy U (nonzero)
    double delta = 0.0;              // drive detuning
    double kappa = 0.0;              // single-photon loss rate, >= 0
    Complex g = 0.0;                 // on-site pair drive
    Complex lambda_nn = 0.0;         // nearest-neighbour pair drive
    std::optional<MatrixXc> m_override;  // explicit symmetric pairing matrix

    void validate() const;
    double u() const { return big_u / static_cast<double>(n); }
};

struct DerivedScalars {
    double u;             // U / N
    Complex delta_eff;    // Delta + i kappa / 2
    Complex delta_dl;     // dimensionless detuning 1 - delta_eff / (2u)
};

inline DerivedScalars derived_scalars(const ModelSpec& spec) {
    DerivedScalars ds;
    ds.u = spec.u();
    ds.delta_eff = Complex(spec.delta, 0.5 * spec.kappa);
    ds.delta_dl = 1.0 - ds.delta_eff / (2.0 * ds.u);
    return ds;
}

struct PairingSpectrum {
    MatrixXc v;                           // unitary Takagi factor, M/u = V diag(lambda) V^T
    Eigen::VectorXd lambda;               // singular values of M/u, descending
    std::vector<std::vector<int>> classes;  // degeneracy classes (indices into lambda)
    double lambda_star = 0.0;             // largest singular value
    int multiplicity = 0;                 // modes sharing lambda_star

    bool degenerate() const { return classes.size() <= 1; }
};

// Pairing matrix for the hypercubic lattice: G on the diagonal, Lambda/2D on
// each nearest-neighbour bond. Periodic bonds are accumulated over the +/-
// unit vectors, so small rings (N=2 per axis) pick up both wraps of a bond
// and the circulant spectrum formula stays exact at every size.
MatrixXc build_pairing_matrix(const ModelSpec& spec);

// Autonne-Takagi factorization of M/u. Computed through the eigendecomposition
// of the real symmetric embedding [[Re C, Im C], [Im C, -Re C]] of C = M/u,
// whose con-eigenvectors give V directly and remain orthonormal through
// degenerate clusters. Ordering is descending with stable tie-break.
PairingSpectrum takagi(const MatrixXc& m, double u,
                       double class_tol = 1e-10);

// Closed-form singular value (1/|u|) |(Lambda/D) sum_j cos k_j + G| for the
// periodic hypercubic lattice; k has one component per dimension.
double singular_value_formula(const ModelSpec& spec, const std::vector<double>& k);

// All reciprocal-lattice wavevectors of the periodic lattice, row per mode.
std::vector<std::vector<double>> brillouin_zone(const ModelSpec& spec);

}  // namespace pairlat
