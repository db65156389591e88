// Truncated Fock spaces and sparse operators for the brute-force verification
// path, including the doubled space used by purifications.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "pairlat/model.hpp"

namespace pairlat {

using SparseC = Eigen::SparseMatrix<Complex>;

struct FockConfig {
    int n_modes = 1;
    int n_max = 20;       // per-mode occupation cutoff
    int n_tot_max = 40;   // total occupation cutoff
};

struct FockBasis {
    FockConfig cfg;
    std::vector<std::vector<std::uint16_t>> states;  // lexicographic order

    long dim() const { return static_cast<long>(states.size()); }
    long find(const std::vector<std::uint16_t>& occ) const;  // -1 when absent

    static FockBasis build(const FockConfig& cfg);
};

// annihilation operator for one mode
SparseC lowering(const FockBasis& basis, int mode);

// sum_j n_j as a diagonal operator
SparseC total_number(const FockBasis& basis);

// sum_{IJ} c_IJ a_I^dag a_J^dag
SparseC pair_creation(const FockBasis& basis, const MatrixXc& c);

// sum_{IJ} j_IJ a_I^dag a_J
SparseC one_body(const FockBasis& basis, const MatrixXc& j);

// u N^2 - Delta N + sum_ij (M_ij a_i^dag a_j^dag + h.c.)
SparseC hamiltonian(const FockBasis& basis, const ModelSpec& spec, const MatrixXc& m);

// population on the outermost shells (any n_j >= n_max-1 or total >= n_tot_max-1)
double boundary_population(const FockBasis& basis, const MatrixXc& rho);

}  // namespace pairlat
