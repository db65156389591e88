// Combinatorial form-factor tables: sums over pair-occupation compositions
// weighted by singular values, built by O(k^2 N) recursions in log space.
// Every entry is a positive real, so tables store plain logs and additions
// never cancel.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pairlat/log_complex.hpp"

namespace pairlat {

struct FormFactorTable {
    std::vector<double> log_values;   // log Phi_l, l = 0..cutoff
    Eigen::VectorXd lambda;
    std::vector<int> n_vec, m_vec;
    std::vector<int> b_vec;
    int cutoff = 0;

    double log_at(int l) const { return log_values.at(static_cast<size_t>(l)); }
    double at(int l) const { return std::exp(log_at(l)); }
};

// Phi_l = sum_{|k|=l} prod_j (1/2)_{k_j} lambda_j^{2 k_j}
FormFactorTable phi_plain(const Eigen::VectorXd& lambda, int cutoff);

// Phi_l = sum_{|k|=l} prod_j (1/2+n_j+b_j)_{k_j} (1/2+m_j+b_j)_{k_j}
//                             (4 lambda_j)^{2 k_j} / (2 k_j + b_j)!
FormFactorTable phi_general(const Eigen::VectorXd& lambda, const std::vector<int>& n_vec,
                            const std::vector<int>& m_vec, const std::vector<int>& b_vec,
                            int cutoff);

// Phi_l = sum_{|k|=l} prod_j (1/2)_{k_j} lambda_j^{2 k_j} / k_j!
//       = [x^l] prod_j (1 - lambda_j^2 x)^{-1/2}
// This is the table entering collective moments and normalizations; it equals
// phi_general at rescaled argument lambda/2 with all indices zero. Evaluated
// through the power-sum recurrence (l+1) Phi_{l+1} = (1/2) sum_t P_{t+1} Phi_{l-t}
// with P_s = sum_j lambda_j^{2s}, which costs O(k^2 + kN) and stays
// cancellation-free because every quantity is positive.
FormFactorTable phi_collective(const Eigen::VectorXd& lambda, int cutoff);

}  // namespace pairlat
