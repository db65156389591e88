#include "pairlat/form_factors.hpp"

#include <cmath>
#include <stdexcept>

namespace pairlat {

namespace {

void check_lambda(const Eigen::VectorXd& lambda) {
    if (lambda.size() == 0) throw std::invalid_argument("form factors: empty lambda");
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
        if (lambda(j) < 0.0) throw std::invalid_argument("form factors: negative lambda");
}

// one convolution stage: cur[l] = logsum_p w[p] + prev[l-p]
void convolve_mode(const std::vector<double>& w, const std::vector<double>& prev,
                   std::vector<double>& cur) {
    const int k = static_cast<int>(prev.size()) - 1;
    for (int l = k; l >= 0; --l) {
        double acc = kNegInf;
        for (int p = 0; p <= l; ++p) acc = log_add(acc, w[p] + prev[l - p]);
        cur[l] = acc;
    }
}

}  // namespace

FormFactorTable phi_plain(const Eigen::VectorXd& lambda, int cutoff) {
    check_lambda(lambda);
    if (cutoff < 0) throw std::invalid_argument("phi_plain: negative cutoff");
    const int k = cutoff;

    std::vector<double> w(k + 1), prev(k + 1), cur(k + 1);
    bool first = true;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double l2 = lambda(j) > 0 ? 2.0 * std::log(lambda(j)) : kNegInf;
        w[0] = 0.0;  // (1/2)_0 lambda^0 = 1
        for (int p = 1; p <= k; ++p)
            w[p] = w[p - 1] + std::log(p - 0.5) + l2;
        if (first) {
            prev = w;
            first = false;
        } else {
            convolve_mode(w, prev, cur);
            std::swap(prev, cur);
        }
    }

    FormFactorTable t;
    t.log_values = std::move(prev);
    t.lambda = lambda;
    t.cutoff = k;
    return t;
}

FormFactorTable phi_general(const Eigen::VectorXd& lambda, const std::vector<int>& n_vec,
                            const std::vector<int>& m_vec, const std::vector<int>& b_vec,
                            int cutoff) {
    check_lambda(lambda);
    const size_t nmodes = static_cast<size_t>(lambda.size());
    if (n_vec.size() != nmodes || m_vec.size() != nmodes || b_vec.size() != nmodes)
        throw std::invalid_argument("phi_general: index vector length mismatch");
    if (cutoff < 0) throw std::invalid_argument("phi_general: negative cutoff");
    const int k = cutoff;

    std::vector<double> w(k + 1), prev(k + 1), cur(k + 1);
    bool first = true;
    for (size_t j = 0; j < nmodes; ++j) {
        if (n_vec[j] < 0 || m_vec[j] < 0 || (b_vec[j] != 0 && b_vec[j] != 1))
            throw std::invalid_argument("phi_general: indices must be n,m >= 0 and b in {0,1}");
        const double a1 = 0.5 + n_vec[j] + b_vec[j];
        const double a2 = 0.5 + m_vec[j] + b_vec[j];
        const double b = b_vec[j];
        const double l2 = lambda(j) > 0 ? 2.0 * std::log(4.0 * lambda(j)) : kNegInf;
        w[0] = 0.0;  // (2*0 + b)! = 1 for b in {0,1}
        for (int p = 1; p <= k; ++p) {
            w[p] = w[p - 1] + std::log(a1 + p - 1) + std::log(a2 + p - 1) + l2 -
                   std::log(2 * p + b) - std::log(2 * p + b - 1);
        }
        if (first) {
            prev = w;
            first = false;
        } else {
            convolve_mode(w, prev, cur);
            std::swap(prev, cur);
        }
    }

    FormFactorTable t;
    t.log_values = std::move(prev);
    t.lambda = lambda;
    t.n_vec = n_vec;
    t.m_vec = m_vec;
    t.b_vec = b_vec;
    t.cutoff = k;
    return t;
}

FormFactorTable phi_collective(const Eigen::VectorXd& lambda, int cutoff) {
    check_lambda(lambda);
    if (cutoff < 0) throw std::invalid_argument("phi_collective: negative cutoff");
    const int k = cutoff;

    // log power sums P_s = sum_j lambda_j^{2s}, s = 1..k
    std::vector<double> logp(k + 1, kNegInf);
    for (int s = 1; s <= k; ++s) {
        double acc = kNegInf;
        for (Eigen::Index j = 0; j < lambda.size(); ++j)
            if (lambda(j) > 0) acc = log_add(acc, 2.0 * s * std::log(lambda(j)));
        logp[s] = acc;
    }

    std::vector<double> phi(k + 1);
    phi[0] = 0.0;
    const double lhalf = std::log(0.5);
    for (int l = 0; l < k; ++l) {
        double acc = kNegInf;
        for (int t = 0; t <= l; ++t) acc = log_add(acc, logp[t + 1] + phi[l - t]);
        phi[l + 1] = lhalf + acc - std::log(static_cast<double>(l + 1));
    }

    FormFactorTable t;
    t.log_values = std::move(phi);
    t.lambda = lambda;
    t.cutoff = k;
    return t;
}

}  // namespace pairlat
