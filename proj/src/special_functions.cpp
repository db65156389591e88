#include "pairlat/special_functions.hpp"

#include <cmath>

namespace pairlat {

// Lanczos approximation, g = 7, 9 coefficients. Relative accuracy ~1e-13
// over the right half plane; reflection handles Re(z) < 1/2.
Complex log_gamma(Complex z) {
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (z.real() < 0.5) {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        const Complex s = std::sin(M_PI * z);
        if (s == Complex(0.0, 0.0))
            throw std::domain_error("log_gamma: pole at non-positive integer");
        return std::log(M_PI) - std::log(s) - log_gamma(1.0 - z);
    }
    const Complex zm1 = z - 1.0;
    Complex x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (zm1 + static_cast<double>(i));
    const Complex t = zm1 + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (zm1 + 0.5) * std::log(t) - t + std::log(x);
}

LogComplex pochhammer(Complex a, long m) {
    if (m < 0) throw std::invalid_argument("pochhammer: negative order");
    if (m == 0) return LogComplex::one();
    if (m <= 32) {
        LogComplex p = LogComplex::one();
        for (long i = 0; i < m; ++i) {
            const Complex f = a + static_cast<double>(i);
            if (f == Complex(0.0, 0.0)) return LogComplex::zero();
            p *= LogComplex::from(f);
        }
        return p;
    }
    // Gamma(a+m)/Gamma(a); a exactly on a non-positive integer gives zero
    // through the direct-product path above only, so guard here.
    if (a.imag() == 0.0 && a.real() <= 0.0 && a.real() == std::floor(a.real())) {
        return LogComplex::zero();  // the factor (a + |a|) vanishes and m > |a|
    }
    const Complex lg = log_gamma(a + static_cast<double>(m)) - log_gamma(a);
    return LogComplex::exp_of(lg);
}

SeriesResult hyper_pfq(const std::vector<Complex>& a, const std::vector<Complex>& b,
                       Complex z, const SeriesOptions& opt, int weight_k) {
    for (const Complex& bj : b) {
        if (bj.imag() == 0.0 && bj.real() <= 0.0 && bj.real() == std::floor(bj.real()))
            throw SeriesError("hyper_pfq: lower parameter at non-positive integer");
    }

    SeriesResult res;
    LogComplex term = LogComplex::one();          // bare term prod(a)_l/prod(b)_l z^l/l!
    LogComplex sum = LogComplex::zero();
    double max_term_log = kNegInf;                // over weighted terms
    double max_sum_log = kNegInf;
    double last_weighted_log = kNegInf;
    double last_ratio = 0.0;
    int small_streak = 0;
    const double log_tol = std::log(opt.tol);

    const LogComplex lz = LogComplex::from(z);
    for (long l = 0;; ++l) {
        LogComplex weighted = term;
        if (weight_k > 0) {
            if (l == 0) {
                weighted = LogComplex::zero();
            } else {
                weighted *= LogComplex::from_real(2.0 * static_cast<double>(l)).pow_int(weight_k);
            }
        }
        sum += weighted;
        res.terms_used = l + 1;
        max_term_log = std::max(max_term_log, weighted.log_mag);
        max_sum_log = std::max(max_sum_log, sum.log_mag);
        last_weighted_log = weighted.log_mag;

        // convergence: three consecutive weighted terms below tol * max |partial sum|
        if (l > 0) {
            if (weighted.log_mag < max_sum_log + log_tol) {
                if (++small_streak >= 3) {
                    res.converged = true;
                    break;
                }
            } else {
                small_streak = 0;
            }
        }
        if (l + 1 >= opt.max_terms)
            throw SeriesError("hyper_pfq: max_terms exceeded");

        LogComplex ratio = lz;
        for (const Complex& aj : a) ratio *= LogComplex::from(aj + static_cast<double>(l));
        for (const Complex& bj : b) ratio /= LogComplex::from(bj + static_cast<double>(l));
        ratio /= LogComplex::from_real(static_cast<double>(l + 1));
        last_ratio = std::exp(ratio.log_mag);
        term *= ratio;
        if (term.is_zero()) {  // terminating series (some (a)_l hit zero)
            res.converged = true;
            break;
        }
    }

    res.value = sum;
    if (!sum.is_zero()) {
        const double q = std::min(last_ratio, 0.5);
        res.tail_bound = std::exp(last_weighted_log - sum.log_mag) * last_ratio / (1.0 - q);
        if (max_term_log > kNegInf)
            res.cancellation = std::exp(std::max(0.0, max_term_log - sum.log_mag));
    }
    return res;
}

}  // namespace pairlat
