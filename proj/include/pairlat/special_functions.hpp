// Complex log-gamma, Pochhammer symbols, and generalized hypergeometric
// series pFq summed by term-ratio recursion in log-domain arithmetic.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pairlat/log_complex.hpp"

namespace pairlat {

// Thrown when a series stops converging inside its term budget, or when a
// lower parameter sits on a non-positive integer (the series is undefined).
struct SeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Principal-branch log Gamma(z), valid off the non-positive real axis.
Complex log_gamma(Complex z);

// Rising factorial (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1.
// Direct product for small m, log-gamma for large m.
LogComplex pochhammer(Complex a, long m);

struct SeriesResult {
    LogComplex value;
    long terms_used = 0;
    double tail_bound = 0.0;        // estimated relative truncation error
    double cancellation = 1.0;      // max-term magnitude over result magnitude
    bool converged = false;
};

struct SeriesOptions {
    double tol = 1e-12;
    long max_terms = 2'000'000;
    // Series whose intermediate terms exceed the result by more than this
    // factor have lost digits; the caller is told via `cancellation`.
    double cancellation_limit = 1e6;
};

// sum_l (2l)^weight_k * prod_m (a_m)_l / prod_m (b_m)_l * z^l / l!
//
// Terms are carried as LogComplex and advanced by the exact ratio
// z * prod(a+l) / (prod(b+l) (l+1)), so individual terms may exceed the
// double range by hundreds of orders of magnitude. Summation stops once
// three consecutive terms fall below tol relative to the largest partial
// sum seen so far (hypergeometric terms can have interior zeros).
SeriesResult hyper_pfq(const std::vector<Complex>& a, const std::vector<Complex>& b,
                       Complex z, const SeriesOptions& opt = {}, int weight_k = 0);

}  // namespace pairlat
