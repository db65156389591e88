// Log-domain scalars: overflow-safe arithmetic for series with huge dynamic range.
//
// LogComplex stores a complex number as (log magnitude, phase); products and
// integer powers are exact in this representation, sums go through the ratio
// of the two operands and are safe as long as the *ratio* fits in a double.
// LogReal is the positive-real specialization used by the form-factor tables.

#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace pairlat {

using Complex = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Wrap an angle into (-pi, pi].
inline double wrap_phase(double ph) {
    if (std::isnan(ph)) return 0.0;
    ph = std::remainder(ph, 2.0 * M_PI);
    if (ph <= -M_PI) ph += 2.0 * M_PI;
    return ph;
}

// log(a + b) for a, b given as logs of nonnegative reals
inline double log_add(double la, double lb) {
    if (la == kNegInf) return lb;
    if (lb == kNegInf) return la;
    const double hi = std::max(la, lb);
    const double lo = std::min(la, lb);
    return hi + std::log1p(std::exp(lo - hi));
}

struct LogComplex {
    double log_mag = kNegInf;   // natural log of |z|; -inf encodes z == 0
    double phase   = 0.0;       // arg(z) in (-pi, pi]

    LogComplex() = default;
    LogComplex(double lm, double ph) : log_mag(lm), phase(wrap_phase(ph)) {}

    static LogComplex zero() { return {}; }
    static LogComplex one() { return {0.0, 0.0}; }

    static LogComplex from(Complex z) {
        const double m = std::abs(z);
        if (m == 0.0) return zero();
        return {std::log(m), std::arg(z)};
    }
    static LogComplex from_real(double x) {
        if (x == 0.0) return zero();
        return {std::log(std::abs(x)), x > 0 ? 0.0 : M_PI};
    }
    // exp(w) for complex w, kept in log form (never overflows)
    static LogComplex exp_of(Complex w) { return {w.real(), w.imag()}; }

    bool is_zero() const { return log_mag == kNegInf; }

    Complex value() const {
        if (is_zero()) return {0.0, 0.0};
        return std::polar(std::exp(log_mag), phase);
    }

    LogComplex conj() const { return {log_mag, -phase}; }

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return {a.log_mag + b.log_mag, a.phase + b.phase};
    }
    friend LogComplex operator/(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero()) return zero();
        return {a.log_mag - b.log_mag, a.phase - b.phase};
    }
    LogComplex& operator*=(const LogComplex& b) { return *this = *this * b; }
    LogComplex& operator/=(const LogComplex& b) { return *this = *this / b; }

    LogComplex pow_int(long k) const {
        if (is_zero()) return k == 0 ? one() : zero();
        return {log_mag * static_cast<double>(k), phase * static_cast<double>(k)};
    }

    LogComplex negate() const {
        if (is_zero()) return zero();
        return {log_mag, phase + M_PI};
    }

    // Sum via the ratio of the smaller to the larger term; exact cancellation
    // yields zero. Safe for |log_mag| far beyond double range as long as the
    // two terms are within ~700 of each other (otherwise the smaller one is
    // negligible anyway).
    friend LogComplex operator+(const LogComplex& a, const LogComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const LogComplex& big = (a.log_mag >= b.log_mag) ? a : b;
        const LogComplex& sml = (a.log_mag >= b.log_mag) ? b : a;
        const double d = sml.log_mag - big.log_mag;   // <= 0
        if (d < -745.0) return big;
        const Complex r = std::polar(std::exp(d), sml.phase - big.phase);
        const Complex w = 1.0 + r;
        const double wm = std::abs(w);
        if (wm == 0.0) return zero();
        return {big.log_mag + std::log(wm), big.phase + std::arg(w)};
    }
    LogComplex& operator+=(const LogComplex& b) { return *this = *this + b; }
};

}  // namespace pairlat
