#include "pairlat/moments.hpp"

#include <algorithm>
#include <cmath>

namespace pairlat {

void check_nonresonant(Complex delta, double u, double tol) {
    const double re = delta.real();
    const double im = delta.imag();
    if (re > 0.5) return;
    const double nearest = std::round(re);
    if (nearest > 0.0) return;
    const double dist = std::hypot(re - nearest, im);
    if (dist < tol) {
        double kap = 0.0;
        if (u != 0.0) kap = 4.0 * std::abs(u) * 100.0 * tol;  // |Im delta| = kappa/(4u)
        throw ResonanceError(
            "resonant detuning: dimensionless delta sits on a non-positive integer "
            "(kappa = 0 at a multiphoton resonance); increase kappa",
            kap);
    }
}

LogComplex PurificationCoefficients::main_text(long m) const {
    // (-1)^m / (delta)_m
    LogComplex c = pochhammer(delta, m).pow_int(-1);
    return (m % 2 == 0) ? c : c.negate();
}

LogComplex PurificationCoefficients::absorbed(long m) const {
    LogComplex c = main_text(m);
    c /= LogComplex::exp_of(Complex(std::lgamma(static_cast<double>(m) + 1.0), 0.0));
    return c;
}

namespace {

// log m!
double log_factorial(long m) { return std::lgamma(static_cast<double>(m) + 1.0); }

// accumulator with the 3-consecutive-small-terms stopping rule
struct SumAcc {
    LogComplex sum = LogComplex::zero();
    double max_sum_log = kNegInf;
    double max_term_log = kNegInf;
    int streak = 0;
    long used = 0;

    // returns true once converged
    bool add(const LogComplex& term, double log_tol) {
        sum += term;
        ++used;
        max_sum_log = std::max(max_sum_log, sum.log_mag);
        max_term_log = std::max(max_term_log, term.log_mag);
        if (used > 1 && term.log_mag < max_sum_log + log_tol) {
            if (++streak >= 3) return true;
        } else if (used > 1) {
            streak = 0;
        }
        return false;
    }
};

long initial_cutoff(const PairingSpectrum& ps, const MomentOptions& opt) {
    const double ls = ps.lambda_star;
    const double n = static_cast<double>(ps.lambda.size());
    // the series peak sits near lambda_* sqrt(N/2); the quadratic heuristic
    // 8 lambda_*^2 / N overshoots it badly at small N, so take the smaller
    const long quadratic = 8L * static_cast<long>(std::ceil(ls * ls / std::max(1.0, n)));
    const long peak = static_cast<long>(std::ceil(6.0 * ls * std::sqrt(n))) + 64;
    return std::max(opt.start_cutoff, std::min(quadratic, peak));
}

// log <Psi|Psi> = log sum_l Phi_l / ((delta)_l (delta*)_l) from a collective table;
// converged flag reports whether the stopping rule fired inside the table.
struct NormResult {
    LogComplex value;
    long used = 0;
    bool converged = false;
};

NormResult norm_from_table(const FormFactorTable& tab, Complex delta, double tol) {
    NormResult r;
    SumAcc acc;
    const double log_tol = std::log(tol);
    LogComplex dpoch = LogComplex::one();  // (delta)_l (delta*)_l
    for (int l = 0; l <= tab.cutoff; ++l) {
        if (l > 0) {
            const Complex f = delta + static_cast<double>(l - 1);
            dpoch *= LogComplex::from(f) * LogComplex::from(std::conj(f));
        }
        const LogComplex term = LogComplex(tab.log_at(l), 0.0) / dpoch;
        if (acc.add(term, log_tol)) {
            r.converged = true;
            break;
        }
    }
    r.value = acc.sum;
    r.used = acc.used;
    return r;
}

// collective table grown until the normalization series converges
struct LadderContext {
    FormFactorTable coll;
    LogComplex log_norm;
    long norm_terms = 0;
};

LadderContext make_ladder(const PairingSpectrum& ps, Complex delta, const MomentOptions& opt) {
    long k = initial_cutoff(ps, opt);
    for (;;) {
        FormFactorTable tab = phi_collective(ps.lambda, static_cast<int>(k));
        NormResult nr = norm_from_table(tab, delta, opt.tol);
        if (nr.converged) {
            return {std::move(tab), nr.value, nr.used};
        }
        if (k >= opt.max_cutoff)
            throw SeriesError("moments: normalization series cutoff budget exhausted");
        k = std::min(opt.max_cutoff, 2 * k);
    }
}

}  // namespace

Complex collective_moment_unitary(int n, int k, int m, double lambda, int n_modes,
                                  Complex delta, const SeriesOptions& opt) {
    check_nonresonant(delta);
    if (n < 0 || k < 0 || m < 0) throw std::invalid_argument("collective moment: negative order");
    if (n + k + m == 0) return 1.0;
    if (lambda == 0.0) return 0.0;

    const double half_n = 0.5 * n_modes;
    const Complex z = lambda * lambda;
    const Complex dconj = std::conj(delta);

    const SeriesResult den = hyper_pfq({half_n}, {delta, dconj}, z, opt);
    const SeriesResult num = hyper_pfq({half_n + n, half_n + m},
                                       {half_n, dconj + static_cast<double>(n),
                                        delta + static_cast<double>(m)},
                                       z, opt, k);

    LogComplex pref = LogComplex::from_real(lambda).pow_int(2 * n);
    if ((n + m) % 2 != 0) pref = pref.negate();
    pref *= pochhammer(half_n, n) * pochhammer(half_n, m);
    pref /= pochhammer(dconj, n) * pochhammer(delta, m);
    return (pref * num.value / den.value).value();
}

CollectiveLadder::CollectiveLadder(const PairingSpectrum& ps, Complex delta, MomentOptions opt)
    : ps_(ps), delta_(delta), opt_(opt) {
    check_nonresonant(delta);
    LadderContext ctx = make_ladder(ps_, delta_, opt_);
    table_ = std::move(ctx.coll);
    log_norm_ = ctx.log_norm;
    norm_terms_ = ctx.norm_terms;
}

Complex CollectiveLadder::moment(int n, int k, int m) {
    if (n < 0 || k < 0 || m < 0) throw std::invalid_argument("collective moment: negative order");
    if (n + k + m == 0) return 1.0;
    if (ps_.lambda_star == 0.0) return 0.0;

    const int nm = static_cast<int>(ps_.lambda.size());
    const double half_n = 0.5 * nm;
    const Complex dconj = std::conj(delta_);
    const double log_tol = std::log(opt_.tol);

    for (;;) {
        // sum_l (N/2+m)_l (n+l)! (2l)^k Phi_{n+l} / [(d*+n)_l (d+m)_l (N/2)_l l!]
        SumAcc acc;
        LogComplex run = LogComplex::exp_of(Complex(log_factorial(n), 0.0));  // running prefactors
        bool converged = false;
        for (int l = 0; n + l <= table_.cutoff; ++l) {
            if (l > 0) {
                run *= LogComplex::from_real(half_n + m + (l - 1));
                run *= LogComplex::from_real(static_cast<double>(n + l));
                run /= LogComplex::from(dconj + static_cast<double>(n + l - 1));
                run /= LogComplex::from(delta_ + static_cast<double>(m + l - 1));
                run /= LogComplex::from_real(half_n + (l - 1));
                run /= LogComplex::from_real(static_cast<double>(l));
            }
            LogComplex term = run * LogComplex(table_.log_at(n + l), 0.0);
            if (k > 0) {
                if (l == 0) continue;
                term *= LogComplex::from_real(2.0 * l).pow_int(k);
            }
            if (acc.add(term, log_tol)) {
                converged = true;
                break;
            }
        }
        if (converged) {
            LogComplex pref = pochhammer(half_n, m);
            if ((n + m) % 2 != 0) pref = pref.negate();
            pref /= pochhammer(dconj, n) * pochhammer(delta_, m);
            return (pref * acc.sum / log_norm_).value();
        }
        if (table_.cutoff >= opt_.max_cutoff)
            throw SeriesError("collective_moment_general: cutoff budget exhausted");
        table_ = phi_collective(ps_.lambda,
                                static_cast<int>(std::min<long>(opt_.max_cutoff,
                                                                2L * table_.cutoff)));
    }
}

Complex collective_moment_general(int n, int k, int m, const PairingSpectrum& ps,
                                  Complex delta, const MomentOptions& opt) {
    CollectiveLadder ladder(ps, delta, opt);
    return ladder.moment(n, k, m);
}

namespace {

// series sum_l Phi_l / [(d* + a_shift)_l (d + b_shift)_l] over a general table
struct TableSum {
    LogComplex value;
    bool converged = false;
};

TableSum local_series(const FormFactorTable& tab, Complex delta, int a_shift, int b_shift,
                      double tol) {
    TableSum ts;
    SumAcc acc;
    const double log_tol = std::log(tol);
    const Complex dconj = std::conj(delta);
    LogComplex run = LogComplex::one();
    for (int l = 0; l <= tab.cutoff; ++l) {
        if (l > 0) {
            run /= LogComplex::from(dconj + static_cast<double>(a_shift + l - 1));
            run /= LogComplex::from(delta + static_cast<double>(b_shift + l - 1));
        }
        if (acc.add(run * LogComplex(tab.log_at(l), 0.0), log_tol)) {
            ts.converged = true;
            break;
        }
    }
    ts.value = acc.sum;
    return ts;
}

// log (1/2)_p for small p
double log_poch_half(int p) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += std::log(0.5 + i);
    return s;
}

struct LocalIndices {
    std::vector<int> n, m, b;
    int sum_n = 0, sum_m = 0, sum_b = 0;
    bool parity_ok = true;
};

LocalIndices decompose(const std::vector<int>& nu, const std::vector<int>& mu) {
    LocalIndices li;
    const size_t n = nu.size();
    li.n.resize(n);
    li.m.resize(n);
    li.b.resize(n);
    for (size_t j = 0; j < n; ++j) {
        if (nu[j] < 0 || mu[j] < 0) throw std::invalid_argument("local_moment: negative exponent");
        if ((nu[j] & 1) != (mu[j] & 1)) {
            li.parity_ok = false;
            return li;
        }
        li.b[j] = nu[j] & 1;
        li.n[j] = (nu[j] - li.b[j]) / 2;
        li.m[j] = (mu[j] - li.b[j]) / 2;
        li.sum_n += li.n[j];
        li.sum_m += li.m[j];
        li.sum_b += li.b[j];
    }
    return li;
}

// prefactor of the normally ordered moment, everything except the table series
// and the normalization:
//   2^{-(Sn+Sm+Sb)} (-1)^{Sn+Sm} prod_j (2 lam_j)^{n_j+m_j+2 b_j}
//     (1/2)_{n_j+b_j} (1/2)_{m_j+b_j} / [(d*)_{Sn+Sb} (d)_{Sm+Sb}]
LogComplex local_prefactor(const LocalIndices& li, const Eigen::VectorXd& lambda,
                           Complex delta) {
    LogComplex pref = LogComplex::from_real(
        std::exp2(-static_cast<double>(li.sum_n + li.sum_m + li.sum_b)));
    if ((li.sum_n + li.sum_m) % 2 != 0) pref = pref.negate();
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const int pw = li.n[j] + li.m[j] + 2 * li.b[j];
        if (pw == 0) continue;
        if (lambda(j) == 0.0) return LogComplex::zero();
        pref *= LogComplex::from_real(2.0 * lambda(j)).pow_int(pw);
        pref *= LogComplex(log_poch_half(li.n[j] + li.b[j]) + log_poch_half(li.m[j] + li.b[j]),
                           0.0);
    }
    pref /= pochhammer(std::conj(delta), li.sum_n + li.sum_b);
    pref /= pochhammer(delta, li.sum_m + li.sum_b);
    return pref;
}

// table for the physical convention: the generalized recursion evaluated at
// lambda/2, which carries (2 lambda)^{2k} per composition
FormFactorTable scaled_general(const Eigen::VectorXd& lambda, const std::vector<int>& n,
                               const std::vector<int>& m, const std::vector<int>& b, long k) {
    return phi_general(0.5 * lambda, n, m, b, static_cast<int>(k));
}

}  // namespace

Complex local_moment(const std::vector<int>& nu, const std::vector<int>& mu,
                     const PairingSpectrum& ps, Complex delta, const MomentOptions& opt) {
    check_nonresonant(delta);
    const size_t nm = static_cast<size_t>(ps.lambda.size());
    if (nu.size() != nm || mu.size() != nm)
        throw std::invalid_argument("local_moment: exponent vector length mismatch");

    const LocalIndices li = decompose(nu, mu);
    if (!li.parity_ok) return 0.0;
    if (li.sum_n + li.sum_m + li.sum_b == 0) return 1.0;

    const LogComplex pref = local_prefactor(li, ps.lambda, delta);
    if (pref.is_zero()) return 0.0;

    LadderContext ctx = make_ladder(ps, delta, opt);
    long k = ctx.norm_terms + 64 + ctx.norm_terms / 4;
    for (;;) {
        const FormFactorTable tab = scaled_general(ps.lambda, li.n, li.m, li.b, k);
        const TableSum ts =
            local_series(tab, delta, li.sum_n + li.sum_b, li.sum_m + li.sum_b, opt.tol);
        if (ts.converged) return (pref * ts.value / ctx.log_norm).value();
        if (k >= opt.max_cutoff) throw SeriesError("local_moment: cutoff budget exhausted");
        k = std::min(opt.max_cutoff, 2 * k);
    }
}

double pcs_residual(const PairingSpectrum& ps, int n_modes, Complex delta, int cutoff,
                    const MomentOptions& opt) {
    check_nonresonant(delta);
    const double half_n = 0.5 * n_modes;
    const PurificationCoefficients pc{delta};
    FormFactorTable tab = phi_collective(ps.lambda, cutoff);

    // || (K_- + 1) Psi ||^2 = sum_m |c_m + (m+1)(N/2+m) c_{m+1}|^2 (m!)^2 Phi_m
    double log_num = kNegInf;
    double log_den = kNegInf;
    for (int m = 0; m <= cutoff; ++m) {
        const LogComplex cm = pc.absorbed(m);
        const LogComplex em =
            pc.absorbed(m + 1) *
            LogComplex::from_real((m + 1.0) * (half_n + static_cast<double>(m)));
        const LogComplex both = cm + em;
        const double gram = 2.0 * log_factorial(m) + tab.log_at(m);
        if (!both.is_zero()) log_num = log_add(log_num, 2.0 * both.log_mag + gram);
        log_den = log_add(log_den, 2.0 * cm.log_mag + gram);
    }
    (void)opt;
    if (log_num == kNegInf) return 0.0;
    return std::exp(0.5 * (log_num - log_den));
}

// ---------------------------------------------------------------------------
// correlator assembly
// ---------------------------------------------------------------------------

namespace {

struct BBasisMoments {
    Eigen::VectorXd occ;      // <b_j^dag b_j>
    VectorXc pair;            // <b_j^2>
    Eigen::MatrixXd nn;       // <b_j^dag b_j'^dag b_j b_j'>, j != j' (diagonal unused)
    MatrixXc pair2;           // <b_j^dag2 b_j'^2>
    bool quartics = false;
};

// ---- general (non-degenerate) path -----------------------------------------

// Convolution helpers on log-value vectors of fixed length k+1.
using LogVec = std::vector<double>;

LogVec conv(const LogVec& a, const LogVec& b) {
    const int k = static_cast<int>(a.size()) - 1;
    LogVec c(k + 1, kNegInf);
    for (int l = 0; l <= k; ++l) {
        double acc = kNegInf;
        for (int p = 0; p <= l; ++p) acc = log_add(acc, a[p] + b[l - p]);
        c[l] = acc;
    }
    return c;
}

// per-mode weight vectors of the physical-convention generalized recursion,
// i.e. (1/2+n+b)_p (1/2+m+b)_p (2 lambda)^{2p} / (2p+b)!
LogVec mode_weights(double lambda, int n, int m, int b, int k) {
    LogVec w(static_cast<size_t>(k) + 1, kNegInf);
    w[0] = 0.0;
    if (lambda <= 0.0) return w;
    const double l2 = 2.0 * std::log(2.0 * lambda);
    const double a1 = 0.5 + n + b;
    const double a2 = 0.5 + m + b;
    for (int p = 1; p <= k; ++p)
        w[p] = w[p - 1] + std::log(a1 + p - 1) + std::log(a2 + p - 1) + l2 -
               std::log(2.0 * p + b) - std::log(2.0 * p + b - 1);
    return w;
}

// All-pairs quartic tables in one sweep. kind_b selects the shared-odd-boson
// block (b_j = b_j' = 1) versus the two-pair block (n_j = m_j' = 1).
// Prefix/suffix products of the plain weights keep each pair at O(k^2)
// instead of O(N k^2).
struct QuarticTables {
    std::vector<LogVec> nn;     // index j * N + j', j < j'
    std::vector<LogVec> pair2;  // same layout
    std::vector<LogVec> diag;   // <b_j^dag2 b_j^2> tables
    int n = 0;
};

QuarticTables build_quartic_tables(const Eigen::VectorXd& lambda, int k) {
    const int n = static_cast<int>(lambda.size());
    QuarticTables qt;
    qt.n = n;
    qt.nn.resize(static_cast<size_t>(n) * n);
    qt.pair2.resize(static_cast<size_t>(n) * n);
    qt.diag.resize(n);

    std::vector<LogVec> plain(n), modified_b(n), modified_nm(n), modified_diag(n);
    for (int j = 0; j < n; ++j) {
        plain[j] = mode_weights(lambda(j), 0, 0, 0, k);
        modified_b[j] = mode_weights(lambda(j), 0, 0, 1, k);
        modified_nm[j] = mode_weights(lambda(j), 1, 0, 0, k);  // == (0,1,0) by symmetry
        modified_diag[j] = mode_weights(lambda(j), 1, 1, 0, k);
    }

    // prefix[t] = w_0 * ... * w_{t-1}, suffix[t] = w_t * ... * w_{n-1}
    LogVec unit(static_cast<size_t>(k) + 1, kNegInf);
    unit[0] = 0.0;
    std::vector<LogVec> prefix(n + 1), suffix(n + 1);
    prefix[0] = unit;
    for (int t = 0; t < n; ++t) prefix[t + 1] = conv(prefix[t], plain[t]);
    suffix[n] = unit;
    for (int t = n - 1; t >= 0; --t) suffix[t] = conv(plain[t], suffix[t + 1]);

    for (int j = 0; j < n; ++j)
        qt.diag[j] = conv(conv(prefix[j], suffix[j + 1]), modified_diag[j]);

    for (int j = 0; j < n; ++j) {
        // running product of plain weights over (j, t) exclusive of both ends
        LogVec mid = unit;
        for (int t = j + 1; t < n; ++t) {
            const LogVec common = conv(conv(prefix[j], mid), suffix[t + 1]);
            qt.nn[static_cast<size_t>(j) * n + t] =
                conv(conv(common, modified_b[j]), modified_b[t]);
            qt.pair2[static_cast<size_t>(j) * n + t] =
                conv(conv(common, modified_nm[j]), modified_nm[t]);
            mid = conv(mid, plain[t]);
        }
    }
    return qt;
}

FormFactorTable as_table(LogVec v, const Eigen::VectorXd& lambda) {
    FormFactorTable t;
    t.cutoff = static_cast<int>(v.size()) - 1;
    t.log_values = std::move(v);
    t.lambda = lambda;
    return t;
}

BBasisMoments bbasis_general(const PairingSpectrum& ps, Complex delta, bool quartics,
                             const MomentOptions& opt, const LadderContext& ctx,
                             long* cutoff_used) {
    const int n = static_cast<int>(ps.lambda.size());
    BBasisMoments bm;
    bm.occ.resize(n);
    bm.pair.resize(n);
    long k = ctx.norm_terms + 64 + ctx.norm_terms / 4;

    for (;;) {
        bool ok = true;
        // quadratic moments: occ needs (n=m=0, b=e_j); pair needs (m=e_j)
        for (int j = 0; j < n && ok; ++j) {
            if (ps.lambda(j) == 0.0) {
                bm.occ(j) = 0.0;
                bm.pair(j) = 0.0;
                continue;
            }
            std::vector<int> zero(n, 0), bj(n, 0), mj(n, 0);
            bj[j] = 1;
            mj[j] = 1;
            {
                const FormFactorTable tab = scaled_general(ps.lambda, zero, zero, bj, k);
                const TableSum ts = local_series(tab, delta, 1, 1, opt.tol);
                ok = ok && ts.converged;
                if (ok) {
                    LocalIndices li{zero, zero, bj, 0, 0, 1, true};
                    bm.occ(j) =
                        (local_prefactor(li, ps.lambda, delta) * ts.value / ctx.log_norm)
                            .value()
                            .real();
                }
            }
            if (ok) {
                const FormFactorTable tab = scaled_general(ps.lambda, zero, mj, zero, k);
                const TableSum ts = local_series(tab, delta, 0, 1, opt.tol);
                ok = ok && ts.converged;
                if (ok) {
                    LocalIndices li{zero, mj, zero, 0, 1, 0, true};
                    bm.pair(j) =
                        (local_prefactor(li, ps.lambda, delta) * ts.value / ctx.log_norm)
                            .value();
                }
            }
        }

        if (ok && quartics) {
            bm.quartics = true;
            bm.nn = Eigen::MatrixXd::Zero(n, n);
            bm.pair2 = MatrixXc::Zero(n, n);
            const QuarticTables qt = build_quartic_tables(ps.lambda, static_cast<int>(k));
            for (int j = 0; j < n && ok; ++j) {
                // diagonal <b_j^dag2 b_j^2>
                if (ps.lambda(j) > 0.0) {
                    const TableSum ts =
                        local_series(as_table(qt.diag[j], ps.lambda), delta, 1, 1, opt.tol);
                    ok = ok && ts.converged;
                    if (ok) {
                        std::vector<int> nv(n, 0), mv(n, 0), bv(n, 0);
                        nv[j] = mv[j] = 1;
                        LocalIndices li{nv, mv, bv, 1, 1, 0, true};
                        bm.pair2(j, j) =
                            (local_prefactor(li, ps.lambda, delta) * ts.value / ctx.log_norm)
                                .value();
                    }
                }
                for (int t = j + 1; t < n && ok; ++t) {
                    if (ps.lambda(j) == 0.0 || ps.lambda(t) == 0.0) continue;
                    {
                        const TableSum ts = local_series(
                            as_table(qt.nn[static_cast<size_t>(j) * n + t], ps.lambda), delta,
                            2, 2, opt.tol);
                        ok = ok && ts.converged;
                        if (ok) {
                            std::vector<int> nv(n, 0), mv(n, 0), bv(n, 0);
                            bv[j] = bv[t] = 1;
                            LocalIndices li{nv, mv, bv, 0, 0, 2, true};
                            const double val =
                                (local_prefactor(li, ps.lambda, delta) * ts.value /
                                 ctx.log_norm)
                                    .value()
                                    .real();
                            bm.nn(j, t) = bm.nn(t, j) = val;
                        }
                    }
                    if (ok) {
                        const TableSum ts = local_series(
                            as_table(qt.pair2[static_cast<size_t>(j) * n + t], ps.lambda),
                            delta, 1, 1, opt.tol);
                        ok = ok && ts.converged;
                        if (ok) {
                            std::vector<int> nv(n, 0), mv(n, 0), bv(n, 0);
                            nv[j] = 1;
                            mv[t] = 1;
                            LocalIndices li{nv, mv, bv, 1, 1, 0, true};
                            const Complex val =
                                (local_prefactor(li, ps.lambda, delta) * ts.value /
                                 ctx.log_norm)
                                    .value();
                            bm.pair2(j, t) = val;
                            bm.pair2(t, j) = std::conj(val);
                        }
                    }
                }
            }
        }

        if (ok) {
            if (cutoff_used) *cutoff_used = k;
            return bm;
        }
        if (k >= opt.max_cutoff) throw SeriesError("correlators: cutoff budget exhausted");
        k = std::min(opt.max_cutoff, 2 * k);
    }
}

// ---- degenerate (closed-form) path ------------------------------------------

BBasisMoments bbasis_unitary(const PairingSpectrum& ps, Complex delta, bool quartics,
                             const MomentOptions& opt) {
    const int n = static_cast<int>(ps.lambda.size());
    const double lambda = ps.lambda_star;
    const double half_n = 0.5 * n;
    const Complex dconj = std::conj(delta);
    const Complex z = lambda * lambda;

    BBasisMoments bm;
    bm.occ.resize(n);
    bm.pair.resize(n);
    if (lambda == 0.0) {
        bm.occ.setZero();
        bm.pair.setZero();
        if (quartics) {
            bm.quartics = true;
            bm.nn = Eigen::MatrixXd::Zero(n, n);
            bm.pair2 = MatrixXc::Zero(n, n);
        }
        return bm;
    }

    const SeriesOptions& so = opt.series;
    const Complex f = hyper_pfq({half_n}, {delta, dconj}, z, so).value.value();
    const Complex w1 = hyper_pfq({half_n}, {delta, dconj}, z, so, 1).value.value();
    const double nplus = (w1 / f).real();  // <N_+>

    bm.occ.setConstant(nplus / (2.0 * n));
    const Complex kminus = collective_moment_unitary(0, 0, 1, lambda, n, delta, so);
    bm.pair.setConstant(lambda / static_cast<double>(n) * kminus);

    if (quartics) {
        bm.quartics = true;
        const Complex f2p = hyper_pfq({half_n + 2.0}, {delta, dconj}, z, so).value.value();
        const Complex f1p = hyper_pfq({half_n + 1.0}, {delta, dconj}, z, so).value.value();
        const Complex w1p = hyper_pfq({half_n + 1.0}, {delta, dconj}, z, so, 1).value.value();
        const Complex s1 = f1p + 0.5 * w1p;  // sum (l+1) (N/2+1)_l z^l / ((d)_l (d*)_l l!)

        const double nn_off = 0.25 * ((f2p / f).real() - 2.0 * nplus / n - 1.0);
        const double pair2_off = ((s1 - f2p) / (2.0 * n * f)).real();
        const double pair2_diag =
            0.25 * ((((2.0 * n - 2.0) * f2p + 2.0 * s1) / (static_cast<double>(n) * f)).real() -
                    4.0 * nplus / n - 2.0);

        bm.nn = Eigen::MatrixXd::Constant(n, n, nn_off);
        bm.pair2 = MatrixXc::Constant(n, n, pair2_off);
        bm.pair2.diagonal().setConstant(pair2_diag);
    }
    return bm;
}

int default_ref_site(const ModelSpec& spec) {
    if (spec.d >= 1 && spec.boundary == Boundary::open) {
        // central site of the first axis, origin in the others
        std::vector<int> c(spec.d, 0);
        c[0] = spec.dims[0] / 2;
        long idx = 0;
        for (int a = 0; a < spec.d; ++a) idx = idx * spec.dims[a] + c[a];
        return static_cast<int>(idx);
    }
    return 0;
}

// site displaced by r along axis 0; -1 when it falls off an open lattice
int displaced_site(const ModelSpec& spec, int site, int r) {
    if (spec.d == 0) {
        int s = (site + r) % spec.n;
        if (s < 0) s += spec.n;
        return s;
    }
    const int l0 = spec.dims[0];
    long stride = 1;
    for (int a = 1; a < spec.d; ++a) stride *= spec.dims[a];
    const int c0 = static_cast<int>(site / stride);
    int c0p = c0 + r;
    if (spec.boundary == Boundary::periodic) {
        c0p = ((c0p % l0) + l0) % l0;
    } else if (c0p < 0 || c0p >= l0) {
        return -1;
    }
    return static_cast<int>(site + static_cast<long>(c0p - c0) * stride);
}

// <a_i^dag2 a_i'^2> re-expanded through V (ordered mode pairs)
double pair_pair(const MatrixXc& v, const BBasisMoments& bm, int i, int ip) {
    const int n = static_cast<int>(v.rows());
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
            if (jp != j)
                acc += 2.0 * std::conj(v(i, j) * v(i, jp)) * v(ip, j) * v(ip, jp) *
                       bm.nn(j, jp);
            acc += std::conj(v(i, j) * v(i, j)) * v(ip, jp) * v(ip, jp) * bm.pair2(j, jp);
        }
    }
    return acc.real();
}

double density_density(const MatrixXc& v, const BBasisMoments& bm, int i, int ip) {
    const int n = static_cast<int>(v.rows());
    if (i == ip) {
        // <n_i^2> = <a_i^dag2 a_i^2> + <n_i>
        double nbar_i = 0.0;
        for (int j = 0; j < n; ++j) nbar_i += std::norm(v(i, j)) * bm.occ(j);
        return pair_pair(v, bm, i, i) + nbar_i;
    }
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
            if (jp != j) {
                acc += (std::norm(v(i, j)) * std::norm(v(ip, jp)) +
                        std::conj(v(i, j)) * v(i, jp) * v(ip, j) * std::conj(v(ip, jp))) *
                       bm.nn(j, jp);
            }
            acc += std::conj(v(i, j) * v(ip, j)) * v(i, jp) * v(ip, jp) * bm.pair2(j, jp);
        }
    }
    return acc.real();
}

}  // namespace

Eigen::VectorXd mode_occupations(const PairingSpectrum& ps, Complex delta,
                                 const MomentOptions& opt) {
    check_nonresonant(delta);
    if (ps.degenerate()) return bbasis_unitary(ps, delta, false, opt).occ;
    LadderContext ctx = make_ladder(ps, delta, opt);
    return bbasis_general(ps, delta, false, opt, ctx, nullptr).occ;
}

double mode_density_correlation(int j, int jp, const PairingSpectrum& ps, Complex delta,
                                const MomentOptions& opt) {
    const int n = static_cast<int>(ps.lambda.size());
    if (j == jp || j < 0 || jp < 0 || j >= n || jp >= n)
        throw std::invalid_argument("mode_density_correlation: bad mode pair");
    std::vector<int> nu(n, 0), mu(n, 0);
    nu[j] = nu[jp] = 1;
    const Complex nnjj = local_moment(nu, nu, ps, delta, opt);
    std::vector<int> ej(n, 0), ejp(n, 0);
    ej[j] = 1;
    ejp[jp] = 1;
    const Complex oj = local_moment(ej, ej, ps, delta, opt);
    const Complex ojp = local_moment(ejp, ejp, ps, delta, opt);
    const double denom = oj.real() * ojp.real();
    if (denom == 0.0) throw std::domain_error("mode_density_correlation: empty modes");
    return (nnjj.real() - denom) / denom;
}

double log_normalization(const PairingSpectrum& ps, Complex delta, const MomentOptions& opt) {
    check_nonresonant(delta);
    return make_ladder(ps, delta, opt).log_norm.log_mag;
}

double mean_density(const PairingSpectrum& ps, int n_modes, Complex delta,
                    const MomentOptions& opt) {
    const Complex nplus = ps.degenerate()
                              ? collective_moment_unitary(0, 1, 0, ps.lambda_star, n_modes,
                                                          delta, opt.series)
                              : collective_moment_general(0, 1, 0, ps, delta, opt);
    return nplus.real() / (2.0 * n_modes);
}

double pair_number_rms(const PairingSpectrum& ps, int n_modes, Complex delta,
                       const MomentOptions& opt) {
    Complex n1, n2;
    if (ps.degenerate()) {
        n1 = collective_moment_unitary(0, 1, 0, ps.lambda_star, n_modes, delta, opt.series);
        n2 = collective_moment_unitary(0, 2, 0, ps.lambda_star, n_modes, delta, opt.series);
    } else {
        CollectiveLadder ladder(ps, delta, opt);
        n1 = ladder.moment(0, 1, 0);
        n2 = ladder.moment(0, 2, 0);
    }
    return std::sqrt(std::max(0.0, n2.real() - n1.real() * n1.real()));
}

ObservableSet correlators(const ModelSpec& spec, const PairingSpectrum& ps, Complex delta,
                          const CorrelatorRequest& req, const MomentOptions& opt) {
    spec.validate();
    const DerivedScalars ds = derived_scalars(spec);
    check_nonresonant(delta, ds.u);
    const int n = spec.n;
    const MatrixXc& v = ps.v;

    ObservableSet os;
    os.ref_site = req.ref_site >= 0 ? req.ref_site : default_ref_site(spec);

    LadderContext ctx = make_ladder(ps, delta, opt);
    os.norm_log = ctx.log_norm.log_mag;

    BBasisMoments bm;
    if (ps.degenerate()) {
        bm = bbasis_unitary(ps, delta, req.quartics, opt);
        os.cutoff_used = ctx.norm_terms;
    } else {
        bm = bbasis_general(ps, delta, req.quartics, opt, ctx, &os.cutoff_used);
    }

    os.nbar_site.resize(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += std::norm(v(i, j)) * bm.occ(j);
        os.nbar_site(i) = acc;
    }
    os.nbar = os.nbar_site.mean();

    for (int r : req.displacements) {
        const int ip = displaced_site(spec, os.ref_site, r);
        if (ip < 0) continue;  // off the open lattice
        Complex op = 0.0, pr = 0.0;
        for (int j = 0; j < n; ++j) {
            op += std::conj(v(os.ref_site, j)) * v(ip, j) * bm.occ(j);
            pr += v(os.ref_site, j) * v(ip, j) * bm.pair(j);
        }
        os.one_particle[r] = op;
        os.pairing[r] = pr;

        if (req.quartics) {
            const double dd = density_density(v, bm, os.ref_site, ip);
            const double prod = os.nbar_site(os.ref_site) * os.nbar_site(ip);
            if (prod > 0.0) os.g2[r] = (dd - prod) / prod;
            if (req.averaged_g2) {
                double acc = 0.0, cnt = 0.0;
                for (int i = 0; i < n; ++i) {
                    const int j = displaced_site(spec, i, r);
                    if (j < 0) continue;
                    acc += density_density(v, bm, i, j);
                    cnt += 1.0;
                }
                if (cnt > 0.0 && os.nbar > 0.0)
                    os.g2_avg[r] = (acc / cnt - os.nbar * os.nbar) / (os.nbar * os.nbar);
            }
        }
    }

    // on-site pairing fluctuation g2_phi at the reference site
    if (req.quartics) {
        Complex phi = 0.0;
        for (int j = 0; j < n; ++j)
            phi += v(os.ref_site, j) * v(os.ref_site, j) * bm.pair(j);
        if (std::abs(phi) > 1e-300) {
            const double quartic = pair_pair(v, bm, os.ref_site, os.ref_site);
            os.g2_phi = (quartic - std::norm(phi)) / std::norm(phi);
            os.has_g2_phi = true;
        }
    }

    // collective pairing fluctuation through K_-; needs every lambda nonzero
    const double lmin = ps.lambda(ps.lambda.size() - 1);
    if (lmin > 1e-12 * std::max(1.0, ps.lambda_star)) {
        const double half_n = 0.5 * n;
        // <K_-> = -sum_m (N/2+m) Phi_m / ((d*)_m (d)_{m+1}) / Norm
        // <K_-^dag K_-> = sum_m (N/2+m)^2 Phi_m / |(d)_{m+1}|^2 / Norm
        SumAcc s1, s2;
        const double log_tol = std::log(opt.tol);
        const Complex dconj = std::conj(delta);
        LogComplex poch_a = LogComplex::one();                 // (d*)_m
        LogComplex poch_b = LogComplex::from(delta);           // (d)_{m+1}
        bool done1 = false, done2 = false;
        for (int m = 0; m <= ctx.coll.cutoff && !(done1 && done2); ++m) {
            if (m > 0) {
                poch_a *= LogComplex::from(dconj + static_cast<double>(m - 1));
                poch_b *= LogComplex::from(delta + static_cast<double>(m));
            }
            const LogComplex phim(ctx.coll.log_at(m), 0.0);
            const LogComplex w = LogComplex::from_real(half_n + m);
            if (!done1) done1 = s1.add(w * phim / (poch_a * poch_b), log_tol);
            if (!done2)
                done2 = s2.add(w * w * phim / (poch_b * poch_b.conj()), log_tol);
        }
        if (done1 && done2) {
            const Complex km = -(s1.sum / ctx.log_norm).value();      // <K_->
            const double kdk = (s2.sum / ctx.log_norm).value().real();  // <K_-^dag K_->
            const Complex kphys = 0.5 * km;
            const double kdk_phys = 0.25 * kdk;
            if (std::norm(kphys) > 1e-300) {
                os.g2_k = (kdk_phys - std::norm(kphys)) / std::norm(kphys);
                os.k_pairing = kphys;
                os.has_g2_k = true;
            }
        }
    }

    return os;
}

}  // namespace pairlat
