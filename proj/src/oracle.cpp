#include "pairlat/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace pairlat {

namespace {

// The Liouvillian acts on density matrices as
//   L rho = A rho + rho A^dag + kappa sum_j a_j rho a_j^dag,
// with the drift A = -iH - (kappa/2) sum_j a_j^dag a_j. Splitting off a
// shift sigma keeps the drift part strictly stable,
//   L = L0' + S',  L0' rho = A' rho + rho A'^dag,  A' = A - sigma/2,
//   S' rho = kappa sum_j a_j rho a_j^dag + sigma rho,
// so L rho = 0 becomes the fixed point rho = T rho with T = -L0'^{-1} S'.
// L0' inverts in O(dim^3) through Schur factorizations of A' and a triangular
// Sylvester recurrence, far cheaper than factoring the dim^2 x dim^2
// superoperator. Total occupation parity block-diagonalizes A' and confines
// the steady state to the (even,even)+(odd,odd) operator sector, so all
// dense work happens on half-size blocks.
struct SplitLiouvillian {
    struct Sector {
        std::vector<long> index;  // basis indices of this parity
        MatrixXc drift;           // unshifted drift block
        MatrixXc q, t, tr;        // Schur pieces of the shifted block
    };
    Sector sec[2];
    std::vector<MatrixXc> jump_eo;  // a_j block mapping odd -> even
    std::vector<MatrixXc> jump_oe;  // a_j block mapping even -> odd
    double kappa = 0.0;
    double sigma = 0.0;
    long dim = 0;

    void build(const FockBasis& basis, const SparseC& hs, double kap) {
        kappa = kap;
        dim = basis.dim();
        for (long s = 0; s < dim; ++s) {
            int tot = 0;
            for (const auto n : basis.states[s]) tot += n;
            sec[tot % 2].index.push_back(s);
        }
        const MatrixXc h(hs);
        const double escale =
            std::max({1e-3, h.cwiseAbs().maxCoeff() / std::max<long>(1, dim), kap});
        sigma = std::max(kap, 0.02 * escale);

        MatrixXc drift_full = Complex(0, -1) * h;
        std::vector<MatrixXc> a_full;
        for (int j = 0; j < basis.cfg.n_modes; ++j) {
            a_full.emplace_back(lowering(basis, j));
            drift_full -= 0.5 * kap * (a_full.back().adjoint() * a_full.back());
        }
        for (int p = 0; p < 2; ++p) {
            Sector& s = sec[p];
            const long d = static_cast<long>(s.index.size());
            s.drift.resize(d, d);
            for (long i = 0; i < d; ++i)
                for (long j = 0; j < d; ++j) s.drift(i, j) = drift_full(s.index[i], s.index[j]);
            MatrixXc a = s.drift;
            a.diagonal().array() -= 0.5 * sigma;
            Eigen::ComplexSchur<MatrixXc> schur(a);
            if (schur.info() != Eigen::Success)
                throw OracleError("steady_state: Schur factorization failed");
            s.q = schur.matrixU();
            s.t = schur.matrixT();
            s.tr = s.t.transpose();
        }
        const long de = static_cast<long>(sec[0].index.size());
        const long dodd = static_cast<long>(sec[1].index.size());
        for (const MatrixXc& a : a_full) {
            MatrixXc eo(de, dodd), oe(dodd, de);
            for (long i = 0; i < de; ++i)
                for (long j = 0; j < dodd; ++j) eo(i, j) = a(sec[0].index[i], sec[1].index[j]);
            for (long i = 0; i < dodd; ++i)
                for (long j = 0; j < de; ++j) oe(i, j) = a(sec[1].index[i], sec[0].index[j]);
            jump_eo.push_back(std::move(eo));
            jump_oe.push_back(std::move(oe));
        }
    }

    struct State {
        MatrixXc ee, oo;
        double norm() const { return std::sqrt(ee.squaredNorm() + oo.squaredNorm()); }
        Complex trace() const { return ee.trace() + oo.trace(); }
    };

    State scatter(const MatrixXc& rho) const {
        State st;
        for (int p = 0; p < 2; ++p) {
            const auto& idx = sec[p].index;
            const long d = static_cast<long>(idx.size());
            MatrixXc& blk = p == 0 ? st.ee : st.oo;
            blk.resize(d, d);
            for (long i = 0; i < d; ++i)
                for (long j = 0; j < d; ++j) blk(i, j) = rho(idx[i], idx[j]);
        }
        return st;
    }

    MatrixXc gather(const State& st) const {
        MatrixXc rho = MatrixXc::Zero(dim, dim);
        for (int p = 0; p < 2; ++p) {
            const auto& idx = sec[p].index;
            const MatrixXc& blk = p == 0 ? st.ee : st.oo;
            for (long i = 0; i < static_cast<long>(idx.size()); ++i)
                for (long j = 0; j < static_cast<long>(idx.size()); ++j)
                    rho(idx[i], idx[j]) = blk(i, j);
        }
        return rho;
    }

    // jump part kappa sum_j a rho a^dag on the diagonal-parity sector
    State apply_jump(const State& st) const {
        State out;
        out.ee = MatrixXc::Zero(st.ee.rows(), st.ee.cols());
        out.oo = MatrixXc::Zero(st.oo.rows(), st.oo.cols());
        for (size_t j = 0; j < jump_eo.size(); ++j) {
            out.ee.noalias() += kappa * (jump_eo[j] * st.oo * jump_eo[j].adjoint());
            out.oo.noalias() += kappa * (jump_oe[j] * st.ee * jump_oe[j].adjoint());
        }
        return out;
    }

    // full Liouvillian application (no shift)
    State apply(const State& st) const {
        State out = apply_jump(st);
        out.ee.noalias() += sec[0].drift * st.ee + st.ee * sec[0].drift.adjoint();
        out.oo.noalias() += sec[1].drift * st.oo + st.oo * sec[1].drift.adjoint();
        return out;
    }

    // solve A' x + x A'^dag = c per sector through the Schur form: rotated
    // columns satisfy (T + conj(t_jj) I) y_j = d_j - sum_{k>j} conj(t_jk) y_k
    static MatrixXc solve_block(const Sector& s, const MatrixXc& c) {
        const long d = s.t.rows();
        MatrixXc y = s.q.adjoint() * c * s.q;
        for (long j = d - 1; j >= 0; --j) {
            const long m = d - j - 1;
            if (m > 0)
                y.col(j).noalias() -= y.rightCols(m) * s.tr.col(j).tail(m).conjugate();
            const Complex shift = std::conj(s.t(j, j));
            y(d - 1, j) /= s.t(d - 1, d - 1) + shift;
            for (long i = d - 2; i >= 0; --i) {
                const long k = d - i - 1;
                y(i, j) -= (s.tr.col(i).tail(k).array() * y.col(j).tail(k).array()).sum();
                y(i, j) /= s.t(i, i) + shift;
            }
        }
        return s.q * y * s.q.adjoint();
    }

    // T rho = -L0'^{-1} (kappa sum a rho a^dag + sigma rho)
    State apply_t(const State& st) const {
        State rhs = apply_jump(st);
        rhs.ee += sigma * st.ee;
        rhs.oo += sigma * st.oo;
        State out;
        out.ee = -solve_block(sec[0], rhs.ee);
        out.oo = -solve_block(sec[1], rhs.oo);
        return out;
    }
};

// GMRES on the trace-pinned fixed-point map B x = x - T x + tr(x) E, whose
// unique solution is the steady state normalized to tr(rho) = 1 when the
// Liouvillian null space is one-dimensional. Works on the packed
// diagonal-parity sector.
MatrixXc pinned_gmres(const SplitLiouvillian& sl, const MatrixXc& e_full, double tol,
                      int max_iters, int restart) {
    using State = SplitLiouvillian::State;
    const State e_state = sl.scatter(e_full);
    const long ne = static_cast<long>(e_state.ee.size());
    const long no = static_cast<long>(e_state.oo.size());
    const long de = e_state.ee.rows(), dodd = e_state.oo.rows();
    const long n = ne + no;

    const auto pack = [&](const State& st) {
        VectorXc v(n);
        v.head(ne) = Eigen::Map<const VectorXc>(st.ee.data(), ne);
        v.tail(no) = Eigen::Map<const VectorXc>(st.oo.data(), no);
        return v;
    };
    const auto unpack = [&](const VectorXc& v) {
        State st;
        st.ee = Eigen::Map<const MatrixXc>(v.data(), de, de);
        st.oo = Eigen::Map<const MatrixXc>(v.data() + ne, dodd, dodd);
        return st;
    };
    const VectorXc b = pack(e_state);
    const auto apply_b = [&](const VectorXc& v) {
        const State st = unpack(v);
        State out = sl.apply_t(st);
        VectorXc w = v - pack(out);
        w += st.trace() * b;
        return w;
    };

    VectorXc x = VectorXc::Zero(n);
    const double beta0 = b.norm();
    int done = 0;
    while (done < max_iters) {
        VectorXc r = b - apply_b(x);
        const double beta = r.norm();
        if (beta <= tol * beta0) break;

        const int m = std::min(restart, max_iters - done);
        std::vector<VectorXc> basis;
        basis.reserve(m + 1);
        basis.push_back(r / beta);
        Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
        int used = 0;
        for (int j = 0; j < m; ++j) {
            VectorXc w = apply_b(basis[j]);
            for (int i = 0; i <= j; ++i) {
                hess(i, j) = basis[i].dot(w);
                w -= hess(i, j) * basis[i];
            }
            hess(j + 1, j) = w.norm();
            used = j + 1;
            if (std::abs(hess(j + 1, j)) < 1e-14 * beta) break;
            basis.push_back(w / hess(j + 1, j));
            if (static_cast<int>(basis.size()) == m + 1) break;
        }
        Eigen::MatrixXcd hsub = hess.topLeftCorner(used + 1, used);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(used + 1);
        rhs(0) = beta;
        const Eigen::VectorXcd ym = hsub.colPivHouseholderQr().solve(rhs);
        for (int j = 0; j < used; ++j) x += ym(j) * basis[j];
        done += used;
        if (used == 0) break;
    }
    return sl.gather(unpack(x));
}

}  // namespace

FockConfig suggest_fock(const ModelSpec& spec, double nbar_est, int n_max_cap) {
    FockConfig f;
    f.n_modes = spec.n;
    f.n_max = std::min(n_max_cap,
                       std::max(20, static_cast<int>(std::ceil(8.0 * std::max(0.0, nbar_est)))));
    f.n_tot_max = 2 * f.n_max;
    return f;
}

SteadyStateOracle steady_state(const ModelSpec& spec, const FockConfig& fock,
                               const MatrixXc* extra_one_body, const OracleOptions& opt) {
    spec.validate();
    if (fock.n_modes != spec.n)
        throw std::invalid_argument("steady_state: mode count mismatch");
    if (spec.kappa <= 0.0)
        throw OracleError("steady_state: the null space is unique only with loss on "
                          "(kappa must be positive)");

    SteadyStateOracle ss{FockBasis::build(fock), {}, 0.0, 0.0, 0.0};
    const long d = ss.basis.dim();
    const MatrixXc m = build_pairing_matrix(spec);
    SparseC h = hamiltonian(ss.basis, spec, m);
    if (extra_one_body) h += one_body(ss.basis, *extra_one_body);

    SplitLiouvillian sl;
    sl.build(ss.basis, h, spec.kappa);

    const MatrixXc pin1 = MatrixXc::Identity(d, d) / static_cast<double>(d);
    MatrixXc rho = pinned_gmres(sl, pin1, opt.gmres_tol, opt.gmres_max_iters,
                                opt.gmres_restart);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (!std::isfinite(tr) || std::abs(tr) < 1e-8)
        throw OracleError("steady_state: pinned solve collapsed "
                          "(degenerate null space or cutoff artifact)");
    rho /= tr;

    ss.residual = sl.apply(sl.scatter(rho)).norm();
    if (ss.residual > opt.residual_tol)
        throw OracleError("steady_state: null-space residual too large "
                          "(degenerate null space or cutoff artifact)");

    if (opt.uniqueness_check) {
        // a second pin selects a different null-space combination if one exists
        MatrixXc pin2 = MatrixXc::Zero(d, d);
        for (long i = 0; i < d; ++i) pin2(i, i) = 1.0 + static_cast<double>(i % 3);
        pin2 /= pin2.trace().real();
        MatrixXc rho2 = pinned_gmres(sl, pin2, opt.gmres_tol, opt.gmres_max_iters,
                                     opt.gmres_restart);
        rho2 = 0.5 * (rho2 + rho2.adjoint()).eval();
        const double tr2 = rho2.trace().real();
        if (!std::isfinite(tr2) || std::abs(tr2) < 1e-8 ||
            trace_distance(rho, rho2 / tr2) > 1e-8)
            throw OracleError("steady_state: degenerate null space "
                              "(two pinnings disagree)");
    }

    Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho, Eigen::EigenvaluesOnly);
    ss.min_eigenvalue = es.eigenvalues().minCoeff();
    if (ss.min_eigenvalue < -1e-10)
        throw OracleError("steady_state: density matrix not positive within tolerance");

    ss.truncation_indicator = boundary_population(ss.basis, rho);
    if (ss.truncation_indicator > opt.truncation_reject)
        throw OracleError("steady_state: cutoff-shell population too high, result rejected");

    ss.rho = std::move(rho);
    return ss;
}

namespace {

Complex expectation(const MatrixXc& rho, const SparseC& op) {
    return (op * rho).eval().trace();
}

}  // namespace

OracleObservables oracle_observables(const ModelSpec& spec, const SteadyStateOracle& ss,
                                     const std::vector<int>& displacements, int ref_site) {
    const int n = spec.n;
    const FockBasis& basis = ss.basis;
    std::vector<SparseC> a(n);
    for (int j = 0; j < n; ++j) a[j] = lowering(basis, j);

    OracleObservables oo;
    oo.nbar_site.resize(n);
    for (int j = 0; j < n; ++j)
        oo.nbar_site(j) = expectation(ss.rho, SparseC(SparseC(a[j].adjoint()) * a[j])).real();
    oo.nbar = oo.nbar_site.mean();

    int ref = ref_site;
    if (ref < 0) {
        ref = 0;
        if (spec.d >= 1 && spec.boundary == Boundary::open) {
            std::vector<int> c(spec.d, 0);
            c[0] = spec.dims[0] / 2;
            long idx = 0;
            for (int ax = 0; ax < spec.d; ++ax) idx = idx * spec.dims[ax] + c[ax];
            ref = static_cast<int>(idx);
        }
    }

    auto displaced = [&](int site, int r) -> int {
        if (spec.d == 0) {
            int s = (site + r) % n;
            return s < 0 ? s + n : s;
        }
        const int l0 = spec.dims[0];
        long stride = 1;
        for (int ax = 1; ax < spec.d; ++ax) stride *= spec.dims[ax];
        const int c0 = static_cast<int>(site / stride);
        int c0p = c0 + r;
        if (spec.boundary == Boundary::periodic)
            c0p = ((c0p % l0) + l0) % l0;
        else if (c0p < 0 || c0p >= l0)
            return -1;
        return static_cast<int>(site + static_cast<long>(c0p - c0) * stride);
    };

    for (int r : displacements) {
        const int ip = displaced(ref, r);
        if (ip < 0) continue;
        oo.one_particle[r] =
            expectation(ss.rho, SparseC(SparseC(a[ref].adjoint()) * a[ip]));
        oo.pairing[r] = expectation(ss.rho, SparseC(a[ref] * a[ip]));
        const SparseC ni = SparseC(a[ref].adjoint()) * a[ref];
        const SparseC nj = SparseC(a[ip].adjoint()) * a[ip];
        const double dd = expectation(ss.rho, SparseC(ni * nj)).real();
        const double prod = oo.nbar_site(ref) * oo.nbar_site(ip);
        if (prod > 0.0) oo.g2[r] = (dd - prod) / prod;
    }

    // on-site pairing fluctuation
    const Complex phi = expectation(ss.rho, SparseC(a[ref] * a[ref]));
    if (std::abs(phi) > 1e-300) {
        const SparseC a2 = a[ref] * a[ref];
        const double quart = expectation(ss.rho, SparseC(SparseC(a2.adjoint()) * a2)).real();
        oo.g2_phi = (quart - std::norm(phi)) / std::norm(phi);
        oo.has_g2_phi = true;
    }

    // collective pairing fluctuation, needs M invertible
    const MatrixXc m = build_pairing_matrix(spec);
    const Eigen::JacobiSVD<MatrixXc> svd(m);
    if (svd.singularValues()(svd.singularValues().size() - 1) >
        1e-12 * std::max(1.0, svd.singularValues()(0))) {
        const MatrixXc minv = spec.u() * m.inverse();
        SparseC km(basis.dim(), basis.dim());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (minv(i, j) != Complex(0.0, 0.0)) km += 0.5 * minv(i, j) * SparseC(a[i] * a[j]);
        const Complex kexp = expectation(ss.rho, km);
        const double kdk = expectation(ss.rho, SparseC(SparseC(km.adjoint()) * km)).real();
        if (std::norm(kexp) > 1e-300) {
            oo.g2_k = (kdk - std::norm(kexp)) / std::norm(kexp);
            oo.k_pairing = kexp;
            oo.has_g2_k = true;
        }
    }
    return oo;
}

// ---------------------------------------------------------------------------
// purification
// ---------------------------------------------------------------------------

Purification purification_state(const ModelSpec& spec, const FockConfig& doubled) {
    spec.validate();
    if (doubled.n_modes != 2 * spec.n)
        throw std::invalid_argument("purification_state: doubled space needs 2N modes");
    const DerivedScalars ds = derived_scalars(spec);
    check_nonresonant(ds.delta_dl, ds.u);

    Purification p{FockBasis::build(doubled), {}, 0};
    const long d = p.basis.dim();
    const int n = spec.n;

    // K_+ = (1/2) sum_ij (M_ij/u) alpha_i^dag alpha_j^dag with
    // alpha_i = (a_{i,L} + a_{i,R})/sqrt(2): each doubled-mode pair carries M_ij/(4u)
    const MatrixXc m = build_pairing_matrix(spec);
    MatrixXc c(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) c(i, j) = m(i % n, j % n) / (4.0 * ds.u);
    const SparseC kp = pair_creation(p.basis, c);

    const PurificationCoefficients pc{ds.delta_dl};
    VectorXc unit = VectorXc::Zero(d);
    const long vac = p.basis.find(std::vector<std::uint16_t>(2 * n, 0));
    unit(vac) = 1.0;
    double log_amp = 0.0;  // log || K_+^m vac ||

    VectorXc psi = VectorXc::Zero(d);
    double max_coeff = kNegInf;
    int small = 0;
    for (long m_idx = 0;; ++m_idx) {
        const LogComplex coeff = pc.absorbed(m_idx) * LogComplex(log_amp, 0.0);
        psi += coeff.value() * unit;
        max_coeff = std::max(max_coeff, coeff.log_mag);
        p.pairs_used = m_idx;
        if (m_idx > 0 && coeff.log_mag < max_coeff + std::log(1e-16)) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
        VectorXc next = kp * unit;
        const double nn = next.norm();
        if (nn == 0.0) break;  // truncation annihilated the ladder
        unit = next / nn;
        log_amp += std::log(nn);
    }
    psi /= psi.norm();
    p.psi = std::move(psi);
    return p;
}

MatrixXc trace_out_right(const Purification& p, const FockBasis& target) {
    const int n = p.basis.cfg.n_modes / 2;
    MatrixXc rho = MatrixXc::Zero(target.dim(), target.dim());

    // bucket doubled states by their right-factor occupation
    std::map<std::vector<std::uint16_t>, std::vector<std::pair<long, long>>> buckets;
    std::vector<std::uint16_t> left(n), right(n);
    for (long s = 0; s < p.basis.dim(); ++s) {
        for (int j = 0; j < n; ++j) {
            left[j] = p.basis.states[s][j];
            right[j] = p.basis.states[s][n + j];
        }
        const long tl = target.find(left);
        if (tl < 0) continue;
        buckets[right].emplace_back(tl, s);
    }
    for (const auto& [r, members] : buckets) {
        for (const auto& [ti, si] : members)
            for (const auto& [tj, sj] : members)
                rho(ti, tj) += p.psi(si) * std::conj(p.psi(sj));
    }
    return rho;
}

HtrsResidual htrs_residual(const ModelSpec& spec, const Purification& p) {
    const DerivedScalars ds = derived_scalars(spec);
    const int n = spec.n;
    const FockBasis& basis = p.basis;

    HtrsResidual hr;
    std::vector<SparseC> al(n), ar(n);
    for (int j = 0; j < n; ++j) {
        al[j] = lowering(basis, j);
        ar[j] = lowering(basis, n + j);
    }

    double acc = 0.0;
    for (int j = 0; j < n; ++j)
        acc += ((al[j] - ar[j]) * p.psi).squaredNorm() / 2.0;
    hr.antisymmetric_vacuum = std::sqrt(acc);

    // (u (N_L + N_R) - Delta_eff)(N_L - N_R) + 2 sum_ij M_ij alpha_{i,+}^dag alpha_{j,-}^dag
    VectorXc nl = VectorXc::Zero(basis.dim());
    VectorXc nr = VectorXc::Zero(basis.dim());
    for (long s = 0; s < basis.dim(); ++s) {
        int tl = 0, tr = 0;
        for (int j = 0; j < n; ++j) {
            tl += basis.states[s][j];
            tr += basis.states[s][n + j];
        }
        nl(s) = static_cast<double>(tl);
        nr(s) = static_cast<double>(tr);
    }
    VectorXc v1 = p.psi;
    for (long s = 0; s < basis.dim(); ++s)
        v1(s) *= (ds.u * (nl(s) + nr(s)) - ds.delta_eff) * (nl(s) - nr(s));

    const MatrixXc m = build_pairing_matrix(spec);
    MatrixXc c = MatrixXc::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // alpha_{i,+}^dag alpha_{j,-}^dag = (a_iL^dag + a_iR^dag)(a_jL^dag - a_jR^dag)/2
            c(i, j) += m(i, j);          // L L
            c(i, n + j) -= m(i, j);      // L R
            c(n + i, j) += m(i, j);      // R L
            c(n + i, n + j) -= m(i, j);  // R R
        }
    const SparseC drive = pair_creation(p.basis, c);  // carries the factor 2 / 2 = 1
    hr.pairing_condition = (v1 + drive * p.psi).norm();
    return hr;
}

double pcs_residual_fock(const ModelSpec& spec, const Purification& p) {
    const DerivedScalars ds = derived_scalars(spec);
    const int n = spec.n;
    const MatrixXc m = build_pairing_matrix(spec);
    const MatrixXc minv = ds.u * m.inverse();
    MatrixXc c(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) c(i, j) = minv(i % n, j % n) / 4.0;
    // K_- = (1/2) sum (u M^-1)_ij alpha_i alpha_j: adjoint of pair creation with conj coeffs
    const SparseC km = SparseC(pair_creation(p.basis, c.conjugate()).adjoint());
    return (km * p.psi + p.psi).norm() / p.psi.norm();
}

double hopping_invariance(const ModelSpec& spec, const FockConfig& fock,
                          const MatrixXc& hopping, const OracleOptions& opt) {
    const SteadyStateOracle base = steady_state(spec, fock, nullptr, opt);
    const SteadyStateOracle moved = steady_state(spec, fock, &hopping, opt);
    return trace_distance(base.rho, moved.rho);
}

double nonthermality(const ModelSpec& spec, const SteadyStateOracle& ss) {
    const MatrixXc m = build_pairing_matrix(spec);
    const MatrixXc h = MatrixXc(hamiltonian(ss.basis, spec, m));
    return (h * ss.rho - ss.rho * h).cwiseAbs().maxCoeff();
}

double oracle_wigner_at(const SteadyStateOracle& ss, const VectorXc& alpha) {
    const int n = ss.basis.cfg.n_modes;
    if (alpha.size() != n) throw std::invalid_argument("oracle_wigner_at: bad point size");
    const int pad = 16;
    const int dloc = ss.basis.cfg.n_max + 1 + pad;

    // per-mode displaced parity T = D(alpha) P D(alpha)^dag on a padded space
    std::vector<MatrixXc> t(n);
    for (int j = 0; j < n; ++j) {
        MatrixXc gen = MatrixXc::Zero(dloc, dloc);
        for (int k = 0; k + 1 < dloc; ++k) {
            gen(k + 1, k) = alpha(j) * std::sqrt(static_cast<double>(k + 1));
            gen(k, k + 1) = -std::conj(alpha(j)) * std::sqrt(static_cast<double>(k + 1));
        }
        const MatrixXc disp = gen.exp();
        MatrixXc par = MatrixXc::Zero(dloc, dloc);
        for (int k = 0; k < dloc; ++k) par(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
        t[j] = disp * par * disp.adjoint();
    }

    Complex acc = 0.0;
    for (long s = 0; s < ss.basis.dim(); ++s) {
        for (long sp = 0; sp < ss.basis.dim(); ++sp) {
            Complex prod = ss.rho(s, sp);
            if (prod == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j)
                prod *= t[j](ss.basis.states[sp][j], ss.basis.states[s][j]);
            acc += prod;
        }
    }
    return std::pow(2.0 / M_PI, n) * acc.real();
}

double trace_distance(const MatrixXc& a, const MatrixXc& b) {
    const MatrixXc diff = a - b;
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace pairlat
