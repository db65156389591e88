#include "pairlat/fock.hpp"

#include <algorithm>
#include <stdexcept>

namespace pairlat {

namespace {

void enumerate(std::vector<std::uint16_t>& occ, int mode, int remaining, const FockConfig& cfg,
               std::vector<std::vector<std::uint16_t>>& out) {
    if (mode == cfg.n_modes) {
        out.push_back(occ);
        return;
    }
    const int top = std::min(cfg.n_max, remaining);
    for (int n = 0; n <= top; ++n) {
        occ[mode] = static_cast<std::uint16_t>(n);
        enumerate(occ, mode + 1, remaining - n, cfg, out);
    }
    occ[mode] = 0;
}

}  // namespace

FockBasis FockBasis::build(const FockConfig& cfg) {
    if (cfg.n_modes <= 0 || cfg.n_max < 0 || cfg.n_tot_max < 0)
        throw std::invalid_argument("FockBasis: bad configuration");
    FockBasis b;
    b.cfg = cfg;
    std::vector<std::uint16_t> occ(cfg.n_modes, 0);
    enumerate(occ, 0, cfg.n_tot_max, cfg, b.states);
    return b;  // recursion emits lexicographic order by construction
}

long FockBasis::find(const std::vector<std::uint16_t>& occ) const {
    const auto it = std::lower_bound(states.begin(), states.end(), occ);
    if (it == states.end() || *it != occ) return -1;
    return static_cast<long>(it - states.begin());
}

SparseC lowering(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.cfg.n_modes)
        throw std::invalid_argument("lowering: mode out of range");
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(basis.states.size());
    std::vector<std::uint16_t> occ;
    for (long s = 0; s < basis.dim(); ++s) {
        const int n = basis.states[s][mode];
        if (n == 0) continue;
        occ = basis.states[s];
        occ[mode] = static_cast<std::uint16_t>(n - 1);
        const long r = basis.find(occ);
        trips.emplace_back(r, s, std::sqrt(static_cast<double>(n)));
    }
    SparseC a(basis.dim(), basis.dim());
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

SparseC total_number(const FockBasis& basis) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(basis.states.size());
    for (long s = 0; s < basis.dim(); ++s) {
        int tot = 0;
        for (const auto n : basis.states[s]) tot += n;
        trips.emplace_back(s, s, static_cast<double>(tot));
    }
    SparseC n(basis.dim(), basis.dim());
    n.setFromTriplets(trips.begin(), trips.end());
    return n;
}

SparseC pair_creation(const FockBasis& basis, const MatrixXc& c) {
    const int nm = basis.cfg.n_modes;
    if (c.rows() != nm || c.cols() != nm)
        throw std::invalid_argument("pair_creation: coefficient matrix size mismatch");
    std::vector<Eigen::Triplet<Complex>> trips;
    std::vector<std::uint16_t> occ;
    for (long s = 0; s < basis.dim(); ++s) {
        for (int i = 0; i < nm; ++i) {
            for (int j = 0; j < nm; ++j) {
                if (c(i, j) == Complex(0.0, 0.0)) continue;
                occ = basis.states[s];
                const double f1 = std::sqrt(static_cast<double>(occ[i] + 1));
                occ[i] = static_cast<std::uint16_t>(occ[i] + 1);
                const double f2 = std::sqrt(static_cast<double>(occ[j] + 1));
                occ[j] = static_cast<std::uint16_t>(occ[j] + 1);
                const long r = basis.find(occ);
                if (r < 0) continue;  // pushed past the truncation
                trips.emplace_back(r, s, c(i, j) * f1 * f2);
            }
        }
    }
    SparseC k(basis.dim(), basis.dim());
    k.setFromTriplets(trips.begin(), trips.end());
    return k;
}

SparseC one_body(const FockBasis& basis, const MatrixXc& j) {
    const int nm = basis.cfg.n_modes;
    if (j.rows() != nm || j.cols() != nm)
        throw std::invalid_argument("one_body: coefficient matrix size mismatch");
    std::vector<Eigen::Triplet<Complex>> trips;
    std::vector<std::uint16_t> occ;
    for (long s = 0; s < basis.dim(); ++s) {
        for (int a = 0; a < nm; ++a) {
            for (int b = 0; b < nm; ++b) {
                if (j(a, b) == Complex(0.0, 0.0)) continue;
                if (basis.states[s][b] == 0) continue;
                occ = basis.states[s];
                const double f2 = std::sqrt(static_cast<double>(occ[b]));
                occ[b] = static_cast<std::uint16_t>(occ[b] - 1);
                const double f1 = std::sqrt(static_cast<double>(occ[a] + 1));
                occ[a] = static_cast<std::uint16_t>(occ[a] + 1);
                const long r = basis.find(occ);
                if (r < 0) continue;
                trips.emplace_back(r, s, j(a, b) * f1 * f2);
            }
        }
    }
    SparseC op(basis.dim(), basis.dim());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

SparseC hamiltonian(const FockBasis& basis, const ModelSpec& spec, const MatrixXc& m) {
    const double u = spec.u();
    std::vector<Eigen::Triplet<Complex>> trips;
    for (long s = 0; s < basis.dim(); ++s) {
        double tot = 0;
        for (const auto n : basis.states[s]) tot += n;
        trips.emplace_back(s, s, u * tot * tot - spec.delta * tot);
    }
    SparseC h(basis.dim(), basis.dim());
    h.setFromTriplets(trips.begin(), trips.end());
    const SparseC kp = pair_creation(basis, m);
    h += kp + SparseC(kp.adjoint());
    return h;
}

double boundary_population(const FockBasis& basis, const MatrixXc& rho) {
    double pop = 0.0;
    for (long s = 0; s < basis.dim(); ++s) {
        int tot = 0;
        bool edge = false;
        for (const auto n : basis.states[s]) {
            tot += n;
            if (n >= basis.cfg.n_max - 1) edge = true;
        }
        if (edge || tot >= basis.cfg.n_tot_max - 1) pop += rho(s, s).real();
    }
    return pop;
}

}  // namespace pairlat
