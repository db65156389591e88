#include "pairlat/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pairlat {

void ModelSpec::validate() const {
    if (n <= 0) throw ModelError("ModelSpec: n must be positive");
    if (d < 0) throw ModelError("ModelSpec: d must be non-negative");
    if (big_u == 0.0) throw ModelError("ModelSpec: U must be nonzero");
    if (kappa < 0.0) throw ModelError("ModelSpec: kappa must be non-negative");
    if (d == 0) {
        if (lambda_nn != Complex(0.0, 0.0) && !m_override)
            throw ModelError("ModelSpec: nearest-neighbour drive needs d >= 1");
    } else {
        if (dims.empty()) throw ModelError("ModelSpec: d >= 1 requires dims");
        if (static_cast<int>(dims.size()) != d)
            throw ModelError("ModelSpec: dims size must equal d");
        long prod = 1;
        for (int L : dims) {
            if (L <= 0) throw ModelError("ModelSpec: dims entries must be positive");
            prod *= L;
        }
        if (prod != n) throw ModelError("ModelSpec: product(dims) must equal n");
    }
    if (m_override) {
        const MatrixXc& m = *m_override;
        if (m.rows() != n || m.cols() != n)
            throw ModelError("ModelSpec: override matrix must be n x n");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
            throw ModelError("ModelSpec: override matrix must be symmetric");
    }
}

namespace {

// site index <-> lattice coordinates, row-major over dims
std::vector<int> unravel(long idx, const std::vector<int>& dims) {
    std::vector<int> c(dims.size());
    for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
        c[a] = static_cast<int>(idx % dims[a]);
        idx /= dims[a];
    }
    return c;
}

long ravel(const std::vector<int>& c, const std::vector<int>& dims) {
    long idx = 0;
    for (size_t a = 0; a < dims.size(); ++a) idx = idx * dims[a] + c[a];
    return idx;
}

}  // namespace

MatrixXc build_pairing_matrix(const ModelSpec& spec) {
    spec.validate();
    if (spec.m_override) return *spec.m_override;

    MatrixXc m = MatrixXc::Zero(spec.n, spec.n);
    m.diagonal().setConstant(spec.g);
    if (spec.d == 0) return m;

    const Complex bond = spec.lambda_nn / (2.0 * spec.d);
    for (long i = 0; i < spec.n; ++i) {
        const auto ci = unravel(i, spec.dims);
        for (int axis = 0; axis < spec.d; ++axis) {
            for (int dir : {+1, -1}) {
                auto cj = ci;
                cj[axis] += dir;
                if (spec.boundary == Boundary::periodic) {
                    cj[axis] = (cj[axis] + spec.dims[axis]) % spec.dims[axis];
                } else if (cj[axis] < 0 || cj[axis] >= spec.dims[axis]) {
                    continue;
                }
                m(i, ravel(cj, spec.dims)) += bond;
            }
        }
    }
    // visiting every site and both directions writes m(i,j) from i and m(j,i)
    // from j, so the result is symmetric; two-site rings accumulate both wraps
    return m;
}

PairingSpectrum takagi(const MatrixXc& m, double u, double class_tol) {
    const long n = m.rows();
    if (m.cols() != n) throw ModelError("takagi: matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ModelError("takagi: matrix must be symmetric");
    if (u == 0.0) throw ModelError("takagi: u must be nonzero");

    const MatrixXc c = m / u;
    // real symmetric embedding: T [x; y] = s [x; y]  <=>  C conj(x+iy) = s (x+iy)
    Eigen::MatrixXd t(2 * n, 2 * n);
    t.topLeftCorner(n, n) = c.real();
    t.topRightCorner(n, n) = c.imag();
    t.bottomLeftCorner(n, n) = c.imag();
    t.bottomRightCorner(n, n) = -c.real();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success) throw std::runtime_error("takagi: eigensolver failed");

    // Walk eigenpairs from the largest eigenvalue down. Each con-eigenvalue
    // s >= 0 of multiplicity k appears as a 2k-dimensional real eigenspace
    // (v and iv are distinct real vectors); project out the complex span of
    // what is already taken and keep the survivors.
    PairingSpectrum ps;
    ps.v.resize(n, n);
    ps.lambda.resize(n);
    long taken = 0;
    for (long idx = 2 * n - 1; idx >= 0 && taken < n; --idx) {
        const double s = es.eigenvalues()(idx);
        VectorXc v = es.eigenvectors().col(idx).head(n) +
                     Complex(0, 1) * es.eigenvectors().col(idx).tail(n);
        for (long k = 0; k < taken; ++k) v -= ps.v.col(k).dot(v) * ps.v.col(k);
        const double nrm = v.norm();
        if (nrm < 0.5) continue;  // complex-linearly dependent on vectors already taken
        ps.v.col(taken) = v / nrm;
        ps.lambda(taken) = std::max(0.0, s);
        ++taken;
    }
    if (taken != n) throw std::runtime_error("takagi: con-eigenvector extraction failed");

    // polish the column phases: for a con-eigenvector, v^dag C conj(v) equals
    // the singular value; rounding-level phase drift gets rotated away
    for (long k = 0; k < n; ++k) {
        const Complex d = (ps.v.col(k).adjoint() * c * ps.v.col(k).conjugate())(0, 0);
        if (std::abs(d) > 1e-300) {
            ps.v.col(k) *= std::polar(1.0, 0.5 * std::arg(d));
            ps.lambda(k) = std::abs(d);
        }
    }

    // descending order, stable under ties
    std::vector<long> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](long a, long b) { return ps.lambda(a) > ps.lambda(b); });
    MatrixXc vs(n, n);
    Eigen::VectorXd ls(n);
    for (long k = 0; k < n; ++k) {
        vs.col(k) = ps.v.col(order[k]);
        ls(k) = ps.lambda(order[k]);
    }
    ps.v = vs;
    ps.lambda = ls;

    ps.lambda_star = n > 0 ? ps.lambda(0) : 0.0;
    const double tol = class_tol * std::max(1.0, ps.lambda_star);
    for (long k = 0; k < n; ++k) {
        if (k == 0 || ps.lambda(k - 1) - ps.lambda(k) > tol)
            ps.classes.emplace_back();
        ps.classes.back().push_back(static_cast<int>(k));
    }
    ps.multiplicity = static_cast<int>(ps.classes.front().size());
    return ps;
}

double singular_value_formula(const ModelSpec& spec, const std::vector<double>& k) {
    if (spec.d < 1) throw ModelError("singular_value_formula: requires d >= 1");
    if (spec.boundary != Boundary::periodic)
        throw ModelError("singular_value_formula: valid only for periodic boundaries");
    if (static_cast<int>(k.size()) != spec.d)
        throw ModelError("singular_value_formula: wavevector size mismatch");
    double csum = 0.0;
    for (double kj : k) csum += std::cos(kj);
    const Complex val = spec.lambda_nn / static_cast<double>(spec.d) * csum + spec.g;
    return std::abs(val) / std::abs(spec.u());
}

std::vector<std::vector<double>> brillouin_zone(const ModelSpec& spec) {
    if (spec.d < 1) throw ModelError("brillouin_zone: requires d >= 1");
    std::vector<std::vector<double>> ks;
    ks.reserve(spec.n);
    for (long i = 0; i < spec.n; ++i) {
        long rem = i;
        std::vector<double> k(spec.d);
        for (int a = spec.d - 1; a >= 0; --a) {
            k[a] = 2.0 * M_PI * static_cast<double>(rem % spec.dims[a]) / spec.dims[a];
            rem /= spec.dims[a];
        }
        ks.push_back(std::move(k));
    }
    return ks;
}

}  // namespace pairlat
