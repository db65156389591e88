#include <doctest.h>

#include <random>

#include "pairlat/semiclassics.hpp"

using namespace pairlat;

namespace {

ModelSpec d0_spec(int n, double g, double kappa, double delta) {
    ModelSpec s;
    s.n = n;
    s.d = 0;
    s.big_u = 1.0;
    s.g = g;
    s.kappa = kappa;
    s.delta = delta;
    return s;
}

PairingSpectrum synthetic_spectrum(const Eigen::VectorXd& lam) {
    PairingSpectrum ps;
    const int n = static_cast<int>(lam.size());
    ps.v = MatrixXc::Identity(n, n);
    ps.lambda = lam;
    ps.lambda_star = lam.maxCoeff();
    const double tol = 1e-10 * std::max(1.0, ps.lambda_star);
    for (int j = 0; j < n; ++j) {
        if (j == 0 || lam(j - 1) - lam(j) > tol) ps.classes.emplace_back();
        ps.classes.back().push_back(j);
    }
    ps.multiplicity = static_cast<int>(ps.classes.front().size());
    return ps;
}

// classical limit taken in the physical-mode basis, then rotated; an
// independent route to the same vector field
VectorXc physical_basis_rhs(const ModelSpec& spec, const PairingSpectrum& ps,
                            const VectorXc& beta) {
    const DerivedScalars ds = derived_scalars(spec);
    const MatrixXc m = build_pairing_matrix(spec);
    const VectorXc alpha = ps.v * beta;
    const double r2 = alpha.squaredNorm();
    VectorXc adot(alpha.size());
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        Complex drive = 0.0;
        for (Eigen::Index j = 0; j < alpha.size(); ++j)
            drive += m(i, j) * std::conj(alpha(j));
        adot(i) = Complex(0, -1) *
                  ((ds.u * (2.0 * r2 + 1.0) - ds.delta_eff) * alpha(i) + 2.0 * drive);
    }
    return ps.v.adjoint() * adot;
}

}  // namespace

TEST_SUITE("semiclassics") {

TEST_CASE("origin is always stationary") {
    ModelSpec s = d0_spec(3, 0.4, 0.2, 0.1);
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    CHECK(eom_rhs(s, ps, VectorXc::Zero(3)).norm() == 0.0);
}

TEST_CASE("detuning cancellation freezes undriven amplitudes") {
    ModelSpec s = d0_spec(2, 0.0, 0.0, 0.0);
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    VectorXc beta(2);
    beta << Complex(0.6, 0.2), Complex(-0.1, 0.4);
    s.delta = s.u() * (2.0 * beta.squaredNorm() + 1.0);
    CHECK(eom_rhs(s, ps, beta).norm() < 1e-14);
}

TEST_CASE("field matches the physical-basis classical limit") {
    std::mt19937_64 rng(13u);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        ModelSpec s;
        s.n = 4;
        s.d = 1;
        s.dims = {4};
        s.boundary = trial % 2 ? Boundary::open : Boundary::periodic;
        s.big_u = 1.0;
        s.g = Complex(0.3 * g(rng), 0.3 * g(rng));
        s.lambda_nn = Complex(0.3 * g(rng), 0.3 * g(rng));
        s.kappa = std::abs(g(rng));
        s.delta = g(rng);
        const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
        VectorXc beta(4);
        for (int j = 0; j < 4; ++j) beta(j) = Complex(g(rng), g(rng));
        const VectorXc a = eom_rhs(s, ps, beta);
        const VectorXc b = physical_basis_rhs(s, ps, beta);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("stable sphere radius at resonance without loss") {
    // Delta/u = 1, kappa = 0  ->  R = sqrt(lambda_*)
    ModelSpec s = d0_spec(3, 0.7, 0.0, 0.0);
    s.delta = s.u();
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    const auto sp = stable_sphere(s, ps);
    REQUIRE(sp.has_value());
    CHECK(sp->radius == doctest::Approx(std::sqrt(ps.lambda_star)).epsilon(1e-12));
    CHECK(sp->multiplicity == 3);
}

TEST_CASE("drive below loss leaves only the origin") {
    ModelSpec s = d0_spec(2, 0.1, 3.0, 0.5);  // (2 lambda)^2 < (kappa/2u)^2
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    CHECK(!stable_sphere(s, ps).has_value());
}

TEST_CASE("sphere points satisfy the fixed-point equations") {
    ModelSpec s = d0_spec(4, 0.9, 0.3, 0.6);
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    std::mt19937_64 rng(7u);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd dir(ps.classes.front().size());
        for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = g(rng);
        const auto fp = ring_fixed_point(s, ps, 0, dir);
        REQUIRE(fp.has_value());
        CHECK(fixed_point_residual(s, ps, fp->beta) < 1e-12);
    }
}

TEST_CASE("rotations among max-pairing modes map fixed points to fixed points") {
    ModelSpec s;
    s.n = 5;
    s.d = 1;
    s.dims = {5};
    s.boundary = Boundary::open;
    s.big_u = 1.0;
    s.g = 0.0;
    s.lambda_nn = 2.0;
    s.kappa = 0.05;
    s.delta = 0.0;
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    REQUIRE(ps.multiplicity == 2);  // open-chain extremal pair
    Eigen::VectorXd dir(2);
    dir << 1.0, 0.0;
    const auto fp = ring_fixed_point(s, ps, 0, dir);
    REQUIRE(fp.has_value());
    std::mt19937_64 rng(3u);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 10; ++trial) {
        const double th = ang(rng);
        VectorXc rotated = fp->beta;
        const int a = ps.classes[0][0], b = ps.classes[0][1];
        rotated(a) = std::cos(th) * fp->beta(a) - std::sin(th) * fp->beta(b);
        rotated(b) = std::sin(th) * fp->beta(a) + std::cos(th) * fp->beta(b);
        CHECK(fixed_point_residual(s, ps, rotated) < 1e-10);
    }
}

TEST_CASE("goldstone pair for a degenerate transverse mode") {
    ModelSpec s = d0_spec(3, 0.8, 0.4, 1.2);
    const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
    Eigen::VectorXd dir(3);
    dir << 1.0, 0.0, 0.0;
    const auto fp = ring_fixed_point(s, ps, 0, dir);
    REQUIRE(fp.has_value());
    const auto eig = stability_eigenvalues_closed(s, ps, *fp);
    // s = 3: two goldstone pairs {0, -kappa} among the closed-form list
    int zeros = 0, relaxers = 0;
    for (const Complex& e : eig) {
        if (std::abs(e) < 1e-12) ++zeros;
        if (std::abs(e + Complex(s.kappa, 0.0)) < 1e-12) ++relaxers;
    }
    CHECK(zeros == 2);
    CHECK(relaxers >= 2);
}

TEST_CASE("closed-form spectra match the numerical jacobian") {
    std::mt19937_64 rng(57u);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> pos(0.05, 1.0);
    int spheres_checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        ModelSpec s;
        s.n = n;
        s.d = 0;
        s.big_u = 1.0 + pos(rng);
        s.kappa = pos(rng);
        s.delta = 2.0 * g(rng);
        Eigen::VectorXd lam(n);
        for (int j = 0; j < n; ++j) lam(j) = std::abs(g(rng)) + 0.2;
        if (trial % 3 == 0 && n >= 3) lam(1) = lam(0);  // force a degeneracy
        std::sort(lam.data(), lam.data() + n, std::greater<double>());
        const PairingSpectrum ps = synthetic_spectrum(lam);

        // origin
        FixedPoint origin{VectorXc::Zero(n), 0.0, 0.0, 0.0};
        const double d_origin = spectrum_distance(
            stability_eigenvalues_closed(s, ps, origin),
            stability_eigenvalues_numeric(s, ps, origin.beta));
        CHECK(d_origin < 1e-8);

        // sphere attached to the top class, when it exists
        Eigen::VectorXd dir(ps.classes.front().size());
        for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = g(rng);
        if (dir.norm() < 1e-6) dir(0) = 1.0;
        const auto fp = ring_fixed_point(s, ps, 0, dir);
        if (fp) {
            REQUIRE(fixed_point_residual(s, ps, fp->beta) < 1e-12);
            const double d_fp = spectrum_distance(
                stability_eigenvalues_closed(s, ps, *fp),
                stability_eigenvalues_numeric(s, ps, fp->beta));
            CHECK(d_fp < 1e-8);
            ++spheres_checked;
        }
    }
    CHECK(spheres_checked > 0);
}

TEST_CASE("pairing weaker than the top class is linearly unstable") {
    Eigen::VectorXd lam(3);
    lam << 1.5, 1.0, 0.4;
    const PairingSpectrum ps = synthetic_spectrum(lam);
    ModelSpec s = d0_spec(3, 0.0, 0.1, 0.0);
    s.delta = 2.2;
    Eigen::VectorXd dir(1);
    dir << 1.0;
    const auto fp = ring_fixed_point(s, ps, 1, dir);  // middle class
    REQUIRE(fp.has_value());
    const auto eig = stability_eigenvalues_closed(s, ps, *fp);
    double max_re = -1e300;
    for (const Complex& e : eig) max_re = std::max(max_re, e.real());
    CHECK(max_re > 0.0);
}

}  // TEST_SUITE
