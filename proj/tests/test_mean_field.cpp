#include <doctest.h>

#include "pairlat/mean_field.hpp"
#include "pairlat/moments.hpp"

using namespace pairlat;

namespace {

ModelSpec d0_spec(double g, double kappa, double delta) {
    ModelSpec s;
    s.n = 1;
    s.d = 0;
    s.big_u = 1.0;
    s.g = g;
    s.kappa = kappa;
    s.delta = delta;
    return s;
}

}  // namespace

TEST_SUITE("mean_field") {

TEST_CASE("gaussian density limits") {
    CHECK(gaussian_site_density(0.3, 0.0, 0.5) == 0.0);
    CHECK(gaussian_site_density(0.0, 0.1, 1e6) < 1e-10);
    CHECK(gaussian_site_density(0.0, 1.0 / 8.0, 1.0) == doctest::Approx(1.0 / 6.0));
    CHECK_THROWS_AS(gaussian_site_density(0.0, 1.0, 0.1), std::domain_error);
}

TEST_CASE("undriven self-consistency has only the empty solution") {
    const auto roots = solve_selfconsistent(d0_spec(0.0, 0.5, 0.3));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].nbar == 0.0);
    CHECK(roots[0].stable);
}

TEST_CASE("tristable window carries three self-consistent densities") {
    // kappa well below the critical cusp; scan for a detuning with 3 roots
    bool found = false;
    for (double delta = 0.5; delta < 12.0; delta += 0.05) {
        const auto roots = solve_selfconsistent(d0_spec(1.0, 1.0, delta));
        for (const auto& r : roots) CHECK(r.residual < 1e-10);
        if (roots.size() == 3) {
            found = true;
            CHECK(roots[0].nbar < roots[1].nbar);
            CHECK(roots[1].nbar < roots[2].nbar);
            CHECK(roots[0].stable);
            CHECK(!roots[1].stable);
            CHECK(roots[2].stable);
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("self-consistency maps stay put under the gaussian density") {
    const ModelSpec s = d0_spec(0.4, 0.8, 1.5);
    for (const auto& r : solve_selfconsistent(s)) {
        const double mapped =
            gaussian_site_density(2.0 * s.big_u * r.nbar - s.delta, s.g, s.kappa);
        CHECK(std::abs(mapped - r.nbar) < 1e-9 * (1.0 + r.nbar));
    }
}

TEST_CASE("critical point sits at the cubic cusp") {
    // triple root algebra: n* = (G^2/2U^2)^{1/3}, kappa*^2 = 12 U^2 n*^2 + 16 G^2,
    // Delta* = 3 U n*
    const CriticalPoint cp = critical_point(1.0, Complex(1.0, 0.0));
    const double nstar = std::cbrt(0.5);
    const double kstar = std::sqrt(12.0 * nstar * nstar + 16.0);
    CHECK(cp.kappa_star == doctest::Approx(kstar).epsilon(1e-4));
    CHECK(cp.delta_star == doctest::Approx(3.0 * nstar).epsilon(1e-2));

    // scaling in U and G through the same algebra
    const CriticalPoint cp2 = critical_point(2.0, Complex(0.5, 0.0));
    const double n2 = std::cbrt(0.25 * 0.5 / 4.0);
    CHECK(cp2.kappa_star ==
          doctest::Approx(std::sqrt(48.0 * n2 * n2 + 4.0)).epsilon(1e-4));
}

TEST_CASE("no critical point without enough drive") {
    CHECK_THROWS_AS(critical_point(1.0, Complex(0.0, 0.0)), std::domain_error);
}

TEST_CASE("just above the cusp every detuning is monostable") {
    const CriticalPoint cp = critical_point(1.0, Complex(1.0, 0.0));
    for (double delta = 0.2; delta < 12.0; delta += 0.1) {
        const auto roots = solve_selfconsistent(d0_spec(1.0, 1.02 * cp.kappa_star, delta));
        CHECK(roots.size() == 1);
    }
}

TEST_CASE("susceptibility scan finds an interior maximum") {
    const auto lorentzian = [](double delta) { return 1.0 / (1.0 + (delta - 2.0) * (delta - 2.0)); };
    const SusceptibilityPoint sp = susceptibility_max(lorentzian, 0.0, 4.0, 101, 1e-6);
    // |d/dx (1+x^2)^{-1}| peaks at x = 1/sqrt(3) with value 3 sqrt(3) / 8
    CHECK(sp.chi_max == doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-6));
    CHECK(std::abs(std::abs(sp.delta_at_max - 2.0) - 1.0 / std::sqrt(3.0)) < 1e-4);

    const auto edge_peaked = [](double delta) { return std::exp(delta); };
    CHECK_THROWS_AS(susceptibility_max(edge_peaked, 0.0, 1.0, 32, 1e-6), std::domain_error);
}

TEST_CASE("exact densities approach a self-consistent root as sites multiply") {
    ModelSpec s = d0_spec(1.0, 0.01, -1.0);  // monostable side of the fold
    const auto roots = solve_selfconsistent(s);
    REQUIRE(roots.size() == 1);
    const double target = roots[0].nbar;

    const auto nbar_at = [&](int n_modes) {
        ModelSpec at = s;
        at.n = n_modes;
        const PairingSpectrum ps = takagi(build_pairing_matrix(at), at.u());
        return mean_density(ps, n_modes, derived_scalars(at).delta_dl);
    };
    const double gap_200 = std::abs(nbar_at(200) - target);
    const double gap_400 = std::abs(nbar_at(400) - target);
    CHECK(gap_400 < gap_200);
    CHECK(gap_400 < 0.1 * target);  // already in the asymptotic funnel
}

TEST_CASE("total-pair-number fluctuations scale like sqrt(N)") {
    const std::vector<int> sizes{50, 100, 200, 400};
    std::vector<double> rms;
    for (int n_modes : sizes) {
        ModelSpec s = d0_spec(0.1, 0.01, 0.0);
        s.n = n_modes;
        const PairingSpectrum ps = takagi(build_pairing_matrix(s), s.u());
        rms.push_back(pair_number_rms(ps, n_modes, derived_scalars(s).delta_dl));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < sizes.size(); ++i) {
        const double x = std::log(static_cast<double>(sizes[i]));
        const double y = std::log(rms[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(sizes.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 0.4);
    CHECK(slope < 0.6);
}

}  // TEST_SUITE
