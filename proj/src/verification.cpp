#include "pairlat/verification.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "pairlat/oracle.hpp"
#include "pairlat/parallel.hpp"
#include "pairlat/wigner.hpp"

namespace pairlat {

namespace {

struct DrawBudget {
    double drive_cap;   // |G|, |Lambda| ceiling
    double nbar_cap;    // resample when the exact density exceeds this
    int n_max_cap;
    int n_tot_cap;
};

DrawBudget budget_for(int n_modes) {
    switch (n_modes) {
        case 1: return {1.0, 2.2, 50, 50};
        case 2: return {0.6, 0.8, 14, 18};
        default: return {0.35, 0.35, 8, 10};
    }
}

}  // namespace

ModelSpec draw_model(std::mt19937_64& rng, int n_modes, int dim_kind) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const DrawBudget bud = budget_for(n_modes);

    ModelSpec s;
    s.n = n_modes;
    s.big_u = 1.0;
    if (dim_kind == 0 || n_modes == 1) {
        s.d = 0;
    } else {
        s.d = 1;
        s.dims = {n_modes};
        s.boundary = dim_kind == 1 ? Boundary::open : Boundary::periodic;
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        s.kappa = std::exp(std::log(0.01) + uni(rng) * std::log(1.0 / 0.01));
        s.delta = -1.2 + 3.0 * uni(rng);
        s.g = std::polar(bud.drive_cap * uni(rng), 2.0 * M_PI * uni(rng));
        s.lambda_nn = s.d >= 1 ? std::polar(bud.drive_cap * uni(rng), 2.0 * M_PI * uni(rng))
                               : Complex(0.0, 0.0);
        try {
            const DerivedScalars ds = derived_scalars(s);
            const PairingSpectrum ps = takagi(build_pairing_matrix(s), ds.u);
            if (mean_density(ps, s.n, ds.delta_dl) <= bud.nbar_cap) return s;
        } catch (const std::exception&) {
            // resample: resonant or non-convergent corner
        }
    }
    // tame fallback, always solvable
    s.kappa = 0.3;
    s.delta = 0.1;
    s.g = 0.15 * bud.drive_cap;
    s.lambda_nn = s.d >= 1 ? Complex(0.2 * bud.drive_cap, 0.0) : Complex(0.0, 0.0);
    return s;
}

std::vector<SuiteCheck> run_equivalence_suite(const SuiteOptions& opt) {
    enum CheckId {
        kDensity,
        kOneParticle,
        kPairing,
        kG2,
        kG2K,
        kG2Phi,
        kWigner,
        kPurification,
        kHtrsDrive,
        kHtrsVacuum,
        kHopping,
        kNonthermal,
        kCheckCount
    };
    std::vector<SuiteCheck> checks(kCheckCount);
    checks[kDensity] = {"density vs oracle", 0.0, 0.0, 0, false};
    checks[kOneParticle] = {"one-particle correlators vs oracle", 0.0, 0.0, 0, false};
    checks[kPairing] = {"pairing correlators vs oracle", 0.0, 0.0, 0, false};
    checks[kG2] = {"density-density g2 vs oracle", 0.0, 0.0, 0, false};
    checks[kG2K] = {"collective pairing fluctuation g2_k vs oracle", 0.0, 0.0, 0, false};
    checks[kG2Phi] = {"on-site pairing fluctuation g2_phi vs oracle", 0.0, 0.0, 0, false};
    checks[kWigner] = {"pointwise wigner vs displaced parity", 0.0, 1e-6, 0, false};
    checks[kPurification] = {"purification trace distance", 0.0, 1e-8, 0, false};
    checks[kHtrsDrive] = {"hidden-TRS drive condition", 0.0, 1e-8, 0, false};
    checks[kHtrsVacuum] = {"hidden-TRS antisymmetric vacuum", 0.0, 1e-8, 0, false};
    checks[kHopping] = {"imaginary-hopping invariance", 0.0, 1e-8, 0, false};
    checks[kNonthermal] = {"commutator with H at strong loss", 1e300, 1e-6, 0, true};

    std::mutex merge_mutex;
    const auto record = [&](CheckId id, double value) {
        std::lock_guard<std::mutex> lock(merge_mutex);
        SuiteCheck& c = checks[id];
        c.worst = c.lower_bound ? std::min(c.worst, value) : std::max(c.worst, value);
        ++c.samples;
    };

    MomentOptions mopt;
    OracleOptions oopt;
    oopt.uniqueness_check = false;

    parallel_for(opt.draws, opt.threads, [&](long draw) {
        std::mt19937_64 rng(opt.seed * 7919u + static_cast<unsigned>(draw));
        const int n_modes = std::min(opt.max_n, (draw % 5 == 4) ? 3 : (draw % 2 == 0 ? 1 : 2));
        const int dim_kind = static_cast<int>(draw % 3);
        const ModelSpec spec = draw_model(rng, n_modes, dim_kind);
        const DerivedScalars ds = derived_scalars(spec);
        const PairingSpectrum ps = takagi(build_pairing_matrix(spec), ds.u);

        CorrelatorRequest req;
        req.displacements.clear();
        for (int r = 0; r < n_modes; ++r) req.displacements.push_back(r);
        req.quartics = true;
        req.averaged_g2 = false;
        const ObservableSet exact = correlators(spec, ps, ds.delta_dl, req, mopt);

        const DrawBudget bud = budget_for(n_modes);
        FockConfig fock{n_modes,
                        std::min(bud.n_max_cap,
                                 std::max(12, static_cast<int>(std::ceil(8.0 * exact.nbar + 8)))),
                        0};
        fock.n_tot_max = std::min(bud.n_tot_cap, 2 * fock.n_max);
        if (n_modes == 1) fock.n_tot_max = fock.n_max;
        const SteadyStateOracle ss = steady_state(spec, fock, nullptr, oopt);
        const OracleObservables brute =
            oracle_observables(spec, ss, req.displacements, exact.ref_site);

        const double tol = std::max(opt.tol_floor, 30.0 * ss.truncation_indicator);
        const auto set_tol = [&](CheckId id) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            checks[id].tolerance = std::max(checks[id].tolerance, tol);
        };
        for (CheckId id : {kDensity, kOneParticle, kPairing, kG2, kG2K, kG2Phi}) set_tol(id);

        record(kDensity, std::abs(exact.nbar - brute.nbar));
        for (int r : req.displacements) {
            if (!exact.one_particle.count(r) || !brute.one_particle.count(r)) continue;
            record(kOneParticle, std::abs(exact.one_particle.at(r) - brute.one_particle.at(r)));
            record(kPairing, std::abs(exact.pairing.at(r) - brute.pairing.at(r)));
            if (exact.g2.count(r) && brute.g2.count(r)) {
                const double scale = std::max(1.0, std::abs(brute.g2.at(r)));
                record(kG2, std::abs(exact.g2.at(r) - brute.g2.at(r)) / scale);
            }
        }
        // the inverse-pairing observable amplifies truncation error by the
        // condition number of M, the on-site one by 1/|phi|^2; scale the
        // recorded deviations back so one tolerance fits every draw
        if (exact.has_g2_k && brute.has_g2_k) {
            const double cond = ps.lambda_star / std::max(1e-12, ps.lambda.minCoeff());
            const double amp = cond * cond * (1.0 + std::abs(brute.g2_k)) /
                               std::min(1.0, std::max(std::norm(brute.k_pairing), 1e-6));
            record(kG2K, std::abs(exact.g2_k - brute.g2_k) / amp);
        }
        if (exact.has_g2_phi && brute.has_g2_phi) {
            const double phi2 = std::norm(brute.pairing.count(0) ? brute.pairing.at(0)
                                                                 : Complex(1.0, 0.0));
            const double amp = (1.0 + std::abs(brute.g2_phi)) / std::min(1.0, std::max(phi2, 1e-6));
            record(kG2Phi, std::abs(exact.g2_phi - brute.g2_phi) / amp);
        }

        if (n_modes <= 2) {
            const WignerContext wctx = make_wigner_context(spec, ps, ds.delta_dl, mopt);
            std::uniform_real_distribution<double> pt(-1.2, 1.2);
            for (int p = 0; p < 2; ++p) {
                VectorXc alpha(n_modes);
                for (int j = 0; j < n_modes; ++j) alpha(j) = Complex(pt(rng), pt(rng));
                record(kWigner,
                       std::abs(wigner_at(wctx, alpha) - oracle_wigner_at(ss, alpha)));
            }

            // the purification needs roughly twice the single-space quanta:
            // left and right factors mirror each other's photon content
            const int t2 = static_cast<int>(std::ceil(1.8 * fock.n_tot_max)) + 2;
            FockConfig doubled{2 * n_modes, t2, t2};
            const Purification pur = purification_state(spec, doubled);
            const HtrsResidual hr = htrs_residual(spec, pur);
            record(kHtrsDrive, hr.pairing_condition);
            record(kHtrsVacuum, hr.antisymmetric_vacuum);

            // the flat 1e-8 trace-distance contract needs the oracle itself
            // converged past truncation back-action, which the single-mode
            // draws afford; two-mode coverage lives in the unit tests
            if (n_modes == 1) {
                FockConfig hard{1, fock.n_max + 10, fock.n_max + 10};
                const SteadyStateOracle ss_hard = steady_state(spec, hard, nullptr, oopt);
                record(kPurification,
                       trace_distance(ss_hard.rho, trace_out_right(pur, ss_hard.basis)));
            }
        }
    });

    // invariance of the uniform-drive steady state under imaginary hopping
    {
        ModelSpec s;
        s.n = 2;
        s.d = 0;
        s.big_u = 1.0;
        s.g = 0.3;
        s.kappa = 0.4;
        s.delta = 0.2;
        MatrixXc hop = MatrixXc::Zero(2, 2);
        hop(0, 1) = Complex(0.0, 0.3);
        hop(1, 0) = Complex(0.0, -0.3);
        record(kHopping, hopping_invariance(s, {2, 14, 18}, hop, oopt));
    }
    // the steady state fails to commute with H away from the zero-loss limit
    {
        ModelSpec s;
        s.n = 1;
        s.d = 0;
        s.big_u = 1.0;
        s.g = 1.0;
        s.kappa = 1.0;
        const SteadyStateOracle ss = steady_state(s, {1, 40, 40}, nullptr, oopt);
        record(kNonthermal, nonthermality(s, ss));
    }

    return checks;
}

}  // namespace pairlat
