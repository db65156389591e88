// Randomized equivalence suite: exact-solution observables against the
// truncated-Fock solve, pointwise Wigner values, purification conditions,
// hopping invariance, and nonthermality, over seeded random parameter sets.
// Shared by the CLI `oracle-check` subcommand and the acceptance tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "pairlat/moments.hpp"

namespace pairlat {

struct SuiteCheck {
    std::string name;
    double worst = 0.0;        // worst observed deviation (or smallest value for lower bounds)
    double tolerance = 0.0;
    long samples = 0;
    bool lower_bound = false;  // pass when the value stays above the tolerance
    bool pass() const {
        return samples > 0 && (lower_bound ? worst >= tolerance : worst <= tolerance);
    }
};

struct SuiteOptions {
    unsigned seed = 1;
    int draws = 20;
    int threads = 1;
    int max_n = 3;
    double tol_floor = 1e-7;   // comparison tolerance floor for observables
};

std::vector<SuiteCheck> run_equivalence_suite(const SuiteOptions& opt);

// one random model draw of the suite (exposed for reproducibility in tests)
ModelSpec draw_model(std::mt19937_64& rng, int n_modes, int dim_kind);

}  // namespace pairlat
