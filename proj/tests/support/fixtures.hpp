#pragma once

#include <array>
#include <cstdint>

#include "mvsc/mvsc.hpp"

namespace mvsc::testing {

// The acceptance fixture. Every view is only 20-dimensional and the cluster
// subspaces overlap inside it, so clustering a raw view is imperfect under
// noise while the latent factors stay well separated.
inline SyntheticSpec acceptance_spec(double sigma) {
    SyntheticSpec s;
    s.views = 3;
    s.clusters = 3;
    s.samples = 150;
    s.k_s = 5;
    s.k_c = 5;
    s.intrinsic_dim = 1;
    s.dims = {20, 20, 20};
    s.sigma = sigma;
    s.seed = 9;
    return s;
}

// Tuned once per algorithm on the clean fixture; frozen.
inline SolverConfig acceptance_config(Algorithm algorithm, std::uint64_t seed) {
    SolverConfig c;
    c.k_s = 10;
    c.k_c = 10;
    c.lambda1 = 0.1;
    c.lambda2 = algorithm == Algorithm::Cslf ? 0.1 : 10.0;
    c.lambda3 = algorithm == Algorithm::Cslf ? 1.0 : 0.1;
    c.mu0 = 0.1;
    c.rho = 1.5;
    c.max_iters = 200;
    c.seed = seed;
    return c;
}

inline constexpr std::array<std::uint64_t, 3> kMasterSeeds{7, 8, 9};

// Ridge weight of the least-squares self-expression baseline.
inline constexpr double kLsrLambda = 0.1;

} // namespace mvsc::testing
