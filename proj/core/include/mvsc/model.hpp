#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvsc/kernels.hpp"

namespace mvsc {

using Labels = std::vector<int>;

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// V views X^v, each features x samples, sharing the sample count.
struct MultiViewDataset {
    std::vector<Matrix> views;
    std::optional<Labels> labels;
    std::optional<int> clusters;

    [[nodiscard]] std::size_t view_count() const noexcept { return views.size(); }
    [[nodiscard]] Eigen::Index samples() const { return views.empty() ? 0 : views.front().cols(); }
    [[nodiscard]] Eigen::Index min_features() const;

    // Throws ShapeMismatch or std::invalid_argument on a broken invariant.
    void validate() const;
};

struct SolverConfig {
    Eigen::Index k_s = 10;
    Eigen::Index k_c = 10;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    double mu0 = 1e-4;
    double mu_max = 1e6;
    double rho = 1.5;
    double epsilon = 1e-6;
    int max_iters = 300;
    std::uint64_t seed = 0;

    void validate() const;
    void validate_against(const MultiViewDataset& data) const;
};

struct FactorState {
    std::vector<Matrix> p_s;  // M^v x K_s
    std::vector<Matrix> p_c;  // M^v x K_c
    std::vector<Matrix> h_s;  // K_s x N
    Matrix h_c;               // K_c x N
    std::uint64_t seed = 0;   // source of the zero-target fallback draws

    [[nodiscard]] std::size_t view_count() const noexcept { return h_s.size(); }
    [[nodiscard]] Eigen::Index k_s() const { return h_s.empty() ? 0 : h_s.front().rows(); }
    [[nodiscard]] Eigen::Index k_c() const noexcept { return h_c.rows(); }
};

struct SubspaceStateCSLF {
    Matrix z;
    Matrix d;
    std::vector<Matrix> e_r;
    Matrix e_s;  // (K_s V + K_c) x N, rows stacked like joint_latent
    std::vector<Matrix> lam1;
    Matrix lam2;
    Matrix lam3;
    SimplexVector pi;
    double mu = 0.0;
};

struct SubspaceStateCSLFS {
    std::vector<Matrix> z_v;
    Matrix z_c;
    std::vector<Matrix> d_v;
    Matrix d_c;
    std::vector<Matrix> e_r;
    std::vector<Matrix> e_s_v;
    Matrix e_s_c;
    std::vector<Matrix> lam1;
    std::vector<Matrix> lam2;
    Matrix lam3;
    std::vector<Matrix> lam4;
    Matrix lam5;
    SimplexVector pi1;
    SimplexVector pi2;  // length V + 1, last entry weights the consistent term
    double mu = 0.0;
};

[[nodiscard]] FactorState initialize_factors(const MultiViewDataset& data, const SolverConfig& config);
[[nodiscard]] std::pair<FactorState, SubspaceStateCSLF> initialize_cslf(const MultiViewDataset& data,
                                                                        const SolverConfig& config);
[[nodiscard]] std::pair<FactorState, SubspaceStateCSLFS> initialize_cslfs(const MultiViewDataset& data,
                                                                          const SolverConfig& config);

// [H_s^1; ...; H_s^V; H_c]
[[nodiscard]] Matrix joint_latent(const FactorState& state);

// Half-open row range of view v (or the consistent block when v == V) in joint_latent.
struct RowBlock {
    Eigen::Index offset;
    Eigen::Index rows;
};
[[nodiscard]] RowBlock specific_block(const FactorState& state, std::size_t view);
[[nodiscard]] RowBlock consistent_block(const FactorState& state);

} // namespace mvsc
