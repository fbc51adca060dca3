#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvsc/model.hpp"

namespace mvsc {

struct Diverged : std::runtime_error {
    Diverged(int iteration_, std::string variable_)
        : std::runtime_error("diverged at iteration " + std::to_string(iteration_) + " in " + variable_),
          iteration(iteration_),
          variable(std::move(variable_)) {}
    int iteration;
    std::string variable;
};

// Entries beyond this magnitude count as divergence.
inline constexpr double kDivergenceBound = 1e12;

struct TraceRecord {
    int iteration = 0;             // 1-based
    std::vector<double> criteria;  // 3 for CSLF, 5 for CSLFS
    double mu = 0.0;               // penalty used during the iteration
    double elapsed_ms = 0.0;
};

struct ResidualTrace {
    std::vector<std::string> names;
    std::vector<TraceRecord> records;

    // iteration, criteria..., mu, elapsed_ms
    void write_csv(std::ostream& out) const;
};

[[nodiscard]] const std::vector<std::string>& cslf_criterion_names();
[[nodiscard]] const std::vector<std::string>& cslfs_criterion_names();

template <class Subspace>
struct FitResult {
    FactorState factors;
    Subspace subspace;
    ResidualTrace trace;
    bool converged = false;
    int iterations = 0;
};
using CslfFit = FitResult<SubspaceStateCSLF>;
using CslfsFit = FitResult<SubspaceStateCSLFS>;

struct FitOptions {
    int threads = 1;              // >1 runs per-view updates concurrently
    bool record_wall_time = false;  // otherwise elapsed_ms stays 0 so output is reproducible
};

[[nodiscard]] CslfFit fit_cslf(const MultiViewDataset& data, const SolverConfig& config,
                               const FitOptions& options = {});
[[nodiscard]] CslfsFit fit_cslfs(const MultiViewDataset& data, const SolverConfig& config,
                                 const FitOptions& options = {});

// Targets of the projection sub-problems for view v:
//   y_s = Lam1/mu + X - P_c H_c - E_r,   y_c = Lam1/mu + X - P_s H_s - E_r.
[[nodiscard]] Matrix projection_target_specific(const MultiViewDataset& data, const FactorState& f,
                                                const Matrix& e_r, const Matrix& lam1, double mu, std::size_t view);
[[nodiscard]] Matrix projection_target_consistent(const MultiViewDataset& data, const FactorState& f,
                                                  const Matrix& e_r, const Matrix& lam1, double mu, std::size_t view);

// Single-variable updates, applied in place. `iteration` keys the zero-target
// fallback draw so the result does not depend on thread scheduling.
void update_projections(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLF& s,
                        std::size_t view, int iteration = 0);
void update_projections(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLFS& s,
                        std::size_t view, int iteration = 0);

void update_specific_latent_cslf(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLF& s,
                                 std::size_t view);
void update_consistent_latent_cslf(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLF& s);
void update_z_cslf(const FactorState& f, SubspaceStateCSLF& s);
void update_d_cslf(SubspaceStateCSLF& s, const SolverConfig& config);
void update_errors_cslf(const MultiViewDataset& data, const FactorState& f, SubspaceStateCSLF& s,
                        const SolverConfig& config);
void update_weights_cslf(SubspaceStateCSLF& s, const SolverConfig& config);
// Returns the three stop criteria measured on the residuals used for the step.
std::array<double, 3> update_multipliers_cslf(const MultiViewDataset& data, const FactorState& f,
                                              SubspaceStateCSLF& s, const SolverConfig& config);

void update_specific_latent_cslfs(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLFS& s,
                                  std::size_t view);
void update_consistent_latent_cslfs(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLFS& s);
void update_z_specific(const FactorState& f, SubspaceStateCSLFS& s, std::size_t view);
void update_z_consistent(const FactorState& f, SubspaceStateCSLFS& s);
void update_d_specific(SubspaceStateCSLFS& s, const SolverConfig& config, std::size_t view);
void update_d_consistent(SubspaceStateCSLFS& s, const SolverConfig& config);
void update_errors_cslfs(const MultiViewDataset& data, const FactorState& f, SubspaceStateCSLFS& s,
                         const SolverConfig& config);
void update_weights_cslfs(SubspaceStateCSLFS& s, const SolverConfig& config);
std::array<double, 5> update_multipliers_cslfs(const MultiViewDataset& data, const FactorState& f,
                                               SubspaceStateCSLFS& s, const SolverConfig& config);

// Shared closed forms.

// min_H 1/2||Y - P H||^2 + 1/2||H (I - Z) - G||^2 summed over `terms` pairs
// (P_t, Y_t), with G = E_block - Lam_block/mu. Solved as a Sylvester equation.
struct LatentTerm {
    const Matrix* projection;
    Matrix target;
};
[[nodiscard]] Matrix solve_latent(std::span<const LatentTerm> terms, const Matrix& z, const Matrix& lam_block,
                                  const Matrix& e_block, double mu);

// (I + H^T H)^{-1}(Lam_d/mu + H^T Lam_h/mu + D - H^T E + H^T H) with the diagonal zeroed.
[[nodiscard]] Matrix solve_self_expression(const Matrix& h, const Matrix& lam_h, const Matrix& lam_d,
                                           const Matrix& d, const Matrix& e, double mu);

} // namespace mvsc
