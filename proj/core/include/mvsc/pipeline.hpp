#pragma once

#include <optional>
#include <string_view>

#include "mvsc/data_io.hpp"

namespace mvsc {

enum class Algorithm { Cslf, Cslfs };

[[nodiscard]] std::string_view algorithm_name(Algorithm a);
[[nodiscard]] std::optional<Algorithm> parse_algorithm(std::string_view name);

struct PipelineOutput {
    ClusteringResult result;
    Matrix joint_latent;  // learned [H_s^1; ...; H_s^V; H_c]
};

// Fit, build the adjacency, cluster spectrally into `clusters` groups and score
// against the dataset labels when present. The k-means seed derives from
// config.seed, so one master seed controls every random choice.
[[nodiscard]] PipelineOutput run_pipeline(const MultiViewDataset& data, Algorithm algorithm, const SolverConfig& config,
                                          int clusters, const FitOptions& options = {});

[[nodiscard]] std::uint64_t clustering_seed(std::uint64_t master_seed);

} // namespace mvsc
