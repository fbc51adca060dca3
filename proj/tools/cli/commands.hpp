#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvsc/mvsc.hpp"

namespace mvsc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

// Entry point shared by the executable and the in-process tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

enum class SelectionMetric { Acc, Nmi, Ari };

struct GridSpec {
    std::vector<Eigen::Index> k_s{10, 50, 100, 150, 200, 250, 300, 350};
    std::vector<Eigen::Index> k_c{10, 50, 100, 150, 200, 250, 300, 350};
    std::vector<double> lambda1{0.01, 0.1, 1, 10, 100};
    std::vector<double> lambda2{0.01, 0.1, 1, 10, 100};
    std::vector<double> lambda3{0.1, 0.5, 1, 5, 10};
    int repeats = 1;
    SelectionMetric metric = SelectionMetric::Acc;

    void validate() const;
};

struct GridCell {
    int stage = 0;  // 1: (K_s, K_c), 2: (lambda1, lambda2), 3: lambda3
    SolverConfig config;
    int repeats = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population deviation over the repeats
    int diverged = 0;     // runs that diverged; each scores 0
};

struct GridOutcome {
    std::vector<GridCell> cells;  // in execution order
    SolverConfig winner;
    double winner_score = 0.0;
    int fits = 0;
    std::vector<std::string> warnings;
};

// Greedy three-stage search. `base` supplies the fixed hyperparameters of
// stage 1 and the remaining solver settings; repeat r uses seed base.seed + r.
// K values above the smallest view dimension are dropped with a warning.
[[nodiscard]] GridOutcome run_grid(const MultiViewDataset& data, Algorithm algorithm, const SolverConfig& base,
                                   const GridSpec& grid, int clusters, const FitOptions& options = {});

void write_grid_csv(const GridOutcome& outcome, const std::string& metric_name, const std::filesystem::path& path);
void write_winner_csv(const GridOutcome& outcome, const std::string& metric_name, const std::filesystem::path& path);

} // namespace mvsc::cli
