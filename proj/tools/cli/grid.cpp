#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cli/commands.hpp"
#include "mvsc/format.hpp"

namespace mvsc::cli {

void GridSpec::validate() const {
    if (k_s.empty() || k_c.empty() || lambda1.empty() || lambda2.empty() || lambda3.empty())
        throw std::invalid_argument("every grid axis needs at least one value");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
}

namespace {

double score_of(const MetricReport& r, SelectionMetric m) {
    switch (m) {
        case SelectionMetric::Nmi: return r.nmi;
        case SelectionMetric::Ari: return r.ari;
        case SelectionMetric::Acc: break;
    }
    return r.acc;
}

std::vector<Eigen::Index> admissible(const std::vector<Eigen::Index>& ks, Eigen::Index limit, const char* axis,
                                     std::vector<std::string>& warnings) {
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k : ks) {
        if (k >= 1 && k <= limit)
            kept.push_back(k);
        else
            warnings.push_back(std::string("dropping ") + axis + " = " + std::to_string(k) +
                               " (outside [1, " + std::to_string(limit) + "])");
    }
    if (kept.empty()) throw std::invalid_argument(std::string("no admissible ") + axis + " value remains");
    return kept;
}

class Search {
public:
    Search(const MultiViewDataset& data, Algorithm algorithm, const GridSpec& grid, int clusters,
           const FitOptions& options, GridOutcome& outcome)
        : data_(data), algorithm_(algorithm), grid_(grid), clusters_(clusters), options_(options), outcome_(outcome) {}

    // Evaluates one cell and returns its mean score.
    double cell(int stage, const SolverConfig& config) {
        GridCell c;
        c.stage = stage;
        c.config = config;
        c.repeats = grid_.repeats;
        std::vector<double> scores;
        for (int r = 0; r < grid_.repeats; ++r) {
            SolverConfig run = config;
            run.seed = config.seed + static_cast<std::uint64_t>(r);
            ++outcome_.fits;
            try {
                const PipelineOutput out = run_pipeline(data_, algorithm_, run, clusters_, options_);
                scores.push_back(score_of(*out.result.metrics, grid_.metric));
            } catch (const Diverged&) {
                ++c.diverged;
                scores.push_back(0.0);
            }
        }
        double sum = 0.0;
        for (double s : scores) sum += s;
        c.mean = sum / static_cast<double>(scores.size());
        double var = 0.0;
        for (double s : scores) var += (s - c.mean) * (s - c.mean);
        c.stddev = std::sqrt(var / static_cast<double>(scores.size()));
        outcome_.cells.push_back(c);
        return c.mean;
    }

private:
    const MultiViewDataset& data_;
    Algorithm algorithm_;
    const GridSpec& grid_;
    int clusters_;
    const FitOptions& options_;
    GridOutcome& outcome_;
};

} // namespace

GridOutcome run_grid(const MultiViewDataset& data, Algorithm algorithm, const SolverConfig& base, const GridSpec& grid,
                     int clusters, const FitOptions& options) {
    grid.validate();
    if (!data.labels) throw std::invalid_argument("grid search needs ground-truth labels");
    GridOutcome outcome;
    const Eigen::Index limit = data.min_features();
    const std::vector<Eigen::Index> ks = admissible(grid.k_s, limit, "K_s", outcome.warnings);
    const std::vector<Eigen::Index> kc = admissible(grid.k_c, limit, "K_c", outcome.warnings);

    Search search(data, algorithm, grid, clusters, options, outcome);
    // Strict improvement keeps the first cell in grid order on ties.
    SolverConfig best = base;
    double best_score = -1.0;
    auto consider = [&](int stage, const SolverConfig& c) {
        const double s = search.cell(stage, c);
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    };

    for (Eigen::Index a : ks)
        for (Eigen::Index b : kc) {
            SolverConfig c = base;
            c.k_s = a;
            c.k_c = b;
            consider(1, c);
        }

    const SolverConfig stage1 = best;
    best_score = -1.0;
    for (double l1 : grid.lambda1)
        for (double l2 : grid.lambda2) {
            SolverConfig c = stage1;
            c.lambda1 = l1;
            c.lambda2 = l2;
            consider(2, c);
        }

    const SolverConfig stage2 = best;
    best_score = -1.0;
    for (double l3 : grid.lambda3) {
        SolverConfig c = stage2;
        c.lambda3 = l3;
        consider(3, c);
    }

    outcome.winner = best;
    outcome.winner_score = best_score;
    return outcome;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void write_config(std::ostream& out, const SolverConfig& c) {
    out << c.k_s << ',' << c.k_c << ',' << format_number(c.lambda1) << ',' << format_number(c.lambda2) << ','
        << format_number(c.lambda3);
}

} // namespace

void write_grid_csv(const GridOutcome& outcome, const std::string& metric_name, const std::filesystem::path& path) {
    std::ofstream out = open_csv(path);
    out << "stage,k_s,k_c,lambda1,lambda2,lambda3,repeats,mean_" << metric_name << ",std_" << metric_name
        << ",diverged\n";
    for (const GridCell& c : outcome.cells) {
        out << c.stage << ',';
        write_config(out, c.config);
        out << ',' << c.repeats << ',' << format_number(c.mean) << ',' << format_number(c.stddev) << ',' << c.diverged << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_winner_csv(const GridOutcome& outcome, const std::string& metric_name, const std::filesystem::path& path) {
    std::ofstream out = open_csv(path);
    out << "k_s,k_c,lambda1,lambda2,lambda3,mean_" << metric_name << '\n';
    write_config(out, outcome.winner);
    out << ',' << format_number(outcome.winner_score) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace mvsc::cli
