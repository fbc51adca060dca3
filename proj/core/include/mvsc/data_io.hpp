#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvsc/metrics.hpp"
#include "mvsc/model.hpp"
#include "mvsc/solvers.hpp"
#include "mvsc/spectral.hpp"

namespace mvsc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LabelMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpecInvalid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Orientation { FeaturesBySamples, SamplesByFeatures };

struct ViewEntry {
    std::filesystem::path path;
    std::optional<Eigen::Index> features;  // expected M^v
};

// JSON on disk:
// { "name": "...", "orientation": "features_by_samples" | "samples_by_features",
//   "views": [ {"path": "x1.csv", "features": 3}, ... ],
//   "labels": "labels.txt", "clusters": 3 }
// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
    std::string name;
    std::vector<ViewEntry> views;
    std::optional<std::filesystem::path> labels;
    std::optional<int> clusters;
    Orientation orientation = Orientation::FeaturesBySamples;
};

[[nodiscard]] DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
[[nodiscard]] MultiViewDataset load_dataset(const DatasetManifest& manifest);
[[nodiscard]] MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

// Comma-separated, one matrix row per line, 17 significant digits.
[[nodiscard]] Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

// One label per line. Raw tokens are kept as text.
[[nodiscard]] std::vector<std::string> read_label_tokens(const std::filesystem::path& path);
[[nodiscard]] Labels read_labels(const std::filesystem::path& path);
void write_labels(std::span<const int> labels, const std::filesystem::path& path);

// 0-based ids in sorted token order; numeric when every token is an integer,
// lexicographic otherwise.
[[nodiscard]] Labels remap_labels(const std::vector<std::string>& tokens, int* clusters = nullptr);

// Per feature (row): zero mean, unit variance; constant rows are only centered.
void standardize_features(MultiViewDataset& data);
// Per sample (column): unit Euclidean norm; zero columns are left alone.
void unit_norm_samples(MultiViewDataset& data);

struct SyntheticSpec {
    int views = 3;
    int clusters = 3;
    Eigen::Index samples = 150;
    Eigen::Index k_s = 10;
    Eigen::Index k_c = 10;
    Eigen::Index intrinsic_dim = 3;
    std::vector<Eigen::Index> dims{60, 50, 40};
    double sigma = 0.0;
    std::uint64_t seed = 7;

    void validate() const;
};

// Cluster i owns a d-dimensional subspace of the consistent latent space and
// of each view's specific latent space; samples draw N(0, I_d) coordinates in
// them. X^v = P_s^v H_s^v + P_c^v H_c + noise with random orthonormal P, and
// entrywise Gaussian noise of deviation sigma * ||signal||_F / sqrt(M^v N).
// Labels come in contiguous blocks.
[[nodiscard]] MultiViewDataset generate_synthetic(const SyntheticSpec& spec);

// Writes manifest.json, view_<v>.csv (1-based v) and labels.txt into dir.
void write_dataset(const MultiViewDataset& data, const std::filesystem::path& dir, const std::string& name);

struct Preprocessing {
    bool standardize = false;
    bool unit_norm = false;
};

struct ClusteringResult {
    std::string algorithm;
    bool converged = false;
    int iterations = 0;
    int clusters = 0;
    Preprocessing preprocessing;
    ResidualTrace trace;
    std::optional<AdjacencyMatrix> adjacency;
    Labels labels;
    std::optional<MetricReport> metrics;
};

// Files written into dir:
//   metrics.csv   header + one row, columns from metrics_csv_header()
//   labels.txt    predicted labels
//   trace.csv     iteration, criteria..., mu, elapsed_ms
//   adjacency.csv N x N
void save_result(const ClusteringResult& result, const std::filesystem::path& dir);

[[nodiscard]] const std::vector<std::string>& metrics_csv_header();

// name -> text, from a two-line header/row CSV.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> read_metrics_row(const std::filesystem::path& path);
[[nodiscard]] ResidualTrace read_trace(const std::filesystem::path& path);

} // namespace mvsc
