#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mvsc/model.hpp"

namespace mvsc {

// Symmetric, nonnegative, zero diagonal.
class AdjacencyMatrix {
public:
    // Takes (|m| + |m^T|)/2 and zeroes the diagonal.
    static AdjacencyMatrix symmetrized(const Matrix& m);
    // Validates an already-symmetric nonnegative matrix; zeroes its diagonal.
    static AdjacencyMatrix from_matrix(Matrix a);

    [[nodiscard]] const Matrix& matrix() const noexcept { return a_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return a_.rows(); }

private:
    explicit AdjacencyMatrix(Matrix a) : a_(std::move(a)) {}
    Matrix a_;
};

[[nodiscard]] AdjacencyMatrix adjacency_cslf(const Matrix& z);
[[nodiscard]] AdjacencyMatrix adjacency_cslfs(std::span<const Matrix> z_v, const Matrix& z_c);

struct KMeansOptions {
    int restarts = 10;
    int max_iters = 300;
    double tolerance = 1e-9;
};

struct KMeansResult {
    Labels labels;
    Matrix centroids;  // k x dim
    double inertia = 0.0;
};

// k-means++ seeding followed by Lloyd iterations; points are rows. The restart
// with the lowest inertia wins, earlier restart on ties.
[[nodiscard]] KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

struct SpectralResult {
    Labels labels;
    // Samples whose adjacency row sums to zero. They embed at the origin and
    // are placed by nearest centroid.
    std::vector<Eigen::Index> isolated;
};

// Symmetric-normalized Laplacian embedding (top-c eigenvectors of
// D^{-1/2} A D^{-1/2}, rows normalized) followed by seeded k-means.
[[nodiscard]] SpectralResult spectral_cluster(const AdjacencyMatrix& a, int clusters, std::uint64_t seed,
                                              const KMeansOptions& options = {});

// Share of adjacency mass between samples of different clusters.
[[nodiscard]] double offblock_mass_ratio(const AdjacencyMatrix& a, std::span<const int> labels);

// Least-squares self-expression on unit-normalized columns:
// Z = argmin ||X - XZ||^2 + lambda ||Z||^2 with diag(Z) = 0, in closed form.
[[nodiscard]] Matrix least_squares_representation(const Matrix& x, double lambda);

} // namespace mvsc
