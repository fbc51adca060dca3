#include "mvsc/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mvsc {

AdjacencyMatrix AdjacencyMatrix::symmetrized(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("adjacency source must be square");
    const Matrix magnitude = m.cwiseAbs();
    Matrix a = 0.5 * (magnitude + magnitude.transpose());
    a.diagonal().setZero();
    return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix AdjacencyMatrix::from_matrix(Matrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("adjacency must be square");
    if (!a.allFinite() || (a.array() < 0.0).any()) throw std::invalid_argument("adjacency must be finite and nonnegative");
    if (a != a.transpose()) throw std::invalid_argument("adjacency must be exactly symmetric");
    a.diagonal().setZero();
    return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix adjacency_cslf(const Matrix& z) { return AdjacencyMatrix::symmetrized(z); }

AdjacencyMatrix adjacency_cslfs(std::span<const Matrix> z_v, const Matrix& z_c) {
    if (z_v.empty()) throw std::invalid_argument("need at least one view representation");
    Matrix specific = Matrix::Zero(z_c.rows(), z_c.cols());
    for (const Matrix& z : z_v) specific += AdjacencyMatrix::symmetrized(z).matrix();
    specific /= static_cast<double>(z_v.size());
    // Both halves are symmetric, so the sum stays exactly symmetric.
    Matrix a = 0.5 * (AdjacencyMatrix::symmetrized(z_c).matrix() + specific);
    return AdjacencyMatrix::from_matrix(std::move(a));
}

namespace {

double squared_distance(const Matrix& points, Eigen::Index i, const Matrix& centroids, Eigen::Index c) {
    return (points.row(i) - centroids.row(c)).squaredNorm();
}

Matrix plus_plus_seeding(const Matrix& points, int k, std::mt19937_64& rng) {
    const Eigen::Index n = points.rows();
    Matrix centroids(k, points.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centroids.row(0) = points.row(pick(rng));

    Vector nearest(n);
    for (Eigen::Index i = 0; i < n; ++i) nearest(i) = squared_distance(points, i, centroids, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int c = 1; c < k; ++c) {
        const double total = nearest.sum();
        Eigen::Index chosen = n - 1;
        if (total > 0.0) {
            double r = unit(rng) * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                r -= nearest(i);
                if (r < 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        centroids.row(c) = points.row(chosen);
        for (Eigen::Index i = 0; i < n; ++i) nearest(i) = std::min(nearest(i), squared_distance(points, i, centroids, c));
    }
    return centroids;
}

double assign(const Matrix& points, const Matrix& centroids, Labels& labels) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = squared_distance(points, i, centroids, c);
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
        inertia += best;
    }
    return inertia;
}

void recompute_centroids(const Matrix& points, const Labels& labels, Matrix& centroids) {
    const Eigen::Index k = centroids.rows();
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const int c = labels[static_cast<std::size_t>(i)];
        sums.row(c) += points.row(i);
        ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) {
            centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            continue;
        }
        // Empty cluster: move it onto the point worst served by its centroid.
        Eigen::Index far = 0;
        double worst = -1.0;
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            const double d = squared_distance(points, i, centroids, labels[static_cast<std::size_t>(i)]);
            if (d > worst) {
                worst = d;
                far = i;
            }
        }
        centroids.row(c) = points.row(far);
    }
}

} // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options) {
    if (k < 1 || k > points.rows()) throw std::invalid_argument("k-means needs 1 <= k <= number of points");
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(restart)));
        Matrix centroids = plus_plus_seeding(points, k, rng);
        Labels labels(static_cast<std::size_t>(points.rows()), 0);
        double inertia = assign(points, centroids, labels);
        for (int it = 0; it < options.max_iters; ++it) {
            recompute_centroids(points, labels, centroids);
            const double next = assign(points, centroids, labels);
            const bool settled = std::abs(inertia - next) <= options.tolerance;
            inertia = next;
            if (settled) break;
        }
        if (inertia < best.inertia) best = {std::move(labels), std::move(centroids), inertia};
    }
    return best;
}

SpectralResult spectral_cluster(const AdjacencyMatrix& a, int clusters, std::uint64_t seed,
                                const KMeansOptions& options) {
    const Eigen::Index n = a.size();
    if (clusters < 2 || clusters > n) throw std::invalid_argument("spectral clustering needs 2 <= c <= N");

    SpectralResult result;
    const Vector degree = a.matrix().rowwise().sum();
    Vector scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (degree(i) > 0.0) {
            scale(i) = 1.0 / std::sqrt(degree(i));
        } else {
            scale(i) = 0.0;
            result.isolated.push_back(i);
        }
    }
    const Matrix normalized = scale.asDiagonal() * a.matrix() * scale.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized);
    Matrix embedding = eig.eigenvectors().rightCols(clusters);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }
    result.labels = kmeans(embedding, clusters, seed, options).labels;
    return result;
}

double offblock_mass_ratio(const AdjacencyMatrix& a, std::span<const int> labels) {
    if (static_cast<Eigen::Index>(labels.size()) != a.size()) throw std::invalid_argument("label count differs from N");
    double cross = 0.0;
    double total = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            const double w = a.matrix()(i, j);
            total += w;
            if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) cross += w;
        }
    }
    return total > 0.0 ? cross / total : 0.0;
}

Matrix least_squares_representation(const Matrix& x, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("ridge parameter must be positive");
    Matrix unit = x;
    for (Eigen::Index j = 0; j < unit.cols(); ++j) {
        const double norm = unit.col(j).norm();
        if (norm > 0.0) unit.col(j) /= norm;
    }
    Matrix gram = unit.transpose() * unit;
    gram.diagonal().array() += lambda;
    const Matrix inverse = gram.llt().solve(Matrix::Identity(gram.rows(), gram.cols()));
    Matrix z = -inverse * inverse.diagonal().cwiseInverse().asDiagonal();
    z.diagonal().setZero();
    return z;
}

} // namespace mvsc
