#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mvsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numerical tolerances shared by the kernels and the solvers. The defaults are
// what every solver call uses; tests and callers may pass their own.
struct Tolerances {
    double orthogonality = 1e-10;
    double sylvester_residual = 1e-8;
    double simplex_sum = 1e-12;
    double zero_target = 1e-14;
    double singular_pencil = 1e-12;
    double identity_detect = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

struct ZeroTarget : std::runtime_error {
    ZeroTarget() : std::runtime_error("procrustes target is numerically zero") {}
};

struct SingularPencil : std::runtime_error {
    explicit SingularPencil(double gap)
        : std::runtime_error("sylvester pencil is singular"), min_gap(gap) {}
    double min_gap;
};

// Nonnegative weights summing to one.
class SimplexVector {
public:
    SimplexVector() = default;
    explicit SimplexVector(Vector weights, double tol = kDefaultTolerances.simplex_sum);

    static SimplexVector uniform(Eigen::Index n);

    [[nodiscard]] const Vector& weights() const noexcept { return weights_; }
    [[nodiscard]] double operator[](Eigen::Index i) const { return weights_(i); }
    [[nodiscard]] Eigen::Index size() const noexcept { return weights_.size(); }

private:
    Vector weights_;
};

// Thin SVD, singular values non-increasing, each left singular vector flipped so
// that its largest-magnitude entry is nonnegative (matching flip on the right).
struct ThinSvd {
    Matrix u;
    Vector sigma;
    Matrix v;
};
[[nodiscard]] ThinSvd thin_svd(const Matrix& m);

// X = U V^T for the thin SVD of target (K x M, K <= M). X has orthonormal rows
// and minimizes ||Y - W X||_F when target = W^T Y.
[[nodiscard]] Matrix orthogonal_procrustes(const Matrix& target,
                                           const Tolerances& tol = kDefaultTolerances);

// Solves a H + H b = c for symmetric PSD a (K x K) and b (N x N).
// When a = s I the system collapses to one SPD solve H (s I + b) = c.
[[nodiscard]] Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c,
                                     const Tolerances& tol = kDefaultTolerances);

// General path used when a is not a multiple of the identity: Bartels-Stewart
// on the Schur forms of a and b, which are diagonal for symmetric inputs.
[[nodiscard]] Matrix solve_sylvester_schur(const Matrix& a, const Matrix& b, const Matrix& c,
                                           const Tolerances& tol = kDefaultTolerances);

// argmin_X tau ||X||_* + 1/2 ||X - m||_F^2
[[nodiscard]] Matrix singular_value_threshold(const Matrix& m, double tau);

// argmin_E tau ||E||_{2,1} + 1/2 ||E - g||_F^2, columns shrunk independently.
[[nodiscard]] Matrix prox_l21_columns(const Matrix& g, double tau);

// argmin_pi sum_i pi_i c_i + lambda/2 ||pi||^2 over the probability simplex.
[[nodiscard]] SimplexVector project_weights(std::span<const double> costs, double lambda);

// Euclidean projection of y onto the probability simplex.
[[nodiscard]] Vector project_simplex(const Vector& y);

[[nodiscard]] double l21_norm(const Matrix& m);
[[nodiscard]] double nuclear_norm(const Matrix& m);
[[nodiscard]] double max_abs(const Matrix& m);

// QR of a seeded Gaussian draw, columns sign-fixed by diag(R). rows >= cols.
[[nodiscard]] Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);
[[nodiscard]] Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

// Stable 64-bit mixing used to derive independent stream seeds.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                     std::uint64_t c = 0);

} // namespace mvsc
