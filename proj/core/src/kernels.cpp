#include "mvsc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace mvsc {

SimplexVector::SimplexVector(Vector weights, double tol) : weights_(std::move(weights)) {
    if (weights_.size() == 0) throw std::invalid_argument("simplex vector must be non-empty");
    if ((weights_.array() < 0.0).any() || !weights_.allFinite())
        throw std::invalid_argument("simplex weights must be finite and nonnegative");
    if (std::abs(weights_.sum() - 1.0) > tol)
        throw std::invalid_argument("simplex weights must sum to one");
}

SimplexVector SimplexVector::uniform(Eigen::Index n) {
    return SimplexVector(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

namespace {

// Eigen 3.4.0's divide-and-conquer SVD occasionally returns NaN or a wrong
// factorization on rank-deficient inputs; Jacobi is slower but reliable.
bool factorization_ok(const Matrix& m, const Matrix& u, const Vector& sigma, const Matrix& v) {
    if (!u.allFinite() || !sigma.allFinite() || !v.allFinite()) return false;
    const double scale = std::max(1.0, m.norm());
    return (u * sigma.asDiagonal() * v.transpose() - m).norm() <= 1e-10 * scale;
}

} // namespace

ThinSvd thin_svd(const Matrix& m) {
    ThinSvd out;
    {
        const Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out = {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    if (!factorization_ok(m, out.u, out.sigma, out.v)) {
        const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out = {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    for (Eigen::Index j = 0; j < out.u.cols(); ++j) {
        Eigen::Index top = 0;
        out.u.col(j).cwiseAbs().maxCoeff(&top);
        if (out.u(top, j) < 0.0) {
            out.u.col(j) *= -1.0;
            out.v.col(j) *= -1.0;
        }
    }
    return out;
}

Matrix orthogonal_procrustes(const Matrix& target, const Tolerances& tol) {
    if (target.rows() > target.cols())
        throw std::invalid_argument("procrustes target must have rows <= cols");
    if (target.norm() < tol.zero_target) throw ZeroTarget();
    const ThinSvd svd = thin_svd(target);
    return svd.u * svd.v.transpose();
}

namespace {

bool is_scaled_identity(const Matrix& a, double tol, double& scale) {
    scale = a.diagonal().mean();
    const Matrix shifted = a - scale * Matrix::Identity(a.rows(), a.cols());
    return max_abs(shifted) <= tol;
}

} // namespace

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c, const Tolerances& tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != a.rows() || c.cols() != b.rows())
        throw std::invalid_argument("solve_sylvester: inconsistent shapes");

    double scale = 0.0;
    if (is_scaled_identity(a, tol.identity_detect, scale) && scale > tol.singular_pencil) {
        Matrix shifted = b;
        shifted.diagonal().array() += scale;
        const Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() == Eigen::Success) return llt.solve(c.transpose()).transpose();
    }
    return solve_sylvester_schur(a, b, c, tol);
}

Matrix solve_sylvester_schur(const Matrix& a, const Matrix& b, const Matrix& c, const Tolerances& tol) {
    // For symmetric inputs the real Schur form is the eigendecomposition, so the
    // triangular back-substitution of Bartels-Stewart becomes elementwise division.
    const Eigen::SelfAdjointEigenSolver<Matrix> ea(0.5 * (a + a.transpose()));
    const Eigen::SelfAdjointEigenSolver<Matrix> eb(0.5 * (b + b.transpose()));
    const Vector& da = ea.eigenvalues();
    const Vector& db = eb.eigenvalues();

    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < da.size(); ++i)
        for (Eigen::Index j = 0; j < db.size(); ++j) gap = std::min(gap, std::abs(da(i) + db(j)));
    if (gap < tol.singular_pencil) throw SingularPencil(gap);

    Matrix f = ea.eigenvectors().transpose() * c * eb.eigenvectors();
    for (Eigen::Index j = 0; j < f.cols(); ++j)
        for (Eigen::Index i = 0; i < f.rows(); ++i) f(i, j) /= da(i) + db(j);
    return ea.eigenvectors() * f * eb.eigenvectors().transpose();
}

Matrix singular_value_threshold(const Matrix& m, double tau) {
    if (tau < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    if (tau == 0.0) return m;
    const ThinSvd svd = thin_svd(m);
    const Vector shrunk = (svd.sigma.array() - tau).cwiseMax(0.0).matrix();
    return svd.u * shrunk.asDiagonal() * svd.v.transpose();
}

Matrix prox_l21_columns(const Matrix& g, double tau) {
    if (tau < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    Matrix out = Matrix::Zero(g.rows(), g.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        const double n = g.col(j).norm();
        if (n > tau) out.col(j) = ((n - tau) / n) * g.col(j);
    }
    return out;
}

Vector project_simplex(const Vector& y) {
    const Eigen::Index n = y.size();
    if (n == 0) return y;
    // the projection commutes with shifts; centring on the max keeps
    // large-magnitude inputs from cancelling against the threshold
    const double top = y.maxCoeff();
    const Vector shifted = y.array() - top;
    std::vector<double> sorted(shifted.data(), shifted.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    double cumulative = 0.0;
    double theta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cumulative += sorted[static_cast<std::size_t>(k)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) theta = candidate;
    }
    return (shifted.array() - theta).cwiseMax(0.0).matrix();
}

SimplexVector project_weights(std::span<const double> costs, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weight regularizer must be positive");
    if (costs.empty()) throw std::invalid_argument("weight costs must be non-empty");
    Vector y(static_cast<Eigen::Index>(costs.size()));
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (!std::isfinite(costs[i])) throw std::invalid_argument("weight costs must be finite");
        y(static_cast<Eigen::Index>(i)) = -costs[i] / lambda;
    }
    return SimplexVector(project_simplex(y));
}

double l21_norm(const Matrix& m) { return m.colwise().norm().sum(); }

double nuclear_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return thin_svd(m).sigma.sum();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_orthonormal(rows, cols, rng);
}

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    if (rows < cols) throw std::invalid_argument("random_orthonormal needs rows >= cols");
    std::normal_distribution<double> normal;
    Matrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < cols; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ a);
    h = splitmix(h ^ b);
    return splitmix(h ^ c);
}

} // namespace mvsc
