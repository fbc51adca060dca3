#include "mvsc/model.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace mvsc {

Eigen::Index MultiViewDataset::min_features() const {
    Eigen::Index m = std::numeric_limits<Eigen::Index>::max();
    for (const Matrix& x : views) m = std::min(m, x.rows());
    return views.empty() ? 0 : m;
}

void MultiViewDataset::validate() const {
    if (views.empty()) throw ShapeMismatch("dataset needs at least one view");
    const Eigen::Index n = views.front().cols();
    if (n < 1) throw ShapeMismatch("dataset needs at least one sample");
    for (std::size_t v = 0; v < views.size(); ++v) {
        if (views[v].rows() < 1) throw ShapeMismatch("view " + std::to_string(v) + " has no features");
        if (views[v].cols() != n)
            throw ShapeMismatch("view " + std::to_string(v) + " has " + std::to_string(views[v].cols()) +
                                " samples, expected " + std::to_string(n));
        if (!views[v].allFinite()) throw std::invalid_argument("view " + std::to_string(v) + " has non-finite entries");
    }
    if (!labels) return;
    if (static_cast<Eigen::Index>(labels->size()) != n) throw ShapeMismatch("label count differs from sample count");
    const int c = clusters.value_or(labels->empty() ? 0 : *std::max_element(labels->begin(), labels->end()) + 1);
    std::set<int> seen;
    for (int l : *labels) {
        if (l < 0 || l >= c) throw std::invalid_argument("label outside [0, C)");
        seen.insert(l);
    }
    if (static_cast<int>(seen.size()) != c) throw std::invalid_argument("some cluster index has no sample");
}

void SolverConfig::validate() const {
    if (k_s < 1 || k_c < 1) throw std::invalid_argument("latent dimensions must be >= 1");
    if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0) throw std::invalid_argument("lambdas must be nonnegative");
    if (!(lambda3 > 0)) throw std::invalid_argument("lambda3 must be positive for the weight update");
    if (!(mu0 > 0) || !(mu_max > 0) || mu0 > mu_max) throw std::invalid_argument("need 0 < mu0 <= mu_max");
    if (!(rho >= 1)) throw std::invalid_argument("rho must be >= 1");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
}

void SolverConfig::validate_against(const MultiViewDataset& data) const {
    validate();
    const Eigen::Index m = data.min_features();
    if (k_s > m || k_c > m)
        throw ShapeMismatch("K_s = " + std::to_string(k_s) + ", K_c = " + std::to_string(k_c) +
                            " exceed the smallest view dimension " + std::to_string(m));
}

FactorState initialize_factors(const MultiViewDataset& data, const SolverConfig& config) {
    data.validate();
    config.validate_against(data);
    const Eigen::Index n = data.samples();
    FactorState f;
    f.seed = config.seed;
    for (const Matrix& x : data.views) {
        f.p_s.push_back(Matrix::Zero(x.rows(), config.k_s));
        f.p_c.push_back(Matrix::Zero(x.rows(), config.k_c));
        f.h_s.push_back(Matrix::Zero(config.k_s, n));
    }
    f.h_c = Matrix::Zero(config.k_c, n);
    return f;
}

std::pair<FactorState, SubspaceStateCSLF> initialize_cslf(const MultiViewDataset& data, const SolverConfig& config) {
    FactorState f = initialize_factors(data, config);
    const Eigen::Index n = data.samples();
    const Eigen::Index joint_rows = config.k_s * static_cast<Eigen::Index>(data.view_count()) + config.k_c;
    SubspaceStateCSLF s;
    s.z = Matrix::Zero(n, n);
    s.d = Matrix::Zero(n, n);
    for (const Matrix& x : data.views) {
        s.e_r.push_back(Matrix::Zero(x.rows(), n));
        s.lam1.push_back(Matrix::Zero(x.rows(), n));
    }
    s.e_s = Matrix::Zero(joint_rows, n);
    s.lam2 = Matrix::Zero(joint_rows, n);
    s.lam3 = Matrix::Zero(n, n);
    s.pi = SimplexVector::uniform(static_cast<Eigen::Index>(data.view_count()));
    s.mu = config.mu0;
    return {std::move(f), std::move(s)};
}

std::pair<FactorState, SubspaceStateCSLFS> initialize_cslfs(const MultiViewDataset& data, const SolverConfig& config) {
    FactorState f = initialize_factors(data, config);
    const Eigen::Index n = data.samples();
    const auto views = static_cast<Eigen::Index>(data.view_count());
    SubspaceStateCSLFS s;
    for (const Matrix& x : data.views) {
        s.z_v.push_back(Matrix::Zero(n, n));
        s.d_v.push_back(Matrix::Zero(n, n));
        s.e_r.push_back(Matrix::Zero(x.rows(), n));
        s.e_s_v.push_back(Matrix::Zero(config.k_s, n));
        s.lam1.push_back(Matrix::Zero(x.rows(), n));
        s.lam2.push_back(Matrix::Zero(config.k_s, n));
        s.lam4.push_back(Matrix::Zero(n, n));
    }
    s.z_c = Matrix::Zero(n, n);
    s.d_c = Matrix::Zero(n, n);
    s.e_s_c = Matrix::Zero(config.k_c, n);
    s.lam3 = Matrix::Zero(config.k_c, n);
    s.lam5 = Matrix::Zero(n, n);
    s.pi1 = SimplexVector::uniform(views);
    s.pi2 = SimplexVector::uniform(views + 1);
    s.mu = config.mu0;
    return {std::move(f), std::move(s)};
}

Matrix joint_latent(const FactorState& state) {
    const Eigen::Index n = state.h_c.cols();
    Matrix h(state.k_s() * static_cast<Eigen::Index>(state.view_count()) + state.k_c(), n);
    for (std::size_t v = 0; v < state.view_count(); ++v) {
        const RowBlock b = specific_block(state, v);
        h.middleRows(b.offset, b.rows) = state.h_s[v];
    }
    const RowBlock b = consistent_block(state);
    h.middleRows(b.offset, b.rows) = state.h_c;
    return h;
}

RowBlock specific_block(const FactorState& state, std::size_t view) {
    return {static_cast<Eigen::Index>(view) * state.k_s(), state.k_s()};
}

RowBlock consistent_block(const FactorState& state) {
    return {static_cast<Eigen::Index>(state.view_count()) * state.k_s(), state.k_c()};
}

} // namespace mvsc
