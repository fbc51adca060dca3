#include <charconv>
#include <cmath>
#include <ostream>

#include "solver_internal.hpp"

namespace mvsc {

namespace {

void write_number(std::ostream& out, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.write(buf, res.ptr - buf);
}

Matrix fallback_projection(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, int iteration,
                           std::size_t view, std::uint64_t slot) {
    return random_orthonormal(rows, cols,
                              mix_seed(seed, static_cast<std::uint64_t>(iteration), view, slot));
}

template <class Subspace>
void update_projections_impl(const MultiViewDataset& data, FactorState& f, const Subspace& s, std::size_t view,
                             int iteration) {
    const Matrix& e_r = s.e_r[view];
    const Matrix& lam1 = s.lam1[view];
    const Eigen::Index m = data.views[view].rows();

    const Matrix y_s = projection_target_specific(data, f, e_r, lam1, s.mu, view);
    try {
        f.p_s[view] = orthogonal_procrustes(f.h_s[view] * y_s.transpose()).transpose();
    } catch (const ZeroTarget&) {
        f.p_s[view] = fallback_projection(m, f.k_s(), f.seed, iteration, view, 0);
    }

    const Matrix y_c = projection_target_consistent(data, f, e_r, lam1, s.mu, view);
    try {
        f.p_c[view] = orthogonal_procrustes(f.h_c * y_c.transpose()).transpose();
    } catch (const ZeroTarget&) {
        f.p_c[view] = fallback_projection(m, f.k_c(), f.seed, iteration, view, 1);
    }
}

} // namespace

const std::vector<std::string>& cslf_criterion_names() {
    static const std::vector<std::string> names{"recovery", "self_expression", "auxiliary"};
    return names;
}

const std::vector<std::string>& cslfs_criterion_names() {
    static const std::vector<std::string> names{"recovery", "self_expression_specific", "self_expression_consistent",
                                                "auxiliary_specific", "auxiliary_consistent"};
    return names;
}

void ResidualTrace::write_csv(std::ostream& out) const {
    out << "iteration";
    for (const std::string& n : names) out << ',' << n;
    out << ",mu,elapsed_ms\n";
    for (const TraceRecord& r : records) {
        out << r.iteration;
        for (double c : r.criteria) {
            out << ',';
            write_number(out, c);
        }
        out << ',';
        write_number(out, r.mu);
        out << ',';
        write_number(out, r.elapsed_ms);
        out << '\n';
    }
}

Matrix projection_target_specific(const MultiViewDataset& data, const FactorState& f, const Matrix& e_r,
                                  const Matrix& lam1, double mu, std::size_t view) {
    return lam1 / mu + data.views[view] - f.p_c[view] * f.h_c - e_r;
}

Matrix projection_target_consistent(const MultiViewDataset& data, const FactorState& f, const Matrix& e_r,
                                    const Matrix& lam1, double mu, std::size_t view) {
    return lam1 / mu + data.views[view] - f.p_s[view] * f.h_s[view] - e_r;
}

void update_projections(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLF& s, std::size_t view,
                        int iteration) {
    update_projections_impl(data, f, s, view, iteration);
}

void update_projections(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLFS& s, std::size_t view,
                        int iteration) {
    update_projections_impl(data, f, s, view, iteration);
}

Matrix solve_latent(std::span<const LatentTerm> terms, const Matrix& z, const Matrix& lam_block,
                    const Matrix& e_block, double mu) {
    const Eigen::Index n = z.rows();
    const Eigen::Index k = terms.front().projection->cols();
    const Matrix residual_map = Matrix::Identity(n, n) - z;

    Matrix a = Matrix::Zero(k, k);
    Matrix c = -(lam_block / mu - e_block) * residual_map.transpose();
    for (const LatentTerm& t : terms) {
        a.noalias() += t.projection->transpose() * *t.projection;
        c.noalias() += t.projection->transpose() * t.target;
    }
    const Matrix b = residual_map * residual_map.transpose();
    return solve_sylvester(a, b, c);
}

Matrix solve_self_expression(const Matrix& h, const Matrix& lam_h, const Matrix& lam_d, const Matrix& d,
                             const Matrix& e, double mu) {
    Matrix gram = h.transpose() * h;
    Matrix rhs = lam_d / mu + d + gram;
    rhs.noalias() += h.transpose() * (lam_h / mu - e);
    gram.diagonal().array() += 1.0;
    Matrix z = gram.llt().solve(rhs);
    z.diagonal().setZero();
    return z;
}

namespace detail {

void check_bounded(const Matrix& m, const char* name, int iteration) {
    if (!m.allFinite() || max_abs(m) > kDivergenceBound) throw Diverged(iteration, name);
}

void check_bounded(const std::vector<Matrix>& ms, const char* name, int iteration) {
    for (std::size_t v = 0; v < ms.size(); ++v)
        if (!ms[v].allFinite() || max_abs(ms[v]) > kDivergenceBound)
            throw Diverged(iteration, std::string(name) + "[" + std::to_string(v) + "]");
}

Matrix recovery_residual(const MultiViewDataset& data, const FactorState& f, const Matrix& e_r, std::size_t view) {
    return data.views[view] - f.p_s[view] * f.h_s[view] - f.p_c[view] * f.h_c - e_r;
}

double mean(const std::vector<double>& xs) {
    double total = 0.0;
    for (double x : xs) total += x;
    return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

} // namespace detail

} // namespace mvsc
