#include <algorithm>
#include <chrono>

#include "solver_internal.hpp"

namespace mvsc {

void update_specific_latent_cslf(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLF& s,
                                 std::size_t view) {
    const RowBlock block = specific_block(f, view);
    const LatentTerm term{&f.p_s[view], projection_target_specific(data, f, s.e_r[view], s.lam1[view], s.mu, view)};
    f.h_s[view] = solve_latent(std::span(&term, 1), s.z, s.lam2.middleRows(block.offset, block.rows),
                               s.e_s.middleRows(block.offset, block.rows), s.mu);
}

void update_consistent_latent_cslf(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLF& s) {
    const RowBlock block = consistent_block(f);
    std::vector<LatentTerm> terms;
    terms.reserve(data.view_count());
    for (std::size_t v = 0; v < data.view_count(); ++v)
        terms.push_back({&f.p_c[v], projection_target_consistent(data, f, s.e_r[v], s.lam1[v], s.mu, v)});
    f.h_c = solve_latent(terms, s.z, s.lam2.middleRows(block.offset, block.rows),
                         s.e_s.middleRows(block.offset, block.rows), s.mu);
}

void update_z_cslf(const FactorState& f, SubspaceStateCSLF& s) {
    s.z = solve_self_expression(joint_latent(f), s.lam2, s.lam3, s.d, s.e_s, s.mu);
}

void update_d_cslf(SubspaceStateCSLF& s, const SolverConfig& config) {
    s.d = (s.mu * s.z - s.lam3) / (config.lambda2 + s.mu);
}

void update_errors_cslf(const MultiViewDataset& data, const FactorState& f, SubspaceStateCSLF& s,
                        const SolverConfig& config) {
    for (std::size_t v = 0; v < data.view_count(); ++v) {
        const Matrix g = s.lam1[v] / s.mu + data.views[v] - f.p_s[v] * f.h_s[v] - f.p_c[v] * f.h_c;
        s.e_r[v] = prox_l21_columns(g, s.pi[static_cast<Eigen::Index>(v)] / s.mu);
    }
    const Matrix h = joint_latent(f);
    s.e_s = prox_l21_columns(s.lam2 / s.mu + h - h * s.z, config.lambda1 / s.mu);
}

void update_weights_cslf(SubspaceStateCSLF& s, const SolverConfig& config) {
    std::vector<double> costs;
    costs.reserve(s.e_r.size());
    for (const Matrix& e : s.e_r) costs.push_back(l21_norm(e));
    s.pi = project_weights(costs, config.lambda3);
}

std::array<double, 3> update_multipliers_cslf(const MultiViewDataset& data, const FactorState& f,
                                              SubspaceStateCSLF& s, const SolverConfig& config) {
    std::vector<double> recovery;
    recovery.reserve(data.view_count());
    for (std::size_t v = 0; v < data.view_count(); ++v) {
        const Matrix r = detail::recovery_residual(data, f, s.e_r[v], v);
        s.lam1[v] += s.mu * r;
        recovery.push_back(max_abs(r));
    }
    const Matrix h = joint_latent(f);
    const Matrix r2 = h - h * s.z - s.e_s;
    s.lam2 += s.mu * r2;
    const Matrix r3 = s.d - s.z;
    s.lam3 += s.mu * r3;
    s.mu = std::min(config.rho * s.mu, config.mu_max);
    return {detail::mean(recovery), max_abs(r2), max_abs(r3)};
}

CslfFit fit_cslf(const MultiViewDataset& data, const SolverConfig& config, const FitOptions& options) {
    auto [factors, subspace] = initialize_cslf(data, config);
    CslfFit result{std::move(factors), std::move(subspace), {}, false, 0};
    result.trace.names = cslf_criterion_names();
    FactorState& f = result.factors;
    SubspaceStateCSLF& s = result.subspace;
    const std::size_t views = data.view_count();
    const auto start = std::chrono::steady_clock::now();

    for (int it = 1; it <= config.max_iters; ++it) {
        const double mu = s.mu;
        try {
            detail::for_each_view(views, options.threads, [&](std::size_t v) { update_projections(data, f, s, v, it); });
            detail::for_each_view(views, options.threads,
                                  [&](std::size_t v) { update_specific_latent_cslf(data, f, s, v); });
            update_consistent_latent_cslf(data, f, s);
        } catch (const SingularPencil&) {
            throw Diverged(it, "latent factors (singular Sylvester pencil)");
        }
        update_z_cslf(f, s);
        update_d_cslf(s, config);
        update_errors_cslf(data, f, s, config);
        update_weights_cslf(s, config);
        const std::array<double, 3> criteria = update_multipliers_cslf(data, f, s, config);

        detail::check_bounded(f.h_s, "h_s", it);
        detail::check_bounded(f.h_c, "h_c", it);
        detail::check_bounded(s.z, "z", it);
        detail::check_bounded(s.d, "d", it);
        detail::check_bounded(s.e_r, "e_r", it);
        detail::check_bounded(s.e_s, "e_s", it);
        detail::check_bounded(s.lam1, "lam1", it);
        detail::check_bounded(s.lam2, "lam2", it);
        detail::check_bounded(s.lam3, "lam3", it);

        TraceRecord record{it, {criteria.begin(), criteria.end()}, mu, 0.0};
        if (options.record_wall_time)
            record.elapsed_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        result.trace.records.push_back(std::move(record));
        result.iterations = it;

        if (std::ranges::all_of(criteria, [&](double c) { return c < config.epsilon; })) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace mvsc
