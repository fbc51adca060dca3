#include <algorithm>
#include <chrono>

#include "solver_internal.hpp"

namespace mvsc {

namespace {

Eigen::Index last_weight(const SubspaceStateCSLFS& s) { return s.pi2.size() - 1; }

} // namespace

void update_specific_latent_cslfs(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLFS& s,
                                  std::size_t view) {
    const LatentTerm term{&f.p_s[view], projection_target_specific(data, f, s.e_r[view], s.lam1[view], s.mu, view)};
    f.h_s[view] = solve_latent(std::span(&term, 1), s.z_v[view], s.lam2[view], s.e_s_v[view], s.mu);
}

void update_consistent_latent_cslfs(const MultiViewDataset& data, FactorState& f, const SubspaceStateCSLFS& s) {
    std::vector<LatentTerm> terms;
    terms.reserve(data.view_count());
    for (std::size_t v = 0; v < data.view_count(); ++v)
        terms.push_back({&f.p_c[v], projection_target_consistent(data, f, s.e_r[v], s.lam1[v], s.mu, v)});
    f.h_c = solve_latent(terms, s.z_c, s.lam3, s.e_s_c, s.mu);
}

void update_z_specific(const FactorState& f, SubspaceStateCSLFS& s, std::size_t view) {
    s.z_v[view] = solve_self_expression(f.h_s[view], s.lam2[view], s.lam4[view], s.d_v[view], s.e_s_v[view], s.mu);
}

void update_z_consistent(const FactorState& f, SubspaceStateCSLFS& s) {
    s.z_c = solve_self_expression(f.h_c, s.lam3, s.lam5, s.d_c, s.e_s_c, s.mu);
}

void update_d_specific(SubspaceStateCSLFS& s, const SolverConfig& config, std::size_t view) {
    const double weight = s.pi2[static_cast<Eigen::Index>(view)];
    s.d_v[view] = (s.mu * s.z_v[view] - s.lam4[view]) / (config.lambda2 * weight + s.mu);
}

void update_d_consistent(SubspaceStateCSLFS& s, const SolverConfig& config) {
    const double tau = config.lambda2 * s.pi2[last_weight(s)] / s.mu;
    s.d_c = singular_value_threshold(s.z_c - s.lam5 / s.mu, tau);
}

void update_errors_cslfs(const MultiViewDataset& data, const FactorState& f, SubspaceStateCSLFS& s,
                         const SolverConfig& config) {
    for (std::size_t v = 0; v < data.view_count(); ++v) {
        const auto iv = static_cast<Eigen::Index>(v);
        const Matrix g = s.lam1[v] / s.mu + data.views[v] - f.p_s[v] * f.h_s[v] - f.p_c[v] * f.h_c;
        s.e_r[v] = prox_l21_columns(g, s.pi1[iv] / s.mu);
    }
    for (std::size_t v = 0; v < data.view_count(); ++v) {
        const auto iv = static_cast<Eigen::Index>(v);
        const Matrix g = s.lam2[v] / s.mu + f.h_s[v] - f.h_s[v] * s.z_v[v];
        s.e_s_v[v] = prox_l21_columns(g, config.lambda1 * s.pi2[iv] / s.mu);
    }
    const Matrix g = s.lam3 / s.mu + f.h_c - f.h_c * s.z_c;
    s.e_s_c = prox_l21_columns(g, config.lambda1 * s.pi2[last_weight(s)] / s.mu);
}

void update_weights_cslfs(SubspaceStateCSLFS& s, const SolverConfig& config) {
    std::vector<double> recovery;
    recovery.reserve(s.e_r.size());
    for (const Matrix& e : s.e_r) recovery.push_back(l21_norm(e));
    s.pi1 = project_weights(recovery, config.lambda3);

    std::vector<double> self_expression;
    self_expression.reserve(s.e_s_v.size() + 1);
    for (std::size_t v = 0; v < s.e_s_v.size(); ++v)
        self_expression.push_back(config.lambda1 * l21_norm(s.e_s_v[v]) +
                                  0.5 * config.lambda2 * s.d_v[v].squaredNorm());
    self_expression.push_back(config.lambda1 * l21_norm(s.e_s_c) + config.lambda2 * nuclear_norm(s.d_c));
    s.pi2 = project_weights(self_expression, config.lambda3);
}

std::array<double, 5> update_multipliers_cslfs(const MultiViewDataset& data, const FactorState& f,
                                               SubspaceStateCSLFS& s, const SolverConfig& config) {
    std::vector<double> recovery, self_expression, auxiliary;
    for (std::size_t v = 0; v < data.view_count(); ++v) {
        const Matrix r1 = detail::recovery_residual(data, f, s.e_r[v], v);
        s.lam1[v] += s.mu * r1;
        recovery.push_back(max_abs(r1));

        const Matrix r2 = f.h_s[v] - f.h_s[v] * s.z_v[v] - s.e_s_v[v];
        s.lam2[v] += s.mu * r2;
        self_expression.push_back(max_abs(r2));

        const Matrix r4 = s.d_v[v] - s.z_v[v];
        s.lam4[v] += s.mu * r4;
        auxiliary.push_back(max_abs(r4));
    }
    const Matrix r3 = f.h_c - f.h_c * s.z_c - s.e_s_c;
    s.lam3 += s.mu * r3;
    const Matrix r5 = s.d_c - s.z_c;
    s.lam5 += s.mu * r5;
    s.mu = std::min(config.rho * s.mu, config.mu_max);
    return {detail::mean(recovery), detail::mean(self_expression), max_abs(r3), detail::mean(auxiliary),
            max_abs(r5)};
}

CslfsFit fit_cslfs(const MultiViewDataset& data, const SolverConfig& config, const FitOptions& options) {
    auto [factors, subspace] = initialize_cslfs(data, config);
    CslfsFit result{std::move(factors), std::move(subspace), {}, false, 0};
    result.trace.names = cslfs_criterion_names();
    FactorState& f = result.factors;
    SubspaceStateCSLFS& s = result.subspace;
    const std::size_t views = data.view_count();
    const auto start = std::chrono::steady_clock::now();

    for (int it = 1; it <= config.max_iters; ++it) {
        const double mu = s.mu;
        try {
            detail::for_each_view(views, options.threads, [&](std::size_t v) { update_projections(data, f, s, v, it); });
            detail::for_each_view(views, options.threads,
                                  [&](std::size_t v) { update_specific_latent_cslfs(data, f, s, v); });
            update_consistent_latent_cslfs(data, f, s);
        } catch (const SingularPencil&) {
            throw Diverged(it, "latent factors (singular Sylvester pencil)");
        }
        detail::for_each_view(views, options.threads, [&](std::size_t v) { update_z_specific(f, s, v); });
        update_z_consistent(f, s);
        for (std::size_t v = 0; v < views; ++v) update_d_specific(s, config, v);
        update_d_consistent(s, config);
        update_errors_cslfs(data, f, s, config);
        update_weights_cslfs(s, config);
        const std::array<double, 5> criteria = update_multipliers_cslfs(data, f, s, config);

        detail::check_bounded(f.h_s, "h_s", it);
        detail::check_bounded(f.h_c, "h_c", it);
        detail::check_bounded(s.z_v, "z_v", it);
        detail::check_bounded(s.z_c, "z_c", it);
        detail::check_bounded(s.d_v, "d_v", it);
        detail::check_bounded(s.d_c, "d_c", it);
        detail::check_bounded(s.e_r, "e_r", it);
        detail::check_bounded(s.e_s_v, "e_s_v", it);
        detail::check_bounded(s.e_s_c, "e_s_c", it);
        detail::check_bounded(s.lam1, "lam1", it);
        detail::check_bounded(s.lam2, "lam2", it);
        detail::check_bounded(s.lam3, "lam3", it);
        detail::check_bounded(s.lam4, "lam4", it);
        detail::check_bounded(s.lam5, "lam5", it);

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
