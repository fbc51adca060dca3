#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lagrangian.hpp"

// Block-coordinate checks: each closed-form update must not raise the
// augmented Lagrangian (descent), and where the update is an exact minimizer
// over its block, small feasible perturbations of the result must not lower
// it (optimality).
namespace mvsc::testing {

struct DescentOutcome {
    std::string update;
    int states = 0;
    int descent_failures = 0;
    int optimality_failures = 0;
    double worst_increase = 0.0;  // max (L_after - L_before) / max(1, |L_before|)
};

inline constexpr double kDescentSlack = 1e-10;
inline constexpr double kPerturbation = 1e-3;
inline constexpr int kPerturbationsPerState = 4;

namespace detail {

template <class F, class S>
struct Update {
    std::string name;
    std::function<void(const MultiViewDataset&, F&, S&, const SolverConfig&, std::size_t view)> apply;
    bool per_view = false;
    // Perturbs the updated block in place; empty when the update is not an
    // exact block minimizer.
    std::function<void(const MultiViewDataset&, F&, S&, std::size_t view, std::mt19937_64&)> perturb;
};

template <class F, class S, class Make, class Eval>
std::vector<DescentOutcome> run_updates(const std::vector<Update<F, S>>& updates, int states, std::uint64_t seed,
                                        Make make_state, Eval eval) {
    std::vector<DescentOutcome> out;
    std::mt19937_64 rng(seed);
    for (const auto& u : updates) {
        DescentOutcome o{u.name, 0, 0, 0, -std::numeric_limits<double>::infinity()};
        for (int k = 0; k < states; ++k) {
            const SmallProblem p = random_problem(rng);
            auto [f, s] = make_state(p, rng);
            const std::size_t view =
                u.per_view ? std::uniform_int_distribution<std::size_t>(0, p.data.views.size() - 1)(rng) : 0;
            const double before = eval(p.data, f, s, p.config);
            u.apply(p.data, f, s, p.config, view);
            const double after = eval(p.data, f, s, p.config);
            const double scale = std::max(1.0, std::abs(before));
            o.worst_increase = std::max(o.worst_increase, (after - before) / scale);
            if (!(after <= before + kDescentSlack * scale)) ++o.descent_failures;
            if (u.perturb) {
                for (int t = 0; t < kPerturbationsPerState; ++t) {
                    F f2 = f;
                    S s2 = s;
                    u.perturb(p.data, f2, s2, view, rng);
                    if (eval(p.data, f2, s2, p.config) < after - kDescentSlack * std::max(1.0, std::abs(after))) {
                        ++o.optimality_failures;
                        break;
                    }
                }
            }
            ++o.states;
        }
        out.push_back(o);
    }
    return out;
}

inline void nudge(Matrix& m, std::mt19937_64& rng) { m += kPerturbation * gaussian(m.rows(), m.cols(), rng); }

} // namespace detail

// update_projections refreshes P_s then P_c; P_s is only optimal against the
// P_c it was computed with, so restore that one before checking it.
template <class S>
void update_p_s_only(const MultiViewDataset& d, FactorState& f, const S& s, std::size_t v) {
    const Matrix p_c = f.p_c[v];
    update_projections(d, f, s, v, 1);
    f.p_c[v] = p_c;
}

inline std::vector<DescentOutcome> cslf_descent_suite(int states, std::uint64_t seed) {
    using F = FactorState;
    using S = SubspaceStateCSLF;
    using detail::nudge;
    std::vector<detail::Update<F, S>> updates{
        {"projection P_s (cslf)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t v) { update_p_s_only(d, f, s, v); },
         true,
         [](const MultiViewDataset&, F& f, S&, std::size_t v, std::mt19937_64& rng) {
             f.p_s[v] = stiefel_perturb(f.p_s[v], kPerturbation, rng);
         }},
        {"projection P_c (cslf)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t v) { update_projections(d, f, s, v, 1); },
         true,
         [](const MultiViewDataset&, F& f, S&, std::size_t v, std::mt19937_64& rng) {
             f.p_c[v] = stiefel_perturb(f.p_c[v], kPerturbation, rng);
         }},
        {"specific latent H_s (cslf)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t v) {
             update_specific_latent_cslf(d, f, s, v);
         },
         true, [](const MultiViewDataset&, F& f, S&, std::size_t v, std::mt19937_64& rng) { nudge(f.h_s[v], rng); }},
        {"consistent latent H_c (cslf)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t) {
             update_consistent_latent_cslf(d, f, s);
         },
         false, [](const MultiViewDataset&, F& f, S&, std::size_t, std::mt19937_64& rng) { nudge(f.h_c, rng); }},
        {"self-expression Z (cslf)",
         [](const MultiViewDataset&, F& f, S& s, const SolverConfig&, std::size_t) { update_z_cslf(f, s); }, false,
         {}},
        {"auxiliary D (cslf)",
         [](const MultiViewDataset&, F&, S& s, const SolverConfig& c, std::size_t) { update_d_cslf(s, c); }, false,
         [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) { nudge(s.d, rng); }},
        {"errors E_r (cslf)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig& c, std::size_t) { update_errors_cslf(d, f, s, c); },
         true, [](const MultiViewDataset&, F&, S& s, std::size_t v, std::mt19937_64& rng) { nudge(s.e_r[v], rng); }},
        {"errors E_s (cslf)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig& c, std::size_t) { update_errors_cslf(d, f, s, c); },
         false, [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) { nudge(s.e_s, rng); }},
        {"weights pi (cslf)",
         [](const MultiViewDataset&, F&, S& s, const SolverConfig& c, std::size_t) { update_weights_cslf(s, c); }, false,
         [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) {
             s.pi = simplex_perturb(s.pi, kPerturbation, rng);
         }},
    };
    return detail::run_updates(updates, states, seed, random_cslf_state,
                               [](const MultiViewDataset& d, const F& f, const S& s, const SolverConfig& c) {
                                   return lagrangian_cslf(d, f, s, c);
                               });
}

inline std::vector<DescentOutcome> cslfs_descent_suite(int states, std::uint64_t seed) {
    using F = FactorState;
    using S = SubspaceStateCSLFS;
    using detail::nudge;
    std::vector<detail::Update<F, S>> updates{
        {"projection P_s (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t v) { update_p_s_only(d, f, s, v); },
         true,
         [](const MultiViewDataset&, F& f, S&, std::size_t v, std::mt19937_64& rng) {
             f.p_s[v] = stiefel_perturb(f.p_s[v], kPerturbation, rng);
         }},
        {"projection P_c (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t v) { update_projections(d, f, s, v, 1); },
         true,
         [](const MultiViewDataset&, F& f, S&, std::size_t v, std::mt19937_64& rng) {
             f.p_c[v] = stiefel_perturb(f.p_c[v], kPerturbation, rng);
         }},
        {"specific latent H_s (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t v) {
             update_specific_latent_cslfs(d, f, s, v);
         },
         true, [](const MultiViewDataset&, F& f, S&, std::size_t v, std::mt19937_64& rng) { nudge(f.h_s[v], rng); }},
        {"consistent latent H_c (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig&, std::size_t) {
             update_consistent_latent_cslfs(d, f, s);
         },
         false, [](const MultiViewDataset&, F& f, S&, std::size_t, std::mt19937_64& rng) { nudge(f.h_c, rng); }},
        {"self-expression Z^v (cslfs)",
         [](const MultiViewDataset&, F& f, S& s, const SolverConfig&, std::size_t v) { update_z_specific(f, s, v); },
         true, {}},
        {"self-expression Z_c (cslfs)",
         [](const MultiViewDataset&, F& f, S& s, const SolverConfig&, std::size_t) { update_z_consistent(f, s); },
         false, {}},
        {"auxiliary D^v (cslfs)",
         [](const MultiViewDataset&, F&, S& s, const SolverConfig& c, std::size_t v) { update_d_specific(s, c, v); },
         true, [](const MultiViewDataset&, F&, S& s, std::size_t v, std::mt19937_64& rng) { nudge(s.d_v[v], rng); }},
        {"auxiliary D_c (cslfs)",
         [](const MultiViewDataset&, F&, S& s, const SolverConfig& c, std::size_t) { update_d_consistent(s, c); },
         false, [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) { nudge(s.d_c, rng); }},
        {"errors E_r (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig& c, std::size_t) {
             update_errors_cslfs(d, f, s, c);
         },
         true, [](const MultiViewDataset&, F&, S& s, std::size_t v, std::mt19937_64& rng) { nudge(s.e_r[v], rng); }},
        {"errors E_s^v (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig& c, std::size_t) {
             update_errors_cslfs(d, f, s, c);
         },
         true, [](const MultiViewDataset&, F&, S& s, std::size_t v, std::mt19937_64& rng) { nudge(s.e_s_v[v], rng); }},
        {"errors E_s^c (cslfs)",
         [](const MultiViewDataset& d, F& f, S& s, const SolverConfig& c, std::size_t) {
             update_errors_cslfs(d, f, s, c);
         },
         false, [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) { nudge(s.e_s_c, rng); }},
        {"weights pi1 (cslfs)",
         [](const MultiViewDataset&, F&, S& s, const SolverConfig& c, std::size_t) { update_weights_cslfs(s, c); },
         false,
         [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) {
             s.pi1 = simplex_perturb(s.pi1, kPerturbation, rng);
         }},
        {"weights pi2 (cslfs)",
         [](const MultiViewDataset&, F&, S& s, const SolverConfig& c, std::size_t) { update_weights_cslfs(s, c); },
         false,
         [](const MultiViewDataset&, F&, S& s, std::size_t, std::mt19937_64& rng) {
             s.pi2 = simplex_perturb(s.pi2, kPerturbation, rng);
         }},
    };
    return detail::run_updates(updates, states, seed, random_cslfs_state,
                               [](const MultiViewDataset& d, const F& f, const S& s, const SolverConfig& c) {
                                   return lagrangian_cslfs(d, f, s, c);
                               });
}

} // namespace mvsc::testing
