#pragma once

#include <exception>
#include <thread>
#include <vector>

#include "mvsc/solvers.hpp"

namespace mvsc::detail {

// Runs fn(v) for v in [0, views). With threads > 1 views are spread across
// workers; every fn(v) writes only view-v state, so results do not depend on
// scheduling. The exception from the lowest failing view is rethrown.
template <class Fn>
void for_each_view(std::size_t views, int threads, Fn&& fn) {
    if (threads <= 1 || views <= 1) {
        for (std::size_t v = 0; v < views; ++v) fn(v);
        return;
    }
    std::vector<std::exception_ptr> errors(views);
    const std::size_t workers = std::min<std::size_t>(views, static_cast<std::size_t>(threads));
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t v = w; v < views; v += workers) {
                    try {
                        fn(v);
                    } catch (...) {
                        errors[v] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_bounded(const Matrix& m, const char* name, int iteration);
void check_bounded(const std::vector<Matrix>& ms, const char* name, int iteration);

// Recovery residual X^v - P_s^v H_s^v - P_c^v H_c - E_r^v.
Matrix recovery_residual(const MultiViewDataset& data, const FactorState& f, const Matrix& e_r, std::size_t view);

double mean(const std::vector<double>& xs);

} // namespace mvsc::detail
