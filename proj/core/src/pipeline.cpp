#include "mvsc/pipeline.hpp"

namespace mvsc {

std::string_view algorithm_name(Algorithm a) { return a == Algorithm::Cslf ? "cslf" : "cslfs"; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "cslf") return Algorithm::Cslf;
    if (name == "cslfs") return Algorithm::Cslfs;
    return std::nullopt;
}

std::uint64_t clustering_seed(std::uint64_t master_seed) { return mix_seed(master_seed, 0x5eed, 1); }

namespace {

template <class Fit>
void copy_fit_summary(const Fit& fit, ClusteringResult& out) {
    out.converged = fit.converged;
    out.iterations = fit.iterations;
    out.trace = fit.trace;
}

} // namespace

PipelineOutput run_pipeline(const MultiViewDataset& data, Algorithm algorithm, const SolverConfig& config,
                            int clusters, const FitOptions& options) {
    PipelineOutput out;
    out.result.algorithm = std::string(algorithm_name(algorithm));
    out.result.clusters = clusters;

    if (algorithm == Algorithm::Cslf) {
        const CslfFit fit = fit_cslf(data, config, options);
        copy_fit_summary(fit, out.result);
        out.result.adjacency = adjacency_cslf(fit.subspace.z);
        out.joint_latent = joint_latent(fit.factors);
    } else {
        const CslfsFit fit = fit_cslfs(data, config, options);
        copy_fit_summary(fit, out.result);
        out.result.adjacency = adjacency_cslfs(fit.subspace.z_v, fit.subspace.z_c);
        out.joint_latent = joint_latent(fit.factors);
    }

    out.result.labels = spectral_cluster(*out.result.adjacency, clusters, clustering_seed(config.seed)).labels;
    if (data.labels) out.result.metrics = evaluate(out.result.labels, *data.labels);
    return out;
}

} // namespace mvsc
