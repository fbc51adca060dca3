#include <random>
#include <string>

#include "mvsc/data_io.hpp"

namespace mvsc {

void SyntheticSpec::validate() const {
    auto fail = [](const std::string& why) { throw SpecInvalid("synthetic spec: " + why); };
    if (views < 1) fail("need at least one view");
    if (clusters < 1) fail("need at least one cluster");
    if (samples < clusters) fail("need N >= C");
    if (static_cast<int>(dims.size()) != views) fail("need one observation dimension per view");
    if (intrinsic_dim < 1) fail("intrinsic dimension must be >= 1");
    if (intrinsic_dim > k_s || intrinsic_dim > k_c) fail("intrinsic dimension exceeds a latent dimension");
    for (Eigen::Index m : dims)
        if (m < k_s || m < k_c) fail("every view dimension must be >= k_s and k_c");
    if (!(sigma >= 0.0)) fail("sigma must be >= 0");
}

MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;
    const Eigen::Index n = spec.samples;
    const Eigen::Index d = spec.intrinsic_dim;

    Labels labels(static_cast<std::size_t>(n));
    const Eigen::Index block = n / spec.clusters;
    for (Eigen::Index i = 0; i < n; ++i)
        labels[static_cast<std::size_t>(i)] =
            i < block * spec.clusters ? static_cast<int>(i / block) : static_cast<int>((i - block * spec.clusters) % spec.clusters);

    auto cluster_factor = [&](Eigen::Index latent_dim) {
        std::vector<Matrix> bases;
        for (int c = 0; c < spec.clusters; ++c) bases.push_back(random_orthonormal(latent_dim, d, rng));
        Matrix h(latent_dim, n);
        Vector coords(d);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < d; ++k) coords(k) = normal(rng);
            h.col(i) = bases[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] * coords;
        }
        return h;
    };

    const Matrix h_c = cluster_factor(spec.k_c);
    MultiViewDataset data;
    for (int v = 0; v < spec.views; ++v) {
        const Eigen::Index m = spec.dims[static_cast<std::size_t>(v)];
        const Matrix h_s = cluster_factor(spec.k_s);
        const Matrix p_s = random_orthonormal(m, spec.k_s, rng);
        const Matrix p_c = random_orthonormal(m, spec.k_c, rng);
        Matrix x = p_s * h_s + p_c * h_c;
        const double scale = spec.sigma * x.norm() / std::sqrt(static_cast<double>(x.size()));
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) += scale * normal(rng);
        data.views.push_back(std::move(x));
    }
    data.labels = std::move(labels);
    data.clusters = spec.clusters;
    return data;
}

} // namespace mvsc
