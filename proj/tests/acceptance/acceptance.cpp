// One PASS/FAIL/SKIP line per acceptance criterion; exit status 1 if any fails.
//
// Criterion 8 needs a user-supplied uci-digit manifest, passed as the first
// argument or through MVSC_UCI_DIGIT_MANIFEST.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mvsc/mvsc.hpp"
#include "support/descent.hpp"
#include "support/fixtures.hpp"
#include "support/lagrangian.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace mvsc;
using namespace mvsc::testing;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

class Clock {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

// 1 -------------------------------------------------------------------------

Outcome kernel_oracles() {
    Clock clock;
    std::mt19937_64 rng(2024);
    int bad = 0;

    double procrustes_gap = -1.0;
    for (int k = 0; k < 100; ++k) {
        const Matrix w = gaussian(2, 2, rng);
        const Matrix y = gaussian(2, 2, rng);
        const double ours = (y - w * orthogonal_procrustes(w.transpose() * y)).norm();
        const double gap = ours - procrustes_grid_objective(w, y);
        procrustes_gap = std::max(procrustes_gap, gap);
        if (gap > 1e-6) ++bad;
    }

    double sylvester_worst = 0.0;
    std::uniform_int_distribution<int> size(1, 12);
    for (int k = 0; k < 100; ++k) {
        const int m = size(rng), n = size(rng);
        const Matrix g = gaussian(m, m, rng), l = gaussian(n, n, rng);
        // even instances are nearly singular in a
        const double shift = k % 2 ? 2.0 : 1e-3;
        const Matrix a = g * g.transpose() + shift * Matrix::Identity(m, m);
        const Matrix b = l * l.transpose();
        const Matrix c = gaussian(m, n, rng);
        const Matrix h = solve_sylvester(a, b, c);
        const double res = (a * h + h * b - c).norm() / (1.0 + c.norm());
        sylvester_worst = std::max(sylvester_worst, res);
        if (!(res < 1e-8)) ++bad;
    }

    std::uniform_real_distribution<double> tau_d(0.05, 2.0);
    int prox_fail = 0;
    for (int k = 0; k < 100; ++k) {
        const Matrix m = gaussian(5, 6, rng);
        const double tau = tau_d(rng);
        const Matrix x = singular_value_threshold(m, tau);
        auto f = [&](const Matrix& z) { return tau * nuclear(z) + 0.5 * (z - m).squaredNorm(); };
        const double f0 = f(x);
        for (int t = 0; t < 20; ++t)
            if (f(x + 1e-3 * gaussian(5, 6, rng)) < f0 - 1e-12) {
                ++prox_fail;
                break;
            }
    }
    for (int k = 0; k < 100; ++k) {
        const Matrix g = gaussian(4, 7, rng);
        const double tau = tau_d(rng);
        const Matrix x = prox_l21_columns(g, tau);
        auto f = [&](const Matrix& z) { return tau * col_l21(z) + 0.5 * (z - g).squaredNorm(); };
        const double f0 = f(x);
        for (int t = 0; t < 20; ++t)
            if (f(x + 1e-3 * gaussian(4, 7, rng)) < f0 - 1e-12) {
                ++prox_fail;
                break;
            }
    }
    bad += prox_fail;

    double simplex_worst = 0.0;
    std::uniform_real_distribution<double> cost(0.0, 5.0), lam(0.1, 10.0);
    for (int k = 0; k < 50; ++k) {
        const std::vector<double> c{k == 0 ? 1.0 : cost(rng), k == 0 ? 2.0 : cost(rng)};
        const double l = k == 0 ? 4.0 : lam(rng);
        const SimplexVector p = project_weights(c, l);
        double best_t = 0.0, best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 10000; ++i) {
            const double t = i * 1e-4;
            const double v = t * c[0] + (1 - t) * c[1] + 0.5 * l * (t * t + (1 - t) * (1 - t));
            if (v < best) best = v, best_t = t;
        }
        const double err = std::max(std::abs(p[0] - best_t), std::abs(p[1] - (1 - best_t)));
        simplex_worst = std::max(simplex_worst, err);
        if (err > 1e-3) ++bad;
    }

    const double secs = clock.seconds();
    return verdict(bad == 0 && secs < 30.0,
                   "procrustes gap " + fmt(procrustes_gap) + ", sylvester residual " + fmt(sylvester_worst) +
                       ", prox failures " + std::to_string(prox_fail) + ", simplex error " + fmt(simplex_worst) +
                       ", " + fmt(secs, 3) + " s");
}

// 2 -------------------------------------------------------------------------

Outcome descent_suite() {
    Clock clock;
    std::vector<DescentOutcome> all = cslf_descent_suite(20, 7);
    const std::vector<DescentOutcome> more = cslfs_descent_suite(20, 8);
    all.insert(all.end(), more.begin(), more.end());
    int failures = 0;
    std::string failed;
    double worst = -std::numeric_limits<double>::infinity();
    for (const DescentOutcome& o : all) {
        failures += o.descent_failures + o.optimality_failures;
        worst = std::max(worst, o.worst_increase);
        if (o.descent_failures + o.optimality_failures > 0) failed += " [" + o.update + "]";
    }
    const double secs = clock.seconds();
    return verdict(failures == 0 && secs < 120.0,
                   std::to_string(all.size()) + " updates x 20 states, failures " + std::to_string(failures) + failed +
                       ", worst relative change " + fmt(worst) + ", " + fmt(secs, 3) + " s");
}

// 3, 4, 5, 7 share fits on the fixture --------------------------------------

struct FixtureRun {
    PipelineOutput out;
    std::vector<TraceRecord> records;
    double seconds = 0.0;
};

FixtureRun run_fixture(Algorithm a, double sigma, std::uint64_t seed) {
    Clock clock;
    const MultiViewDataset data = generate_synthetic(acceptance_spec(sigma));
    FixtureRun r{run_pipeline(data, a, acceptance_config(a, seed), 3), {}, 0.0};
    r.records = r.out.result.trace.records;
    r.seconds = clock.seconds();
    return r;
}

Outcome convergence(const std::vector<std::pair<std::string, const FixtureRun*>>& runs) {
    bool ok = true;
    std::string detail;
    double cslf_secs = 0.0, cslfs_secs = 0.0;
    for (const auto& [name, run] : runs) {
        const auto& recs = run->records;
        bool this_ok = !recs.empty() && recs.size() <= 200;
        double final_max = 0.0;
        if (!recs.empty()) {
            for (std::size_t i = 0; i < recs.back().criteria.size(); ++i) {
                final_max = std::max(final_max, recs.back().criteria[i]);
                if (!(recs.back().criteria[i] < 1e-6)) this_ok = false;
                if (!(recs.back().criteria[i] <= recs.front().criteria[i])) this_ok = false;
            }
        }
        this_ok = this_ok && run->out.result.converged;
        ok = ok && this_ok;
        (name.rfind("cslfs", 0) == 0 ? cslfs_secs : cslf_secs) += run->seconds;
        detail += name + ": " + (run->out.result.converged ? "converged" : "not converged") + " at " +
                  std::to_string(recs.size()) + " (max criterion " + fmt(final_max, 3) + "); ";
    }
    ok = ok && cslf_secs < 180.0 && cslfs_secs < 180.0;
    return verdict(ok, detail + "time cslf " + fmt(cslf_secs, 3) + " s, cslfs " + fmt(cslfs_secs, 3) + " s");
}

Outcome clustering(const std::vector<FixtureRun>& cslf, const std::vector<FixtureRun>& cslfs, double secs) {
    bool ok = secs < 300.0;
    std::string detail;
    for (std::size_t i = 0; i < kMasterSeeds.size(); ++i) {
        const MetricReport& a = *cslfs[i].out.result.metrics;
        const MetricReport& b = *cslf[i].out.result.metrics;
        ok = ok && a.acc >= 0.95 && a.nmi >= 0.90 && b.acc >= 0.90;
        detail += "seed " + std::to_string(kMasterSeeds[i]) + ": cslfs acc " + fmt(a.acc) + " nmi " + fmt(a.nmi) +
                  ", cslf acc " + fmt(b.acc) + "; ";
    }
    return verdict(ok, detail + fmt(secs, 3) + " s");
}

Outcome block_structure(const FixtureRun& cslf, const FixtureRun& cslfs, const Labels& truth) {
    const double a = offblock_mass_ratio(*cslf.out.result.adjacency, truth);
    const double b = offblock_mass_ratio(*cslfs.out.result.adjacency, truth);
    const bool converged = cslf.out.result.converged && cslfs.out.result.converged;
    return verdict(converged && a < 0.2 && b < 0.2, "off-block ratio cslf " + fmt(a) + ", cslfs " + fmt(b));
}

double lsr_accuracy(const Matrix& x, const Labels& truth, std::uint64_t seed) {
    const AdjacencyMatrix a = AdjacencyMatrix::symmetrized(least_squares_representation(x, kLsrLambda));
    return accuracy(spectral_cluster(a, 3, clustering_seed(seed)).labels, truth);
}

Outcome ablation(const FixtureRun& cslf, const FixtureRun& cslfs, std::uint64_t seed) {
    const MultiViewDataset data = generate_synthetic(acceptance_spec(0.05));
    const Labels& truth = *data.labels;
    const double latent_cslf = lsr_accuracy(cslf.out.joint_latent, truth, seed);
    const double latent_cslfs = lsr_accuracy(cslfs.out.joint_latent, truth, seed);
    double best_raw = 0.0;
    std::string raw;
    for (std::size_t v = 0; v < data.views.size(); ++v) {
        const double acc = lsr_accuracy(data.views[v], truth, seed);
        best_raw = std::max(best_raw, acc);
        raw += (v ? ", " : "") + fmt(acc);
    }
    return verdict(latent_cslf > best_raw && latent_cslfs > best_raw,
                   "latent acc cslf " + fmt(latent_cslf) + ", cslfs " + fmt(latent_cslfs) + " vs raw views " + raw);
}

// 6 -------------------------------------------------------------------------

Outcome metric_oracles() {
    std::mt19937_64 rng(99);
    int bad = 0;
    double nmi_gap = 0.0;
    std::uniform_int_distribution<int> c6(1, 6), n12(1, 12), c4(1, 4), n10(2, 10);
    for (int k = 0; k < 200; ++k) {
        const auto n = static_cast<std::size_t>(n12(rng));
        const auto p = random_labels(n, c6(rng), rng);
        const auto t = random_labels(n, c6(rng), rng);
        if (accuracy(p, t) != exhaustive_accuracy(p, t)) ++bad;
        const double gap = std::abs(nmi(p, t) - direct_nmi(p, t));
        nmi_gap = std::max(nmi_gap, gap);
        if (gap > 1e-12) ++bad;
    }
    for (int k = 0; k < 200; ++k) {
        const auto n = static_cast<std::size_t>(n10(rng));
        const auto p = random_labels(n, c4(rng), rng);
        const auto t = random_labels(n, c4(rng), rng);
        if (std::abs(ari(p, t) - pair_ari(p, t)) > 1e-12) ++bad;
        const PairCounts c = enumerate_pairs(p, t);
        const PrecisionRecall r = pairwise_prf(p, t);
        const double prec = c.tp + c.fp > 0 ? c.tp / (c.tp + c.fp) : 1.0;
        const double rec = c.tp + c.fn > 0 ? c.tp / (c.tp + c.fn) : 1.0;
        if (std::abs(r.precision - prec) > 1e-12 || std::abs(r.recall - rec) > 1e-12) ++bad;
    }
    return verdict(bad == 0, "mismatches " + std::to_string(bad) + " over 400 cases, max nmi gap " + fmt(nmi_gap));
}

// 8 -------------------------------------------------------------------------

Outcome uci_digit(const std::string& manifest) {
    if (manifest.empty()) return {Verdict::Skip, "no uci-digit manifest supplied (MVSC_UCI_DIGIT_MANIFEST)"};
    if (!fs::exists(manifest)) return {Verdict::Skip, "manifest " + manifest + " not found"};
    Clock clock;
    const MultiViewDataset data = load_dataset(fs::path(manifest));
    const int clusters = data.clusters.value_or(10);
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SolverConfig c;
        c.seed = seed;
        total += run_pipeline(data, Algorithm::Cslfs, c, clusters).result.metrics->acc;
    }
    const double mean = total / 10.0;
    constexpr double kReference = 0.917;
    return verdict(std::abs(mean - kReference) <= 0.05,
                   "mean acc " + fmt(mean) + " vs reference " + fmt(kReference) + ", " + fmt(clock.seconds(), 3) + " s");
}

// 9 -------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
#ifndef MVSC_TOOL_PATH
    return {Verdict::Skip, "mvsc executable not built"};
#else
    const fs::path root = fs::temp_directory_path() / "mvsc_acceptance_determinism";
    fs::remove_all(root);
    const std::string tool = MVSC_TOOL_PATH;
    // Each run works in its own directory through relative paths, so the two
    // runs should produce byte-identical trees, logs included.
    int mismatches = 0;
    int failures = 0;
    int compared = 0;
    std::string differing;
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = root / ("run" + std::to_string(run));
        fs::create_directories(dir);
        auto sh = [&](const std::string& args, const std::string& log) {
            const std::string cmd =
                "cd \"" + dir.string() + "\" && \"" + tool + "\" " + args + " > " + log + " 2>&1";
            if (std::system(cmd.c_str()) != 0) ++failures;
        };
        sh("synth --samples 60 --ks 4 --kc 4 --intrinsic-dim 1 --dims 12,12 --views 2 --sigma 0.05 --seed 4 --out data",
           "synth.log");
        for (const std::string alg : {"cslf", "cslfs"})
            sh("fit --algorithm " + alg + " --manifest data/manifest.json --ks 4 --kc 4 --max-iters 60 --threads 1 " +
                   "--seed 11 --out fit_" + alg,
               "fit_" + alg + ".log");
        sh("grid --manifest data/manifest.json --grid-ks 2,4 --grid-kc 4 --grid-l1 0.1,1 --grid-l2 1 --grid-l3 1 "
           "--repeats 2 --max-iters 20 --out grid",
           "grid.log");
        sh("eval --pred fit_cslfs/labels.txt --truth data/labels.txt", "eval.log");
    }
    const fs::path a = root / "run0";
    const fs::path b = root / "run1";
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), a);
        ++compared;
        if (!fs::exists(b / rel) || slurp(entry.path()) != slurp(b / rel)) {
            ++mismatches;
            differing += " " + rel.string();
        }
    }
    fs::remove_all(root);
    return verdict(failures == 0 && mismatches == 0 && compared > 10,
                   std::to_string(compared) + " files compared, " + std::to_string(mismatches) + " differ" + differing + ", " +
                       std::to_string(failures) + " commands failed");
#endif
}

} // namespace

int main(int argc, char** argv) {
    std::string uci = argc > 1 ? argv[1] : "";
    if (uci.empty())
        if (const char* env = std::getenv("MVSC_UCI_DIGIT_MANIFEST")) uci = env;

    int failed = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {Verdict::Fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
        if (o.verdict == Verdict::Fail) ++failed;
        std::cout << tag << " [" << id << "] " << name << ": " << o.detail << std::endl;
    };

    report(1, "kernel oracles", kernel_oracles);
    report(2, "sub-problem descent", descent_suite);

    std::vector<FixtureRun> clean_cslf, clean_cslfs;
    Clock clustering_clock;
    std::string fit_error;
    try {
        for (std::uint64_t seed : kMasterSeeds) {
            clean_cslf.push_back(run_fixture(Algorithm::Cslf, 0.0, seed));
            clean_cslfs.push_back(run_fixture(Algorithm::Cslfs, 0.0, seed));
        }
    } catch (const std::exception& e) {
        fit_error = e.what();
    }
    const double clustering_secs = clustering_clock.seconds();
    std::vector<FixtureRun> noisy;
    try {
        if (fit_error.empty()) {
            noisy.push_back(run_fixture(Algorithm::Cslf, 0.05, kMasterSeeds[0]));
            noisy.push_back(run_fixture(Algorithm::Cslfs, 0.05, kMasterSeeds[0]));
        }
    } catch (const std::exception& e) {
        fit_error = e.what();
    }
    auto need_fits = [&](const std::function<Outcome()>& f) -> std::function<Outcome()> {
        return [&, f] { return fit_error.empty() ? f() : Outcome{Verdict::Fail, "fixture fit failed: " + fit_error}; };
    };

    report(3, "convergence", need_fits([&] {
               return convergence({{"cslf sigma=0", &clean_cslf[0]},
                                   {"cslf sigma=0.05", &noisy[0]},
                                   {"cslfs sigma=0", &clean_cslfs[0]},
                                   {"cslfs sigma=0.05", &noisy[1]}});
           }));
    report(4, "end-to-end clustering", need_fits([&] { return clustering(clean_cslf, clean_cslfs, clustering_secs); }));
    report(5, "block-diagonal structure", need_fits([&] {
               return block_structure(clean_cslf[0], clean_cslfs[0], *generate_synthetic(acceptance_spec(0.0)).labels);
           }));
    report(6, "metric oracles", metric_oracles);
    report(7, "latent vs raw ablation", need_fits([&] { return ablation(noisy[0], noisy[1], kMasterSeeds[0]); }));
    report(8, "uci-digit (optional)", [&] { return uci_digit(uci); });
    report(9, "determinism", determinism);

    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
