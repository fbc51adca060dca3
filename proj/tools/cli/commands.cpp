#include "cli/commands.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mvsc/format.hpp"

namespace mvsc::cli {

namespace fs = std::filesystem;

namespace {

// A failure the user can fix by changing the invocation or its inputs.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFlags {
    SolverConfig config;
    int threads = 1;
    bool wall_time = false;

    void attach(CLI::App& app) {
        app.add_option("--ks", config.k_s, "view-specific latent dimension K_s")->capture_default_str();
        app.add_option("--kc", config.k_c, "consistent latent dimension K_c")->capture_default_str();
        app.add_option("--lambda1", config.lambda1)->capture_default_str();
        app.add_option("--lambda2", config.lambda2)->capture_default_str();
        app.add_option("--lambda3", config.lambda3)->capture_default_str();
        app.add_option("--mu0", config.mu0, "initial penalty")->capture_default_str();
        app.add_option("--mu-max", config.mu_max, "penalty cap")->capture_default_str();
        app.add_option("--rho", config.rho, "penalty growth factor")->capture_default_str();
        app.add_option("--eps", config.epsilon, "stopping tolerance")->capture_default_str();
        app.add_option("--max-iters", config.max_iters)->capture_default_str()->check(CLI::NonNegativeNumber);
        app.add_option("--seed", config.seed, "master seed")->capture_default_str();
        app.add_option("--threads", threads, "per-view worker threads")->capture_default_str()->check(CLI::PositiveNumber);
        app.add_flag("--wall-time", wall_time, "record elapsed_ms in trace.csv (output is then not reproducible)");
    }

    [[nodiscard]] FitOptions options() const { return {threads, wall_time}; }
};

struct DataFlags {
    std::string manifest;
    std::optional<int> clusters;
    Preprocessing prep;
    std::string algorithm = "cslfs";

    void attach(CLI::App& app) {
        app.add_option("--manifest", manifest, "dataset manifest (JSON)")->required()->check(CLI::ExistingFile);
        app.add_option("--algorithm", algorithm)->capture_default_str()->check(CLI::IsMember({"cslf", "cslfs"}));
        app.add_option("--clusters", clusters, "number of clusters C (default: from manifest or labels)")
            ->check(CLI::PositiveNumber);
        app.add_flag("--standardize", prep.standardize, "per-feature zero mean, unit variance");
        app.add_flag("--unit-norm", prep.unit_norm, "per-sample unit Euclidean norm");
    }

    [[nodiscard]] MultiViewDataset load() const {
        MultiViewDataset data = load_dataset(fs::path(manifest));
        if (prep.standardize) standardize_features(data);
        if (prep.unit_norm) unit_norm_samples(data);
        return data;
    }

    [[nodiscard]] int cluster_count(const MultiViewDataset& data) const {
        if (clusters) return *clusters;
        if (data.clusters) return *data.clusters;
        throw UsageError("--clusters is required when the manifest declares no clusters or labels");
    }

    [[nodiscard]] Algorithm parsed_algorithm() const { return *parse_algorithm(algorithm); }
};

// Bad flags, malformed inputs and invalid settings. IoError stays a runtime failure.
bool is_input_error(const std::exception& e) {
    return dynamic_cast<const UsageError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e) ||
           dynamic_cast<const ParseError*>(&e) || dynamic_cast<const DimMismatch*>(&e) ||
           dynamic_cast<const LabelMismatch*>(&e);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

int cmd_fit(const DataFlags& data_flags, const SolverFlags& solver, const std::string& out_dir, std::ostream& out) {
    const MultiViewDataset data = data_flags.load();
    const int clusters = data_flags.cluster_count(data);
    PipelineOutput run = run_pipeline(data, data_flags.parsed_algorithm(), solver.config, clusters, solver.options());
    run.result.preprocessing = data_flags.prep;
    save_result(run.result, fs::path(out_dir));

    out << run.result.algorithm << ": " << (run.result.converged ? "converged" : "not converged") << " after "
        << run.result.iterations << " iterations\n";
    if (run.result.metrics) run.result.metrics->write_text(out);
    return kExitOk;
}

std::string metric_name(SelectionMetric m) {
    switch (m) {
        case SelectionMetric::Nmi: return "nmi";
        case SelectionMetric::Ari: return "ari";
        case SelectionMetric::Acc: break;
    }
    return "acc";
}

int cmd_grid(const DataFlags& data_flags, const SolverFlags& solver, const GridSpec& grid, const std::string& out_dir,
             std::ostream& out, std::ostream& err) {
    const MultiViewDataset data = data_flags.load();
    if (!data.labels) throw UsageError("grid search needs a labels file in the manifest");
    const int clusters = data_flags.cluster_count(data);
    const GridOutcome outcome =
        run_grid(data, data_flags.parsed_algorithm(), solver.config, grid, clusters, solver.options());
    for (const std::string& w : outcome.warnings) err << "warning: " << w << '\n';

    const std::string name = metric_name(grid.metric);
    ensure_dir(fs::path(out_dir));
    write_grid_csv(outcome, name, fs::path(out_dir) / "grid.csv");
    write_winner_csv(outcome, name, fs::path(out_dir) / "winner.csv");

    const SolverConfig& w = outcome.winner;
    out << "winner: k_s=" << w.k_s << " k_c=" << w.k_c << " lambda1=" << format_number(w.lambda1, 10)
        << " lambda2=" << format_number(w.lambda2, 10) << " lambda3=" << format_number(w.lambda3, 10) << " mean_"
        << name << '=' << format_number(outcome.winner_score, 10) << " (" << outcome.fits << " fits)\n";
    return kExitOk;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& name, const std::string& out_dir, std::ostream& out) {
    const MultiViewDataset data = generate_synthetic(spec);
    write_dataset(data, fs::path(out_dir), name);
    out << "wrote " << data.view_count() << " views, N=" << data.samples() << " to " << out_dir << '\n';
    return kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path, std::ostream& out) {
    const Labels pred = read_labels(fs::path(pred_path));
    const Labels truth = read_labels(fs::path(truth_path));
    evaluate(pred, truth).write_text(out);
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-view subspace clustering with consistent and view-specific latent factors"};
    app.name("mvsc");
    app.require_subcommand(1);

    DataFlags data_flags;
    SolverFlags solver;
    std::string out_dir;

    CLI::App* fit = app.add_subcommand("fit", "fit one model and write metrics, labels, trace and adjacency");
    data_flags.attach(*fit);
    solver.attach(*fit);
    fit->add_option("--out", out_dir, "output directory")->required();

    DataFlags grid_data;
    SolverFlags grid_solver;
    GridSpec grid;
    std::string grid_out;
    std::string grid_metric = "acc";
    CLI::App* grid_cmd = app.add_subcommand("grid", "greedy three-stage hyperparameter search");
    grid_data.attach(*grid_cmd);
    grid_solver.attach(*grid_cmd);
    grid_cmd->add_option("--out", grid_out, "output directory")->required();
    grid_cmd->add_option("--grid-ks", grid.k_s)->capture_default_str()->delimiter(',');
    grid_cmd->add_option("--grid-kc", grid.k_c)->capture_default_str()->delimiter(',');
    grid_cmd->add_option("--grid-l1", grid.lambda1)->capture_default_str()->delimiter(',');
    grid_cmd->add_option("--grid-l2", grid.lambda2)->capture_default_str()->delimiter(',');
    grid_cmd->add_option("--grid-l3", grid.lambda3)->capture_default_str()->delimiter(',');
    grid_cmd->add_option("--repeats", grid.repeats, "runs per cell, seeds seed..seed+repeats-1")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    grid_cmd->add_option("--metric", grid_metric, "selection metric")
        ->capture_default_str()
        ->check(CLI::IsMember({"acc", "nmi", "ari"}));

    SyntheticSpec spec;
    std::string synth_out;
    std::string synth_name = "synthetic";
    CLI::App* synth = app.add_subcommand("synth", "write a seeded synthetic multi-view dataset");
    synth->add_option("--views", spec.views)->capture_default_str();
    synth->add_option("--clusters", spec.clusters)->capture_default_str();
    synth->add_option("--samples", spec.samples)->capture_default_str();
    synth->add_option("--ks", spec.k_s)->capture_default_str();
    synth->add_option("--kc", spec.k_c)->capture_default_str();
    synth->add_option("--intrinsic-dim", spec.intrinsic_dim)->capture_default_str();
    synth->add_option("--dims", spec.dims, "observation dimension per view")->capture_default_str()->delimiter(',');
    synth->add_option("--sigma", spec.sigma, "relative noise level")->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();
    synth->add_option("--name", synth_name)->capture_default_str();
    synth->add_option("--out", synth_out, "output directory")->required();

    std::string pred_path;
    std::string truth_path;
    CLI::App* eval = app.add_subcommand("eval", "score predicted labels against ground truth");
    eval->add_option("--pred", pred_path, "predicted labels, one per line")->required()->check(CLI::ExistingFile);
    eval->add_option("--truth", truth_path, "true labels, one per line")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*fit) return cmd_fit(data_flags, solver, out_dir, out);
        if (*grid_cmd) {
            static const std::map<std::string, SelectionMetric> metrics{
                {"acc", SelectionMetric::Acc}, {"nmi", SelectionMetric::Nmi}, {"ari", SelectionMetric::Ari}};
            grid.metric = metrics.at(grid_metric);
            return cmd_grid(grid_data, grid_solver, grid, grid_out, out, err);
        }
        if (*synth) return cmd_synth(spec, synth_name, synth_out, out);
        if (*eval) return cmd_eval(pred_path, truth_path, out);
    } catch (const Diverged& e) {
        err << "error: solver diverged at iteration " << e.iteration << " (" << e.variable << ")\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e) ? kExitUsage : kExitFailure;
    }
    return kExitUsage;
}

} // namespace mvsc::cli
