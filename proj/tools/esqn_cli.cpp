// Command-line front end: dataset generation, experiments, sweeps and the
// RandNN steady-state solver.

#include "esqn/data.hpp"
#include "esqn/errors.hpp"
#include "esqn/harness.hpp"
#include "esqn/randnn.hpp"
#include "esqn/text_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw esqn::LoadError(esqn::LoadError::Kind::missing_file, "cannot write " + path.string());
    return out;
}

void write_column(const fs::path& path, const char* header, const esqn::Vector& values) {
    auto out = open_out(path);
    out << header << '\n';
    for (double v : values) out << esqn::format_real(v) << '\n';
}

void print_row(const esqn::Summary& s) {
    std::cout << s.series << ' ' << s.model << ' ' << esqn::format_real(s.mean_nmse, 6);
    if (s.ci_halfwidth) std::cout << " ±" << esqn::format_real(*s.ci_halfwidth, 6);
    std::cout << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Echo state queueing network toolkit"};
    app.require_subcommand(1);

    // generate-narma
    std::size_t narma_n = 0;
    std::uint64_t narma_seed = 1;
    std::size_t narma_warmup = esqn::kNarmaWarmup;
    fs::path narma_out;
    auto* gen = app.add_subcommand("generate-narma", "Write a NARMA-10 input/target pair of CSVs");
    gen->add_option("--n", narma_n, "Number of (s(t), b(t+1)) pairs")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", narma_seed, "RNG seed");
    gen->add_option("--warmup", narma_warmup, "Leading pairs discarded");
    gen->add_option("--out", narma_out, "Output directory (inputs.csv, targets.csv)")->required();

    // generate-traffic
    std::size_t traffic_n = 0;
    std::size_t traffic_period = 288;
    double traffic_noise = 0.05;
    std::uint64_t traffic_seed = 1;
    fs::path traffic_out;
    auto* traffic = app.add_subcommand("generate-traffic", "Write a synthetic traffic-shaped series (t,value)");
    traffic->add_option("--n", traffic_n, "Number of samples")->required()->check(CLI::PositiveNumber);
    traffic->add_option("--period", traffic_period, "Samples per daily cycle")->check(CLI::Range(2, 1 << 20));
    traffic->add_option("--noise", traffic_noise, "Noise standard deviation")->check(CLI::NonNegativeNumber);
    traffic->add_option("--seed", traffic_seed, "RNG seed");
    traffic->add_option("--out", traffic_out, "Output CSV path")->required();

    // experiment
    fs::path config_path;
    std::uint64_t seed_override = 0;
    fs::path out_override;
    auto* exp = app.add_subcommand("experiment", "Run the multi-trial protocol for one config");
    exp->add_option("--config", config_path, "key=value config file")->required();
    auto* exp_seed = exp->add_option("--seed", seed_override, "Override the master seed");
    auto* exp_out = exp->add_option("--out", out_override, "Override output_dir");

    // sweep
    std::vector<std::size_t> sizes;
    auto* sweep = app.add_subcommand("sweep", "Run the experiment for several reservoir sizes");
    sweep->add_option("--config", config_path, "key=value config file")->required();
    sweep->add_option("--sizes", sizes, "Comma-separated reservoir sizes")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    auto* sweep_seed = sweep->add_option("--seed", seed_override, "Override the master seed");
    auto* sweep_out = sweep->add_option("--out", out_override, "Override output_dir");

    // solve-randnn
    fs::path spec_path;
    esqn::randnn::SolverOptions solver;
    bool skip_routing = false;
    auto* solve = app.add_subcommand("solve-randnn", "Solve the steady-state loads of a RandNN spec file");
    solve->add_option("--spec", spec_path, "Spec file")->required();
    solve->add_option("--tol", solver.tol, "Fixed-point tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--max-iter", solver.max_iter, "Iteration budget")->check(CLI::PositiveNumber);
    solve->add_flag("--no-routing-check", skip_routing, "Do not require outgoing weights <= firing rate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            esqn::SeededRng rng(narma_seed);
            const auto series = esqn::generate_narma10(narma_n, rng, narma_warmup);
            write_column(narma_out / "inputs.csv", "s", series.input);
            write_column(narma_out / "targets.csv", "b", series.output);
        } else if (*traffic) {
            const auto series = esqn::generate_traffic_standin(traffic_n, traffic_period, traffic_seed, traffic_noise);
            auto out = open_out(traffic_out);
            out << "t,value\n";
            for (std::size_t t = 0; t < series.values.size(); ++t)
                out << t << ',' << esqn::format_real(series.values[t]) << '\n';
        } else if (*exp || *sweep) {
            esqn::ExperimentConfig config = esqn::load_config(config_path);
            const bool is_exp = static_cast<bool>(*exp);
            if (*(is_exp ? exp_seed : sweep_seed)) config.seed = seed_override;
            if (*(is_exp ? exp_out : sweep_out)) config.output_dir = out_override;

            if (is_exp) {
                const auto result = esqn::run_experiment(config);
                esqn::write_experiment_outputs(config.output_dir, result);
                if (result.summary.failed)
                    std::cerr << "warning: " << result.summary.failed << " trial(s) failed and were excluded\n";
                if (result.clipped)
                    std::cerr << "note: " << result.clipped << " value(s) clipped into [0, 1] by rescaling\n";
                if (result.excursions_above_one)
                    std::cerr << "note: " << result.excursions_above_one << " reservoir load(s) exceeded 1\n";
                print_row(result.summary);
            } else {
                const auto rows = esqn::reservoir_size_sweep(config, sizes);
                fs::create_directories(config.output_dir);
                auto out = open_out(config.output_dir / "sweep.csv");
                esqn::write_sweep_csv(out, rows);
                for (const auto& row : rows) {
                    std::cout << row.size << ' ';
                    print_row(row.summary);
                }
            }
        } else if (*solve) {
            solver.check_routing = !skip_routing;
            const auto spec = esqn::randnn::read_spec_file(spec_path.string());
            const auto state = esqn::randnn::solve_steady_state(spec, solver);
            std::cout << "stable " << (state.stable ? "true" : "false") << '\n'
                      << "iterations " << state.iterations << '\n'
                      << "residual " << esqn::format_real(state.residual) << '\n'
                      << "rho";
            for (double r : state.rho) std::cout << ' ' << esqn::format_real(r);
            std::cout << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
