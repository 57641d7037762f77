#pragma once

#include "esqn/data.hpp"
#include "esqn/esn.hpp"
#include "esqn/esqn.hpp"
#include "esqn/metrics.hpp"
#include "esqn/readout.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace esqn {

enum class ModelKind { esn, esqn };
enum class DatasetKind { narma, csv };

std::string to_string(ModelKind kind);

struct ExperimentConfig {
    // dataset
    std::string series = "NARMA";
    DatasetKind dataset = DatasetKind::narma;
    std::filesystem::path csv_path;
    std::string csv_column = "0"; // index or header name
    /// Input window. NARMA defaults to s(t)..s(t-9); csv series must set it.
    std::vector<std::size_t> lags = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::size_t horizon = 1;
    std::size_t train_rows = 1990;
    std::optional<std::size_t> validation_rows = 390;
    std::size_t narma_warmup = kNarmaWarmup;
    std::optional<std::uint64_t> data_seed; // defaults to seed

    // model
    ModelKind model = ModelKind::esqn;
    std::size_t reservoir_size = 80;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::size_t washout = 100;
    double density = 0.15;
    double spectral_radius = 0.95;
    double esn_weight_lo = -0.5;
    double esn_weight_hi = 0.5;
    bool bias_weights_fixed_to_one = false;
    double weight_lo = 0.0;
    double weight_hi = 0.2;
    double state_lo = 0.0;
    double state_hi = 1.0;
    double rate_in = 1.0;
    double rate_res = 1.0;
    double esqn_density = 1.0;

    // readout and protocol
    std::vector<double> lambda_grid = default_lambda_grid();
    double lambda_holdout = 0.2;
    bool include_input_in_readout = true;
    bool reset_state_before_validation = false;
    bool rescale_on_full_series = false;
    bool nmse_original_units = false;

    std::filesystem::path output_dir = ".";
    bool snapshot = false;

    void validate() const;
};

/// key = value lines; '#' starts a comment. Unknown keys are rejected.
/// Relative csv_path / output_dir resolve against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Train/validation sets in model space ([0, 1] rescaled), plus the target
/// rescaler for reporting in original units.
struct PreparedData {
    SupervisedDataset train;
    SupervisedDataset validation;
    Rescaler target_scaler;
    std::size_t clipped = 0;
};

PreparedData prepare_data(const ExperimentConfig& config);

using AnyReservoir = std::variant<EsnModel, EsqnModel>;

AnyReservoir make_reservoir(const ExperimentConfig& config, std::size_t n_in, SeededRng& rng);

struct TracePoint {
    std::size_t t = 0;
    double target = 0.0;
    double prediction = 0.0;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;
    Summary summary;
    /// Validation trace of the last successful trial.
    std::vector<TracePoint> trace;
    std::size_t clipped = 0;
    std::size_t excursions_above_one = 0;
    /// Final model and readout of the last successful trial, when requested.
    std::string snapshot;
};

/// Runs `trials` independent trials; trial i uses derive_seed(seed, i).
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Runs one trial against already prepared data.
TrialResult run_trial(const ExperimentConfig& config, const PreparedData& data, std::size_t index,
                      std::vector<TracePoint>* trace = nullptr, std::size_t* excursions = nullptr,
                      std::string* snapshot = nullptr);

struct SweepRow {
    std::size_t size = 0;
    Summary summary;
};

std::vector<SweepRow> reservoir_size_sweep(const ExperimentConfig& config,
                                           const std::vector<std::size_t>& sizes);

/// t,target,prediction
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);
/// size,n,mean_nmse,ci_halfwidth,lambda
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes results.csv, summary.csv, trace.csv (and snapshot.txt) into dir.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result);

} // namespace esqn
