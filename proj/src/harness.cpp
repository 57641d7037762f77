#include "esqn/harness.hpp"

#include "esqn/errors.hpp"
#include "esqn/text_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace esqn {

std::string to_string(ModelKind kind) { return kind == ModelKind::esn ? "ESN" : "ESQN"; }

void ExperimentConfig::validate() const {
    if (trials < 1) throw ArgumentError("config: trials must be >= 1");
    if (reservoir_size < 1) throw ArgumentError("config: reservoir_size must be >= 1");
    if (train_rows < 1) throw ArgumentError("config: train_rows must be >= 1");
    if (washout >= train_rows) throw ArgumentError("config: washout must be smaller than train_rows");
    if (lags.empty()) throw ArgumentError("config: lags must name at least one offset");
    if (lambda_grid.empty()) throw ArgumentError("config: lambda_grid is empty");
    for (double l : lambda_grid)
        if (!(l >= 0.0)) throw ArgumentError("config: lambda values must be >= 0");
    if (dataset == DatasetKind::csv) {
        if (csv_path.empty()) throw ArgumentError("config: csv_path is required for csv datasets");
    }
    if (series.find(',') != std::string::npos) throw ArgumentError("config: series name may not contain ','");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& v) {
    T out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ArgumentError("config: '" + key + "' expects a nonnegative integer, got '" + v + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    if (!parse_real(v, out)) throw ArgumentError("config: '" + key + "' expects a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ArgumentError("config: '" + key + "' expects true/false, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& v, F parse_one) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_one(trim(item)));
    return out;
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    ExperimentConfig c;
    std::string line;
    std::size_t line_no = 0;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto size_setter = [](std::size_t& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = parse_integer<std::size_t>(k, v); };
    };
    auto real_setter = [](double& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = parse_double(k, v); };
    };
    auto bool_setter = [](bool& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = parse_bool(k, v); };
    };

    const std::map<std::string, Setter> setters = {
        {"series", [&](const std::string&, const std::string& v) { c.series = v; }},
        {"dataset",
         [&](const std::string& k, const std::string& v) {
             if (v == "narma") c.dataset = DatasetKind::narma;
             else if (v == "csv") c.dataset = DatasetKind::csv;
             else throw ArgumentError("config: '" + k + "' must be narma or csv");
         }},
        {"csv_path", [&](const std::string&, const std::string& v) { c.csv_path = v; }},
        {"csv_column", [&](const std::string&, const std::string& v) { c.csv_column = v; }},
        {"lags",
         [&](const std::string& k, const std::string& v) {
             c.lags = parse_list<std::size_t>(v, [&](const std::string& s) { return parse_integer<std::size_t>(k, s); });
         }},
        {"horizon", size_setter(c.horizon)},
        {"train_rows", size_setter(c.train_rows)},
        {"validation_rows",
         [&](const std::string& k, const std::string& v) {
             if (v == "rest") c.validation_rows.reset();
             else c.validation_rows = parse_integer<std::size_t>(k, v);
         }},
        {"narma_warmup", size_setter(c.narma_warmup)},
        {"data_seed",
         [&](const std::string& k, const std::string& v) { c.data_seed = parse_integer<std::uint64_t>(k, v); }},
        {"model",
         [&](const std::string& k, const std::string& v) {
             if (v == "esn") c.model = ModelKind::esn;
             else if (v == "esqn") c.model = ModelKind::esqn;
             else throw ArgumentError("config: '" + k + "' must be esn or esqn");
         }},
        {"reservoir_size", size_setter(c.reservoir_size)},
        {"trials", size_setter(c.trials)},
        {"seed", [&](const std::string& k, const std::string& v) { c.seed = parse_integer<std::uint64_t>(k, v); }},
        {"washout",
size_setter(c.washout)},
        {"density", real_setter(c.density)},
        {"spectral_radius", real_setter(c.spectral_radius)},
        {"esn_weight_lo", real_setter(c.esn_weight_lo)},
        {"esn_weight_hi", real_setter(c.esn_weight_hi)},
        {"bias_weights_fixed_to_one", bool_setter(c.bias_weights_fixed_to_one)},
        {"weight_lo", real_setter(c.weight_lo)},
        {"weight_hi", real_setter(c.weight_hi)},
        {"state_lo", real_setter(c.state_lo)},
        {"state_hi", real_setter(c.state_hi)},
        {"rate_in", real_setter(c.rate_in)},
        {"rate_res", real_setter(c.rate_res)},
        {"esqn_density", real_setter(c.esqn_density)},
        {"lambda_grid",
         [&](const std::string& k, const std::string& v) {
             c.lambda_grid = parse_list<double>(v, [&](const std::string& s) { return parse_double(k, s); });
         }},
        {"lambda_holdout", real_setter(c.lambda_holdout)},
        {"include_input_in_readout", bool_setter(c.include_input_in_readout)},
        {"reset_state_before_validation", bool_setter(c.reset_state_before_validation)},
        {"rescale_on_full_series", bool_setter(c.rescale_on_full_series)},
        {"nmse_original_units", bool_setter(c.nmse_original_units)},
        {"output_dir", [&](const std::string&, const std::string& v) { c.output_dir = v; }},
        {"snapshot", bool_setter(c.snapshot)},
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ArgumentError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(key, value);
    }

    if (!base_dir.empty()) {
        if (!c.csv_path.empty() && c.csv_path.is_relative()) c.csv_path = base_dir / c.csv_path;
        if (c.output_dir.is_relative()) c.output_dir = base_dir / c.output_dir;
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(LoadError::Kind::missing_file, "cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

namespace {

ColumnSelector column_selector(const std::string& text) {
    std::size_t index = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), index);
    if (res.ec == std::errc{} && res.ptr == text.data() + text.size()) return index;
    return text;
}

void rescale_column(DenseMatrix& m, std::size_t col, const Rescaler& scaler, std::size_t& clipped) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double v = m(r, col);
        const Rescaled scaled = esqn::apply(scaler, std::span<const double>(&v, 1));
        m(r, col) = scaled.values[0];
        clipped += scaled.clipped;
    }
}

Vector column(const DenseMatrix& m, std::size_t col, std::size_t rows) {
    Vector out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = m(r, col);
    return out;
}

} // namespace

PreparedData prepare_data(const ExperimentConfig& config) {
    PreparedData out;
    if (config.dataset == DatasetKind::narma) {
        if (!config.validation_rows) throw ArgumentError("config: NARMA needs explicit validation_rows");
        const std::size_t total = config.train_rows + *config.validation_rows;
        const std::size_t max_lag = *std::max_element(config.lags.begin(), config.lags.end());
        SeededRng rng(config.data_seed.value_or(config.seed));
        SupervisedDataset data =
            make_narma_dataset(generate_narma10(total + max_lag, rng, config.narma_warmup), config.lags);
        const std::size_t fit_rows = config.rescale_on_full_series ? total : config.train_rows;
        const Rescaler input_scaler = fit_rescaler(column(data.inputs, 0, fit_rows));
        out.target_scaler = fit_rescaler(column(data.targets, 0, fit_rows));
        rescale_column(data.inputs, 0, input_scaler, out.clipped);
        rescale_column(data.targets, 0, out.target_scaler, out.clipped);
        std::tie(out.train, out.validation) = split(data, config.train_rows, config.validation_rows);
        return out;
    }

    const TimeSeries series = load_csv(config.csv_path.string(), column_selector(config.csv_column));
    const std::size_t max_lag = *std::max_element(config.lags.begin(), config.lags.end());
    // Every raw sample a training row touches, inputs and targets alike.
    const std::size_t train_extent = config.train_rows + max_lag + config.horizon;
    if (train_extent > series.values.size())
        throw ArgumentError("config: series of length " + std::to_string(series.values.size()) +
                            " cannot hold " + std::to_string(config.train_rows) + " training rows");
    const std::size_t fit_len = config.rescale_on_full_series ? series.values.size() : train_extent;
    out.target_scaler = fit_rescaler(std::span<const double>(series.values).first(fit_len));
    const Rescaled scaled = esqn::apply(out.target_scaler, series.values);
    out.clipped = scaled.clipped;
    const SupervisedDataset data = make_lagged_dataset(scaled.values, config.lags, config.horizon);
    std::tie(out.train, out.validation) = split(data, config.train_rows, config.validation_rows);
    return out;
}

AnyReservoir make_reservoir(const ExperimentConfig& config, std::size_t n_in, SeededRng& rng) {
    if (config.model == ModelKind::esn) {
        EsnConfig ec;
        ec.n_in = n_in;
        ec.n_res = config.reservoir_size;
        ec.density = config.density;
        ec.target_rho = config.spectral_radius;
        ec.weight_lo = config.esn_weight_lo;
        ec.weight_hi = config.esn_weight_hi;
        ec.bias_weights_fixed_to_one = config.bias_weights_fixed_to_one;
        return esn_init(ec, rng);
    }
    EsqnConfig qc;
    qc.n_in = n_in;
    qc.n_res = config.reservoir_size;
    qc.weight_lo = config.weight_lo;
    qc.weight_hi = config.weight_hi;
    qc.state_lo = config.state_lo;
    qc.state_hi = config.state_hi;
    qc.rate_in = config.rate_in;
    qc.rate_res = config.rate_res;
    qc.density = config.esqn_density;
    return esqn_init(qc, rng);
}

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix targets_after(const DenseMatrix& targets, std::size_t washout) {
    DenseMatrix out(targets.cols(), targets.rows() - washout);
    for (std::size_t k = washout; k < targets.rows(); ++k)
        for (std::size_t j = 0; j < targets.cols(); ++j) out(j, k - washout) = targets(k, j);
    return out;
}

} // namespace

TrialResult run_trial(const ExperimentConfig& config, const PreparedData& data, std::size_t index,
                      std::vector<TracePoint>* trace, std::size_t* excursions, std::string* snapshot) {
    TrialResult result;
    result.series = config.series;
    result.model = to_string(config.model);
    result.trial = index;
    result.seed = derive_seed(config.seed, index);
    result.reservoir_size = config.reservoir_size;

    const auto fail = [&](std::string why) {
        result.failed = true;
        result.failure = std::move(why);
        return result;
    };

    SeededRng rng(result.seed);
    AnyReservoir reservoir = make_reservoir(config, data.train.inputs.cols(), rng);
    const bool with_input = config.include_input_in_readout;

    return std::visit(
        [&](auto& model) -> TrialResult {
            const DenseMatrix regressors = collect_states(model, data.train.inputs, config.washout, with_input);
            if (!regressors.all_finite()) return fail("non-finite reservoir state during training");
            const DenseMatrix targets = targets_after(data.train.targets, config.washout);

            ReadoutMap readout;
            try {
                result.lambda = select_lambda(regressors, targets, config.lambda_grid, config.lambda_holdout).lambda;
                readout = fit_readout(regressors, targets, result.lambda, with_input);
            } catch (const SingularError& e) {
                return fail(e.what());
            }

            if (config.reset_state_before_validation) {
                if constexpr (std::is_same_v<std::decay_t<decltype(model)>, EsnModel>)
                    model.reset();
                else
                    model.reset(rng, config.state_lo, config.state_hi);
            }

            const std::size_t k = data.validation.size();
            const std::size_t nb = data.validation.targets.cols();
            DenseMatrix predictions(k, nb);
            for (std::size_t t = 0; t < k; ++t) {
                const Vector& state = model.update(data.validation.inputs.row(t));
                const Vector y = predict(readout, data.validation.inputs.row(t), state);
                if (!all_finite(state) || !all_finite(y)) return fail("non-finite state or prediction in validation");
                std::copy(y.begin(), y.end(), predictions.row(t).begin());
            }

            DenseMatrix truth = data.validation.targets;
            if (config.nmse_original_units) {
                for (std::size_t j = 0; j < nb; ++j)
                    for (std::size_t t = 0; t < k; ++t) {
                        truth(t, j) = invert(data.target_scaler, std::span<const double>(&truth(t, j), 1))[0];
                        predictions(t, j) =
                            invert(data.target_scaler, std::span<const double>(&predictions(t, j), 1))[0];
                    }
            }
            result.nmse = nmse(truth, predictions);
            if (!std::isfinite(result.nmse)) return fail("non-finite NMSE");

            if (trace) {
                trace->clear();
                for (std::size_t t = 0; t < k; ++t)
                    trace->push_back({data.validation.target_time[t], truth(t, 0), predictions(t, 0)});
            }
            if constexpr (std::is_same_v<std::decay_t<decltype(model)>, EsqnModel>)
                if (excursions) *excursions += model.excursions_above_one();
            if (snapshot) {
                std::ostringstream ss;
                write_snapshot(ss, model);
                write_readout(ss, readout);
                *snapshot = ss.str();
            }
            return result;
        },
        reservoir);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const PreparedData data = prepare_data(config);
    ExperimentResult out;
    out.clipped = data.clipped;
    for (std::size_t i = 0; i < config.trials; ++i) {
        std::vector<TracePoint> trace;
        std::string snapshot;
        TrialResult r = run_trial(config, data, i, &trace, &out.excursions_above_one,
                                  config.snapshot ? &snapshot : nullptr);
        if (!r.failed) {
            out.trace = std::move(trace);
            if (config.snapshot) out.snapshot = std::move(snapshot);
        }
        out.trials.push_back(std::move(r));
    }
    out.summary = summarize_lenient(out.trials);
    return out;
}

std::vector<SweepRow> reservoir_size_sweep(const ExperimentConfig& config, const std::vector<std::size_t>& sizes) {
    if (sizes.empty()) throw ArgumentError("reservoir_size_sweep: no sizes given");
    std::vector<SweepRow> rows;
    for (std::size_t size : sizes) {
        ExperimentConfig c = config;
        c.reservoir_size = size;
        rows.push_back({size, run_experiment(c).summary});
    }
    return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
    out << "t,target,prediction\n";
    for (const auto& p : trace)
        out << p.t << ',' << format_real(p.target) << ',' << format_real(p.prediction) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "size,n,mean_nmse,ci_halfwidth,lambda\n";
    for (const auto& r : rows) {
        out << r.size << ',' << r.summary.n << ',' << format_real(r.summary.mean_nmse) << ',';
        if (r.summary.ci_halfwidth) out << format_real(*r.summary.ci_halfwidth);
        out << ',' << format_real(r.summary.lambda) << '\n';
    }
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw LoadError(LoadError::Kind::missing_file, "cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("results.csv");
        write_results_csv(f, result.trials);
    }
    {
        auto f = open("summary.csv");
        write_summary_csv(f, std::span<const Summary>(&result.summary, 1));
    }
    {
        auto f = open("trace.csv");
        write_trace_csv(f, result.trace);
    }
    if (!result.snapshot.empty()) {
        auto f = open("snapshot.txt");
        f << result.snapshot;
    }
}

} // namespace esqn
