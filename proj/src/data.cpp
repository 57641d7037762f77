#include "esqn/data.hpp"

#include "esqn/errors.hpp"
#include "esqn/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace esqn {

Vector narma10_response(std::span<const double> drive) {
    const std::size_t n = drive.size();
    // b[t] holds b(t); b(0) = 0 and earlier values are implicit zeros.
    Vector b(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double window = 0.0;
        for (std::size_t i = 0; i < 10 && i <= t; ++i) window += b[t - i];
        const double lagged_drive = t >= 9 ? drive[t - 9] : 0.0;
        b[t + 1] = 0.3 * b[t] + 0.05 * b[t] * window + 1.5 * lagged_drive * drive[t] + 0.1;
    }
    b.erase(b.begin());
    return b;
}

NarmaSeries generate_narma10(std::size_t n, SeededRng& rng, std::size_t warmup_discard) {
    if (n == 0) throw ArgumentError("generate_narma10: n must be >= 1");
    const std::size_t total = warmup_discard + n;
    constexpr std::size_t kAttempts = 10;
    for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
        SeededRng retry(derive_seed(rng.seed(), attempt));
        SeededRng& source = attempt == 0 ? rng : retry;
        const Vector drive = rng_uniform(source, 0.0, 0.5, total);
        const Vector response = narma10_response(drive);
        const bool diverged = std::any_of(response.begin(), response.end(), [](double v) {
            return !std::isfinite(v) || std::abs(v) > kNarmaDivergence;
        });
        if (diverged) continue;
        const auto first = static_cast<std::ptrdiff_t>(warmup_discard);
        return NarmaSeries{Vector(drive.begin() + first, drive.end()),
                           Vector(response.begin() + first, response.end())};
    }
    throw GenerationError("generate_narma10: series diverged in " + std::to_string(kAttempts) +
                          " consecutive attempts");
}

namespace {

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

} // namespace

TimeSeries read_csv(std::istream& in, const ColumnSelector& column, const std::string& source) {
    std::string line;
    std::size_t row = 0;
    std::optional<std::size_t> index;
    if (const auto* i = std::get_if<std::size_t>(&column)) index = *i;
    bool first_content = true;
    TimeSeries series;

    while (std::getline(in, line)) {
        ++row;
        if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_cells(line);

        if (first_content) {
            first_content = false;
            if (!index) {
                const auto& name = std::get<std::string>(column);
                const auto it = std::find_if(cells.begin(), cells.end(),
                                             [&](const std::string& c) { return trim(c) == name; });
                if (it == cells.end())
                    throw LoadError(LoadError::Kind::missing_column,
                                    source + ": header has no column '" + name + "'", row);
                index = static_cast<std::size_t>(it - cells.begin());
                continue;
            }
            double probe = 0.0;
            if (*index < cells.size() && !parse_real(cells[*index], probe)) continue; // header
        }

        if (*index >= cells.size())
            throw LoadError(LoadError::Kind::missing_column,
                            source + ": row " + std::to_string(row) + " has no column " +
                                std::to_string(*index + 1),
                            row, *index + 1);
        double value = 0.0;
        if (!parse_real(cells[*index], value) || !std::isfinite(value))
            throw LoadError(LoadError::Kind::bad_cell,
                            source + ": cannot parse '" + cells[*index] + "' at row " +
                                std::to_string(row) + ", column " + std::to_string(*index + 1),
                            row, *index + 1);
        series.values.push_back(value);
    }
    if (series.values.empty())
        throw LoadError(LoadError::Kind::empty_column, source + ": selected column has no values", 0,
                        index ? *index + 1 : 0);
    return series;
}

TimeSeries load_csv(const std::string& path, const ColumnSelector& column) {
    std::ifstream in(path);
    if (!in) throw LoadError(LoadError::Kind::missing_file, "cannot open " + path);
    return read_csv(in, column, path);
}

Rescaler fit_rescaler(std::span<const double> segment) {
    if (segment.empty()) throw ArgumentError("fit_rescaler: empty segment");
    const auto [lo, hi] = std::minmax_element(segment.begin(), segment.end());
    if (!(*hi > *lo)) throw DegenerateError("fit_rescaler: constant segment has no scale");
    return {*lo, *hi};
}

Rescaled apply(const Rescaler& scaler, std::span<const double> values) {
    Rescaled out;
    out.values.reserve(values.size());
    const double width = scaler.max - scaler.min;
    for (double v : values) {
        double x = (v - scaler.min) / width;
        if (x < 0.0 || x > 1.0) {
            x = std::clamp(x, 0.0, 1.0);
            ++out.clipped;
        }
        out.values.push_back(x);
    }
    return out;
}

Vector invert(const Rescaler& scaler, std::span<const double> values) {
    Vector out;
    out.reserve(values.size());
    const double width = scaler.max - scaler.min;
    for (double x : values) out.push_back(scaler.min + x * width);
    return out;
}

SupervisedDataset make_lagged_dataset(std::span<const double> series,
                                      std::span<const std::size_t> offsets, std::size_t horizon) {
    if (offsets.empty()) throw ArgumentError("make_lagged_dataset: no lag offsets");
    if (horizon == 0) throw ArgumentError("make_lagged_dataset: horizon must be >= 1");
    const std::size_t max_off = *std::max_element(offsets.begin(), offsets.end());
    if (series.size() < max_off + horizon + 1)
        throw ArgumentError("make_lagged_dataset: series of length " + std::to_string(series.size()) +
                            " is too short for max lag " + std::to_string(max_off) +
                            " and horizon " + std::to_string(horizon));
    const std::size_t rows = series.size() - max_off - horizon;
    SupervisedDataset data;
    data.inputs = DenseMatrix(rows, offsets.size());
    data.targets = DenseMatrix(rows, 1);
    data.target_time.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        const std::size_t t = k + max_off;
        for (std::size_t j = 0; j < offsets.size(); ++j) data.inputs(k, j) = series[t - offsets[j]];
        data.targets(k, 0) = series[t + horizon];
        data.target_time[k] = t + horizon;
    }
    for (auto o : offsets) data.input_names.push_back("lag" + std::to_string(o));
    return data;
}

SupervisedDataset make_narma_dataset(const NarmaSeries& series,
                                     std::span<const std::size_t> offsets) {
    if (series.input.size() != series.output.size() || series.input.empty())
        throw DimensionError("make_narma_dataset: input and output series must align");
    if (offsets.empty()) throw ArgumentError("make_narma_dataset: no lag offsets");
    const std::size_t max_off = *std::max_element(offsets.begin(), offsets.end());
    if (series.input.size() <= max_off)
        throw ArgumentError("make_narma_dataset: series shorter than the largest lag");
    const std::size_t k = series.input.size() - max_off;
    SupervisedDataset data;
    data.inputs = DenseMatrix(k, offsets.size());
    data.targets = DenseMatrix(k, 1);
    data.target_time.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t t = r + max_off;
        for (std::size_t j = 0; j < offsets.size(); ++j) data.inputs(r, j) = series.input[t - offsets[j]];
        data.targets(r, 0) = series.output[t];
        data.target_time[r] = t + 1;
    }
    for (auto o : offsets) data.input_names.push_back("s_lag" + std::to_string(o));
    return data;
}

namespace {

SupervisedDataset slice(const SupervisedDataset& data, std::size_t begin, std::size_t end, Split tag) {
    SupervisedDataset out;
    const std::size_t rows = end - begin;
    out.inputs = DenseMatrix(rows, data.inputs.cols());
    out.targets = DenseMatrix(rows, data.targets.cols());
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(data.inputs.row(begin + r).begin(), data.inputs.cols(), out.inputs.row(r).begin());
        std::copy_n(data.targets.row(begin + r).begin(), data.targets.cols(), out.targets.row(r).begin());
    }
    out.target_time.assign(data.target_time.begin() + static_cast<std::ptrdiff_t>(begin),
                           data.target_time.begin() + static_cast<std::ptrdiff_t>(end));
    out.input_names = data.input_names;
    out.split = tag;
    return out;
}

} // namespace

std::pair<SupervisedDataset, SupervisedDataset>
split(const SupervisedDataset& data, std::size_t train_rows, std::optional<std::size_t> validation_rows) {
    const std::size_t k = data.size();
    const std::size_t val = validation_rows.value_or(k >= train_rows ? k - train_rows : 0);
    if (train_rows == 0 || val == 0 || train_rows + val > k)
        throw ArgumentError("split: " + std::to_string(train_rows) + " training + " +
                            std::to_string(val) + " validation rows do not fit in " +
                            std::to_string(k));
    // A shorter validation block still sits directly after the training block.
    return {slice(data, 0, train_rows, Split::train),
            slice(data, train_rows, train_rows + val, Split::validation)};
}

std::pair<SupervisedDataset, SupervisedDataset> split_fraction(const SupervisedDataset& data,
                                                               double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ArgumentError("split_fraction: fraction must be in (0, 1)");
    const auto train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.size())));
    return split(data, train);
}

std::pair<Vector, Vector> split_series(std::span<const double> series, std::size_t train_count) {
    if (train_count == 0 || train_count >= series.size())
        throw ArgumentError("split_series: training count must be in [1, length)");
    return {Vector(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(train_count)),
            Vector(series.begin() + static_cast<std::ptrdiff_t>(train_count), series.end())};
}

void write_dataset_csv(std::ostream& out, const SupervisedDataset& data) {
    for (const auto& name : data.input_names) out << name << ',';
    for (std::size_t j = 0; j < data.targets.cols(); ++j) {
        out << "target";
        if (data.targets.cols() > 1) out << j;
        out << (j + 1 < data.targets.cols() ? "," : "");
    }
    out << '\n';
    for (std::size_t k = 0; k < data.size(); ++k) {
        for (double v : data.inputs.row(k)) out << format_real(v) << ',';
        const auto t = data.targets.row(k);
        for (std::size_t j = 0; j < t.size(); ++j)
            out << format_real(t[j]) << (j + 1 < t.size() ? "," : "");
        out << '\n';
    }
}

TimeSeries generate_traffic_standin(std::size_t n, std::size_t period, std::uint64_t seed, double noise) {
    if (n == 0 || period < 2) throw ArgumentError("generate_traffic_standin: need n >= 1 and period >= 2");
    SeededRng rng(seed);
    const double phase = 2.0 * std::numbers::pi * rng.next_unit();
    TimeSeries series;
    series.values.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        const double daily = std::sin(2.0 * std::numbers::pi * x / static_cast<double>(period) + phase);
        const double weekly = std::sin(2.0 * std::numbers::pi * x / (7.0 * static_cast<double>(period)));
        // Irwin-Hall(4) centred: unit variance / 3, close enough to Gaussian.
        double jitter = -2.0;
        for (int i = 0; i < 4; ++i) jitter += rng.next_unit();
        const double v = 1.0 + 0.5 * daily + 0.2 * weekly + 0.1 * x / static_cast<double>(n) +
                         noise * std::sqrt(3.0) * jitter;
        series.values.push_back(std::max(v, 0.01));
    }
    return series;
}

} // namespace esqn
