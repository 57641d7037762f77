#pragma once

#include "esqn/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace esqn {

struct TimeSeries {
    Vector values;
    /// Sampling period in seconds, when known (300 for 5-minute traces).
    std::optional<double> period_seconds;
};

enum class Split { train, validation, full };

/// K paired rows; target_time[k] is the series index of row k's target.
struct SupervisedDataset {
    DenseMatrix inputs;  // K x N_a
    DenseMatrix targets; // K x N_b
    std::vector<std::size_t> target_time;
    std::vector<std::string> input_names;
    Split split = Split::full;

    [[nodiscard]] std::size_t size() const noexcept { return inputs.rows(); }
};

// ---------------------------------------------------------------- NARMA-10

struct NarmaSeries {
    Vector input;  // s(t)
    Vector output; // b(t+1), aligned with input
};

/// Runs b(t+1) = 0.3 b(t) + 0.05 b(t) sum_{i=0..9} b(t-i) + 1.5 s(t-9) s(t) + 0.1
/// from b = 0 over the given drive, returning b(t+1) for every s(t).
/// Samples before the start of `drive` count as s = 0, b = 0.
Vector narma10_response(std::span<const double> drive);

inline constexpr std::size_t kNarmaWarmup = 200;
inline constexpr double kNarmaDivergence = 10.0;

/// n aligned (s(t), b(t+1)) pairs with s ~ Unif[0, 0.5), after discarding
/// `warmup_discard` leading pairs. A run with |b| > 10 is redrawn from
/// derive_seed(rng.seed(), attempt), up to 10 attempts in total.
NarmaSeries generate_narma10(std::size_t n, SeededRng& rng,
                             std::size_t warmup_discard = kNarmaWarmup);

// ---------------------------------------------------------------- CSV

/// Zero-based column index, or a header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

/// Comma-separated, optional single header line, one sample per row.
/// Errors (LoadError) name the 1-based file row and column.
TimeSeries load_csv(const std::string& path, const ColumnSelector& column = std::size_t{0});
TimeSeries read_csv(std::istream& in, const ColumnSelector& column = std::size_t{0},
                    const std::string& source = "<stream>");

// ---------------------------------------------------------------- scaling

struct Rescaler {
    double min = 0.0;
    double max = 1.0;
};

struct Rescaled {
    Vector values;
    std::size_t clipped = 0;
};

/// Throws DegenerateError on a constant segment.
Rescaler fit_rescaler(std::span<const double> segment);
/// Maps min -> 0, max -> 1 and clips anything outside [0, 1].
Rescaled apply(const Rescaler& scaler, std::span<const double> values);
Vector invert(const Rescaler& scaler, std::span<const double> values);

// ---------------------------------------------------------------- windowing

/// Row t: inputs x(t - o) for each offset o, target x(t + horizon), for every
/// t with max(o) <= t < len - horizon.
SupervisedDataset make_lagged_dataset(std::span<const double> series,
                                      std::span<const std::size_t> offsets,
                                      std::size_t horizon = 1);

/// Dataset from aligned NARMA input/output series: a(t) = [s(t - o) for o in
/// offsets], target b(t+1). Rows start at t = max(offsets).
SupervisedDataset make_narma_dataset(const NarmaSeries& series,
                                     std::span<const std::size_t> offsets);

/// Contiguous, order-preserving split. validation_rows defaults to the rest.
std::pair<SupervisedDataset, SupervisedDataset>
split(const SupervisedDataset& data, std::size_t train_rows,
      std::optional<std::size_t> validation_rows = std::nullopt);
std::pair<SupervisedDataset, SupervisedDataset> split_fraction(const SupervisedDataset& data,
                                                               double train_fraction);
std::pair<Vector, Vector> split_series(std::span<const double> series, std::size_t train_count);

/// Inputs then targets; header carries the input names and "target".
void write_dataset_csv(std::ostream& out, const SupervisedDataset& data);

// ---------------------------------------------------------------- stand-ins

/// Seeded sinusoid-plus-noise traffic shape: a daily cycle of `period`
/// samples, a weekly modulation, a slow trend and Gaussian-ish noise. Values
/// are positive. Used in place of the proprietary ISP/UKERNA traces.
TimeSeries generate_traffic_standin(std::size_t n, std::size_t period, std::uint64_t seed,
                                    double noise = 0.05);

} // namespace esqn
