#pragma once

#include "esqn/errors.hpp"
#include "esqn/numerics.hpp"

#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace esqn {

template <typename R>
concept Reservoir = requires(R r, const R cr, std::span<const double> in) {
    { cr.n_in() } -> std::convertible_to<std::size_t>;
    { cr.n_res() } -> std::convertible_to<std::size_t>;
    { cr.state() } -> std::convertible_to<const Vector&>;
    { r.update(in) } -> std::convertible_to<const Vector&>;
};

/// Affine output layer y = w_out [1; a; x]. With `with_input == false` the
/// regressor is [1; x].
struct ReadoutMap {
    DenseMatrix w_out;
    bool with_input = true;

    [[nodiscard]] std::size_t n_out() const noexcept { return w_out.rows(); }
};

[[nodiscard]] inline std::size_t regressor_size(std::size_t n_in, std::size_t n_res,
                                                bool with_input) noexcept {
    return 1 + (with_input ? n_in : 0) + n_res;
}

/// Writes [1; input; state] (or [1; state]) into column `col` of `out`.
void write_regressor(DenseMatrix& out, std::size_t col, std::span<const double> input,
                     std::span<const double> state, bool with_input);

/// Drives `model` through every row of `inputs` (K x N_a) and returns the
/// regressors for steps washout+1..K as columns.
template <Reservoir R>
DenseMatrix collect_states(R& model, const DenseMatrix& inputs, std::size_t washout,
                           bool with_input = true) {
    const std::size_t k = inputs.rows();
    if (washout >= k)
        throw ArgumentError("collect_states: washout (" + std::to_string(washout) +
                            ") must be smaller than the sequence length (" + std::to_string(k) + ")");
    if (inputs.cols() != model.n_in())
        throw DimensionError("collect_states: inputs have " + std::to_string(inputs.cols()) +
                             " columns, reservoir expects " + std::to_string(model.n_in()));
    DenseMatrix regressors(regressor_size(model.n_in(), model.n_res(), with_input), k - washout);
    for (std::size_t t = 0; t < k; ++t) {
        const Vector& state = model.update(inputs.row(t));
        if (t >= washout) write_regressor(regressors, t - washout, inputs.row(t), state, with_input);
    }
    return regressors;
}

/// Ridge fit of regressors (D x K) to targets (N_b x K).
ReadoutMap fit_readout(const DenseMatrix& regressors, const DenseMatrix& targets, double lambda,
                       bool with_input = true);

Vector predict(const ReadoutMap& map, std::span<const double> input, std::span<const double> state);
/// Applies the map to every regressor column; returns N_b x K.
DenseMatrix predict_columns(const ReadoutMap& map, const DenseMatrix& regressors);

/// 1e-8, 1e-7, ..., 1e-1
std::vector<double> default_lambda_grid();

struct LambdaChoice {
    double lambda = 0.0;
    double holdout_nmse = 0.0;
};

/// Fits on the leading (1 - holdout_fraction) columns and scores each lambda
/// by NMSE on the trailing columns. Ties keep the smaller lambda; lambdas
/// whose system is singular are skipped.
LambdaChoice select_lambda(const DenseMatrix& regressors, const DenseMatrix& targets,
                           std::span<const double> grid, double holdout_fraction = 0.2);

/// "readout <n_out> <cols> <with_input>" then n_out rows.
void write_readout(std::ostream& out, const ReadoutMap& map);
ReadoutMap read_readout(std::istream& in);

} // namespace esqn
