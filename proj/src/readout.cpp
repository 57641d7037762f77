#include "esqn/readout.hpp"

#include "esqn/metrics.hpp"
#include "esqn/text_io.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace esqn {

void write_regressor(DenseMatrix& out, std::size_t col, std::span<const double> input,
                     std::span<const double> state, bool with_input) {
    std::size_t r = 0;
    out(r++, col) = 1.0;
    if (with_input)
        for (double a : input) out(r++, col) = a;
    for (double x : state) out(r++, col) = x;
}

ReadoutMap fit_readout(const DenseMatrix& regressors, const DenseMatrix& targets, double lambda,
                       bool with_input) {
    return ReadoutMap{ridge_solve(regressors, targets, lambda), with_input};
}

Vector predict(const ReadoutMap& map, std::span<const double> input, std::span<const double> state) {
    const std::size_t expected = regressor_size(input.size(), state.size(), map.with_input);
    if (map.w_out.cols() != expected)
        throw DimensionError("predict: readout has " + std::to_string(map.w_out.cols()) +
                             " columns, regressor has " + std::to_string(expected));
    Vector y(map.n_out());
    for (std::size_t m = 0; m < y.size(); ++m) {
        const auto w = map.w_out.row(m);
        double s = w[0];
        std::size_t c = 1;
        if (map.with_input)
            for (double a : input) s += w[c++] * a;
        for (double x : state) s += w[c++] * x;
        y[m] = s;
    }
    return y;
}

DenseMatrix predict_columns(const ReadoutMap& map, const DenseMatrix& regressors) {
    return map.w_out * regressors;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int e = -8; e <= -1; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

namespace {

DenseMatrix column_range(const DenseMatrix& m, std::size_t begin, std::size_t end) {
    DenseMatrix out(m.rows(), end - begin);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = m(r, c);
    return out;
}

} // namespace

LambdaChoice select_lambda(const DenseMatrix& regressors, const DenseMatrix& targets,
                           std::span<const double> grid, double holdout_fraction) {
    if (grid.empty()) throw ArgumentError("select_lambda: empty lambda grid");
    if (grid.size() == 1) return {grid[0], std::numeric_limits<double>::quiet_NaN()};
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw ArgumentError("select_lambda: holdout fraction must be in (0, 1)");

    const std::size_t k = regressors.cols();
    const auto held = static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(k)));
    if (held < 2 || held >= k)
        throw ArgumentError("select_lambda: too few samples (" + std::to_string(k) +
                            ") for a held-out tail");
    const std::size_t split = k - held;
    const DenseMatrix fit_z = column_range(regressors, 0, split);
    const DenseMatrix fit_t = column_range(targets, 0, split);
    const DenseMatrix hold_z = column_range(regressors, split, k);
    const DenseMatrix hold_t = column_range(targets, split, k);

    LambdaChoice best{grid[0], std::numeric_limits<double>::infinity()};
    bool any = false;
    for (double lambda : grid) {
        DenseMatrix w;
        try {
            w = ridge_solve(fit_z, fit_t, lambda);
        } catch (const SingularError&) {
            continue;
        }
        const DenseMatrix pred = w * hold_z;
        const double score = nmse(hold_t.transposed(), pred.transposed());
        if (!std::isfinite(score)) continue;
        if (!any || score < best.holdout_nmse) {
            best = {lambda, score};
            any = true;
        }
    }
    if (!any) throw SingularError("select_lambda: no lambda in the grid gave a usable fit");
    return best;
}

void write_readout(std::ostream& out, const ReadoutMap& map) {
    out << "readout " << map.w_out.rows() << ' ' << map.w_out.cols() << ' '
        << (map.with_input ? 1 : 0) << '\n';
    write_rows(out, map.w_out);
}

ReadoutMap read_readout(std::istream& in) {
    std::string tag;
    std::size_t rows = 0, cols = 0;
    int with_input = 1;
    if (!(in >> tag >> rows >> cols >> with_input) || tag != "readout")
        throw ArgumentError("snapshot: bad readout header");
    return ReadoutMap{read_matrix(in, rows, cols), with_input != 0};
}

} // namespace esqn
