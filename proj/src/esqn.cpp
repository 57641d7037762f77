#include "esqn/esqn.hpp"

#include "esqn/errors.hpp"
#include "esqn/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace esqn {

namespace {

void require_nonnegative(const DenseMatrix& m, const char* name) {
    for (double v : m.entries())
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError(std::string("esqn: ") + name + " has a negative or non-finite weight");
}

void require_shape(const DenseMatrix& m, std::size_t rows, std::size_t cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols)
        throw DimensionError(std::string("esqn: ") + name + " must be " + std::to_string(rows) +
                             "x" + std::to_string(cols));
}

} // namespace

EsqnModel::EsqnModel(EsqnWeights weights, Vector state)
    : w_(std::move(weights)), state_(std::move(state)) {
    const std::size_t na = n_in();
    const std::size_t nx = n_res();
    if (nx == 0) throw DimensionError("esqn: reservoir must have at least one unit");
    require_shape(w_.plus_in, nx, na, "w_plus_in");
    require_shape(w_.minus_in, nx, na, "w_minus_in");
    require_shape(w_.plus_res, nx, nx, "w_plus_res");
    require_shape(w_.minus_res, nx, nx, "w_minus_res");
    require_nonnegative(w_.plus_in, "w_plus_in");
    require_nonnegative(w_.minus_in, "w_minus_in");
    require_nonnegative(w_.plus_res, "w_plus_res");
    require_nonnegative(w_.minus_res, "w_minus_res");
    for (const auto* rates : {&w_.rates_in, &w_.rates_res})
        for (double r : *rates)
            if (!(r > 0.0) || !std::isfinite(r))
                throw DomainError("esqn: firing rates must be finite and > 0");
    Vector initial = std::move(state_);
    state_.clear();
    set_state(initial);
    excite_.resize(nx);
    inhibit_.resize(nx);
    input_load_.resize(na);
}

const Vector& EsqnModel::update(std::span<const double> input) {
    if (input.size() != n_in())
        throw DimensionError("esqn: input has length " + std::to_string(input.size()) +
                             ", expected " + std::to_string(n_in()));
    for (std::size_t v = 0; v < input.size(); ++v) {
        if (!(input[v] >= 0.0) || !std::isfinite(input[v]))
            throw DomainError("esqn: input " + std::to_string(v) +
                              " is not a nonnegative rate");
        input_load_[v] = input[v] / w_.rates_in[v];
    }

    std::fill(excite_.begin(), excite_.end(), 0.0);
    std::fill(inhibit_.begin(), inhibit_.end(), 0.0);
    multiply_add(w_.plus_in, input_load_, excite_);
    multiply_add(w_.plus_res, state_, excite_);
    multiply_add(w_.minus_in, input_load_, inhibit_);
    multiply_add(w_.minus_res, state_, inhibit_);

    // All sums above read the previous state; only now is it overwritten.
    for (std::size_t u = 0; u < n_res(); ++u) {
        state_[u] = excite_[u] / (w_.rates_res[u] + inhibit_[u]);
        if (state_[u] > 1.0) ++excursions_;
    }
    return state_;
}

void EsqnModel::set_state(std::span<const double> state) {
    if (state.size() != n_res())
        throw DimensionError("esqn: state has length " + std::to_string(state.size()) +
                             ", expected " + std::to_string(n_res()));
    for (double v : state)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("esqn: loads must be finite and >= 0");
    state_.assign(state.begin(), state.end());
}

void EsqnModel::reset(SeededRng& rng, double lo, double hi) {
    if (lo < 0.0) throw DomainError("esqn: load interval must be nonnegative");
    state_ = rng_uniform(rng, lo, hi, n_res());
}

namespace {

DenseMatrix draw_block(SeededRng& rng, std::size_t rows, std::size_t cols, double lo, double hi,
                       double density) {
    DenseMatrix block(rows, cols, rng_uniform(rng, lo, hi, rows * cols));
    if (density < 1.0) {
        const std::size_t cells = rows * cols;
        const auto keep = static_cast<std::size_t>(std::llround(density * static_cast<double>(cells)));
        std::vector<bool> kept(cells, false);
        for (auto pos : sample_without_replacement(rng, cells, keep)) kept[pos] = true;
        for (std::size_t pos = 0; pos < cells; ++pos)
            if (!kept[pos]) block(pos / cols, pos % cols) = 0.0;
    }
    return block;
}

} // namespace

EsqnModel esqn_init(const EsqnConfig& config, SeededRng& rng) {
    if (config.n_res == 0) throw ArgumentError("esqn_init: reservoir size must be >= 1");
    if (config.weight_lo < 0.0) throw ArgumentError("esqn_init: weights are rates; lower bound must be >= 0");
    if (!(config.weight_lo <= config.weight_hi)) throw ArgumentError("esqn_init: weight interval is empty");
    if (config.state_lo < 0.0 || !(config.state_lo <= config.state_hi))
        throw ArgumentError("esqn_init: bad initial load interval");
    if (!(config.density > 0.0 && config.density <= 1.0))
        throw ArgumentError("esqn_init: density must be in (0, 1]");

    const std::size_t na = config.n_in;
    const std::size_t nx = config.n_res;
    const double lo = config.weight_lo;
    const double hi = config.weight_hi;

    EsqnWeights w;
    w.plus_in = draw_block(rng, nx, na, lo, hi, 1.0);
    w.minus_in = draw_block(rng, nx, na, lo, hi, 1.0);
    w.plus_res = draw_block(rng, nx, nx, lo, hi, config.density);
    w.minus_res = draw_block(rng, nx, nx, lo, hi, config.density);
    w.rates_in.assign(na, config.rate_in);
    w.rates_res.assign(nx, config.rate_res);
    Vector state = rng_uniform(rng, config.state_lo, config.state_hi, nx);
    return EsqnModel(std::move(w), std::move(state));
}

void write_snapshot(std::ostream& out, const EsqnModel& model) {
    const auto& w = model.weights();
    out << "esqn " << model.n_in() << ' ' << model.n_res() << '\n';
    out << "rates_in\n";
    write_row(out, w.rates_in);
    out << "rates_res\n";
    write_row(out, w.rates_res);
    out << "w_plus_in\n";
    write_rows(out, w.plus_in);
    out << "w_minus_in\n";
    write_rows(out, w.minus_in);
    out << "w_plus_res\n";
    write_rows(out, w.plus_res);
    out << "w_minus_res\n";
    write_rows(out, w.minus_res);
    out << "state\n";
    write_row(out, model.state());
}

EsqnModel read_esqn_snapshot(std::istream& in) {
    auto expect = [&](const char* tag) {
        std::string token;
        if (!(in >> token) || token != tag)
            throw ArgumentError(std::string("snapshot: expected '") + tag + "', found '" + token + "'");
    };
    expect("esqn");
    std::size_t na = 0, nx = 0;
    if (!(in >> na >> nx) || nx == 0) throw ArgumentError("snapshot: bad esqn header");
    EsqnWeights w;
    expect("rates_in");
    w.rates_in = read_matrix(in, 1, na).entries();
    expect("rates_res");
    w.rates_res = read_matrix(in, 1, nx).entries();
    expect("w_plus_in");
    w.plus_in = read_matrix(in, nx, na);
    expect("w_minus_in");
    w.minus_in = read_matrix(in, nx, na);
    expect("w_plus_res");
    w.plus_res = read_matrix(in, nx, nx);
    expect("w_minus_res");
    w.minus_res = read_matrix(in, nx, nx);
    expect("state");
    Vector state = read_matrix(in, 1, nx).entries();
    return EsqnModel(std::move(w), std::move(state));
}

} // namespace esqn
