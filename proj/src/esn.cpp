#include "esqn/esn.hpp"

#include "esqn/errors.hpp"
#include "esqn/text_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace esqn {

EsnModel::EsnModel(DenseMatrix w_in, DenseMatrix w_res)
    : w_in_(std::move(w_in)), w_res_(std::move(w_res)), state_(w_res_.rows(), 0.0),
      scratch_(w_res_.rows(), 0.0) {
    if (!w_res_.square()) throw DimensionError("esn: recurrent matrix must be square");
    if (w_in_.rows() != w_res_.rows() || w_in_.cols() < 1)
        throw DimensionError("esn: input matrix must be N_x x (1 + N_a)");
    if (!w_in_.all_finite() || !w_res_.all_finite())
        throw DomainError("esn: non-finite weight");
}

const Vector& EsnModel::update(std::span<const double> input) {
    if (input.size() != n_in())
        throw DimensionError("esn: input has length " + std::to_string(input.size()) +
                             ", expected " + std::to_string(n_in()));
    const std::size_t cols = w_in_.cols();
    for (std::size_t r = 0; r < n_res(); ++r) {
        const auto win = w_in_.row(r);
        double s = win[0];
        for (std::size_t c = 1; c < cols; ++c) s += win[c] * input[c - 1];
        s += dot(w_res_.row(r), state_);
        scratch_[r] = std::tanh(s);
    }
    state_.swap(scratch_);
    return state_;
}

void EsnModel::reset() noexcept { std::fill(state_.begin(), state_.end(), 0.0); }

void EsnModel::set_state(std::span<const double> state) {
    if (state.size() != n_res()) throw DimensionError("esn: state length mismatch");
    state_.assign(state.begin(), state.end());
}

EsnModel esn_init(const EsnConfig& config, SeededRng& rng) {
    const std::size_t n = config.n_res;
    if (n == 0) throw ArgumentError("esn_init: reservoir size must be >= 1");
    if (!(config.density > 0.0 && config.density <= 1.0))
        throw ArgumentError("esn_init: density must be in (0, 1]");
    if (!(config.target_rho > 0.0)) throw ArgumentError("esn_init: target spectral radius must be > 0");
    if (!(config.weight_lo <= config.weight_hi))
        throw ArgumentError("esn_init: weight interval is empty");

    const std::size_t cells = n * n;
    const auto nonzero = static_cast<std::size_t>(std::llround(config.density * static_cast<double>(cells)));
    if (nonzero < 1) throw ArgumentError("esn_init: density * N_x^2 must be >= 1");

    DenseMatrix w_in(n, 1 + config.n_in,
                     rng_uniform(rng, config.weight_lo, config.weight_hi, n * (1 + config.n_in)));
    if (config.bias_weights_fixed_to_one)
        for (std::size_t r = 0; r < n; ++r) w_in(r, 0) = 1.0;

    for (int attempt = 0; attempt < 10; ++attempt) {
        const auto positions = sample_without_replacement(rng, cells, nonzero);
        DenseMatrix w_res(n, n);
        const Vector values = rng_uniform(rng, config.weight_lo, config.weight_hi, nonzero);
        for (std::size_t i = 0; i < nonzero; ++i)
            w_res(positions[i] / n, positions[i] % n) = values[i];

        const double rho = spectral_radius(w_res);
        if (rho > 0.0 && std::isfinite(rho)) {
            w_res *= config.target_rho / rho;
            return EsnModel(std::move(w_in), std::move(w_res));
        }
    }
    throw GenerationError("esn_init: sampled recurrent matrix had zero spectral radius in 10 attempts");
}

void write_snapshot(std::ostream& out, const EsnModel& model) {
    out << "esn " << model.n_in() << ' ' << model.n_res() << '\n';
    out << "w_in\n";
    write_rows(out, model.w_in());
    out << "w_res\n";
    write_rows(out, model.w_res());
    out << "state\n";
    write_row(out, model.state());
}

namespace {

void expect_tag(std::istream& in, const char* tag) {
    std::string token;
    if (!(in >> token) || token != tag)
        throw ArgumentError(std::string("snapshot: expected '") + tag + "', found '" + token + "'");
}

} // namespace

EsnModel read_esn_snapshot(std::istream& in) {
    expect_tag(in, "esn");
    std::size_t n_in = 0, n_res = 0;
    if (!(in >> n_in >> n_res) || n_res == 0) throw ArgumentError("snapshot: bad esn header");
    expect_tag(in, "w_in");
    DenseMatrix w_in = read_matrix(in, n_res, 1 + n_in);
    expect_tag(in, "w_res");
    DenseMatrix w_res = read_matrix(in, n_res, n_res);
    expect_tag(in, "state");
    DenseMatrix state = read_matrix(in, 1, n_res);
    EsnModel model(std::move(w_in), std::move(w_res));
    model.set_state(state.entries());
    return model;
}

} // namespace esqn
