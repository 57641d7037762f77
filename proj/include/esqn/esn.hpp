#pragma once

#include "esqn/numerics.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>

namespace esqn {

struct EsnConfig {
    std::size_t n_in = 1;
    std::size_t n_res = 80;
    /// Fraction of nonzero recurrent weights.
    double density = 0.15;
    double target_rho = 0.95;
    /// Interval for nonzero recurrent weights and all input weights.
    double weight_lo = -0.5;
    double weight_hi = 0.5;
    /// Literal reading of "first rows of w_in contain ones": the bias
    /// column of w_in is set to 1 instead of being drawn.
    bool bias_weights_fixed_to_one = false;
};

/// Baseline tanh echo state reservoir.
///   x(t) = tanh(w_in [1; a(t)] + w_res x(t-1))
class EsnModel {
  public:
    EsnModel(DenseMatrix w_in, DenseMatrix w_res);

    [[nodiscard]] std::size_t n_in() const noexcept { return w_in_.cols() - 1; }
    [[nodiscard]] std::size_t n_res() const noexcept { return w_res_.rows(); }
    [[nodiscard]] const DenseMatrix& w_in() const noexcept { return w_in_; }
    [[nodiscard]] const DenseMatrix& w_res() const noexcept { return w_res_; }
    [[nodiscard]] const Vector& state() const noexcept { return state_; }

    const Vector& update(std::span<const double> input);
    void reset() noexcept;
    void set_state(std::span<const double> state);

  private:
    DenseMatrix w_in_;
    DenseMatrix w_res_;
    Vector state_;
    Vector scratch_;
};

/// Samples a reservoir: exactly round(density * N^2) recurrent entries at
/// uniformly random positions, rescaled to the target spectral radius.
EsnModel esn_init(const EsnConfig& config, SeededRng& rng);

/// Flat text snapshot:
///   esn <n_in> <n_res>
///   w_in  then N_x rows of 1+N_a values
///   w_res then N_x rows of N_x values
///   state then one row of N_x values
void write_snapshot(std::ostream& out, const EsnModel& model);
EsnModel read_esn_snapshot(std::istream& in);

} // namespace esqn
