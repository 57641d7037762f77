#pragma once

#include "esqn/numerics.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>

namespace esqn {

struct EsqnConfig {
    std::size_t n_in = 1;
    std::size_t n_res = 80;
    /// Interval for all four weight blocks. Weights are spike rates, so lo >= 0.
    double weight_lo = 0.0;
    double weight_hi = 0.2;
    /// Interval for the initial loads.
    double state_lo = 0.0;
    double state_hi = 1.0;
    double rate_in = 1.0;
    double rate_res = 1.0;
    /// Fraction of nonzero recurrent weights per block; 1 is dense.
    double density = 1.0;
};

/// Weight blocks of an echo state queueing reservoir. Row u, column v holds
/// the spike rate from v (input neuron or reservoir unit) into unit u.
struct EsqnWeights {
    DenseMatrix plus_in;   // N_x x N_a
    DenseMatrix minus_in;  // N_x x N_a
    DenseMatrix plus_res;  // N_x x N_x
    DenseMatrix minus_res; // N_x x N_x
    Vector rates_in;       // N_a
    Vector rates_res;      // N_x
};

/// Reservoir whose state is a vector of neuron loads. Each step applies
///   rho_u <- (sum_v (a_v/r_v) w+_{u,v} + sum_v' rho_v' w+_{u,v'})
///          / (r_u + sum_v (a_v/r_v) w-_{u,v} + sum_v' rho_v' w-_{u,v'})
/// with every right-hand side read from the previous state.
class EsqnModel {
  public:
    EsqnModel(EsqnWeights weights, Vector state);

    [[nodiscard]] std::size_t n_in() const noexcept { return w_.rates_in.size(); }
    [[nodiscard]] std::size_t n_res() const noexcept { return w_.rates_res.size(); }
    [[nodiscard]] const EsqnWeights& weights() const noexcept { return w_; }
    [[nodiscard]] const Vector& state() const noexcept { return state_; }

    /// Number of unit updates that produced a load above 1 since construction.
    [[nodiscard]] std::size_t excursions_above_one() const noexcept { return excursions_; }

    /// Inputs are excitatory arrival rates and must be >= 0.
    const Vector& update(std::span<const double> input);

    /// Replaces the state; entries must be finite and >= 0.
    void set_state(std::span<const double> state);
    /// Redraws the state uniformly on [lo, hi).
    void reset(SeededRng& rng, double lo = 0.0, double hi = 1.0);

  private:
    EsqnWeights w_;
    Vector state_;
    Vector excite_;
    Vector inhibit_;
    Vector input_load_;
    std::size_t excursions_ = 0;
};

/// Draws plus_in, minus_in, plus_res, minus_res (in that order) uniformly on
/// the weight interval, then the initial state.
EsqnModel esqn_init(const EsqnConfig& config, SeededRng& rng);

/// Flat text snapshot, same scheme as the ESN one:
///   esqn <n_in> <n_res>
///   rates_in / rates_res rows, then w_plus_in, w_minus_in, w_plus_res,
///   w_minus_res blocks, then state.
void write_snapshot(std::ostream& out, const EsqnModel& model);
EsqnModel read_esqn_snapshot(std::istream& in);

} // namespace esqn
