#pragma once

#include "esqn/numerics.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

namespace esqn::randnn {

/// Random Neural Network parameters. w_plus(u, v) is the rate of excitatory
/// spikes sent from neuron v to neuron u (r_v p+_{u,v}); likewise w_minus.
struct RandnnSpec {
    Vector lambda_plus;
    Vector lambda_minus;
    Vector rates;
    DenseMatrix w_plus;
    DenseMatrix w_minus;

    [[nodiscard]] std::size_t size() const noexcept { return rates.size(); }
};

/// Checks shapes, signs, positive rates and total external excitation.
/// With `check_routing` it also requires sum_u (w+_{u,v} + w-_{u,v}) <= r_v
/// for every source neuron v. Throws DimensionError / DomainError / ArgumentError.
void validate(const RandnnSpec& spec, bool check_routing = true);

struct SolverOptions {
    double tol = 1e-12;
    std::size_t max_iter = 10'000;
    /// Initial damping; halved whenever the step size grows.
    double damping = 1.0;
    /// Consecutive iterations with some load >= 1 before giving up as unstable.
    std::size_t unstable_patience = 100;
    bool check_routing = true;
};

struct SteadyState {
    Vector rho;
    bool stable = false;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Damped successive substitution of rho <- T+(rho) / (r + T-(rho)) from rho = 0.
/// Throws ConvergenceError (carrying the last iterate) if max_iter is exhausted.
SteadyState solve_steady_state(const RandnnSpec& spec, const SolverOptions& options = {});

/// max_u |rho_u - T+_u(rho) / (r_u + T-_u(rho))|
double residual(const RandnnSpec& spec, std::span<const double> rho);

/// One application of the load map.
Vector load_map(const RandnnSpec& spec, std::span<const double> rho);

/// Plain-text spec format:
///   N
///   lambda+ (N values)
///   lambda- (N values)
///   rates   (N values)
///   w+      (N rows of N values)
///   w-      (N rows of N values)
RandnnSpec read_spec(std::istream& in);
RandnnSpec read_spec_file(const std::string& path);
void write_spec(std::ostream& out, const RandnnSpec& spec);

} // namespace esqn::randnn
