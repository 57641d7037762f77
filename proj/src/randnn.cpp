#include "esqn/randnn.hpp"

#include "esqn/errors.hpp"
#include "esqn/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace esqn::randnn {

namespace {

bool all_nonnegative(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0 && std::isfinite(x); });
}

} // namespace

void validate(const RandnnSpec& spec, bool check_routing) {
    const std::size_t n = spec.size();
    if (n == 0) throw DimensionError("randnn: empty network");
    if (spec.lambda_plus.size() != n || spec.lambda_minus.size() != n)
        throw DimensionError("randnn: external rate vectors must have length " + std::to_string(n));
    for (const auto* w : {&spec.w_plus, &spec.w_minus})
        if (w->rows() != n || w->cols() != n)
            throw DimensionError("randnn: weight matrices must be " + std::to_string(n) + "x" +
                                 std::to_string(n));

    if (!all_nonnegative(spec.lambda_plus) || !all_nonnegative(spec.lambda_minus))
        throw DomainError("randnn: external arrival rates must be >= 0");
    if (!all_nonnegative(spec.w_plus.entries()) || !all_nonnegative(spec.w_minus.entries()))
        throw DomainError("randnn: weights must be >= 0");
    for (std::size_t u = 0; u < n; ++u)
        if (!(spec.rates[u] > 0.0) || !std::isfinite(spec.rates[u]))
            throw DomainError("randnn: firing rate of neuron " + std::to_string(u) +
                              " must be > 0");

    double total = 0.0;
    for (double l : spec.lambda_plus) total += l;
    if (!(total > 0.0))
        throw ArgumentError("randnn: no external excitation; every neuron would be inactive");

    if (check_routing) {
        for (std::size_t v = 0; v < n; ++v) {
            double out = 0.0;
            for (std::size_t u = 0; u < n; ++u) out += spec.w_plus(u, v) + spec.w_minus(u, v);
            // Relative slack absorbs rounding in specs built as r * p.
            if (out > spec.rates[v] * (1.0 + 1e-12))
                throw ArgumentError("randnn: outgoing weight of neuron " + std::to_string(v) +
                                    " (" + std::to_string(out) + ") exceeds its firing rate " +
                                    std::to_string(spec.rates[v]));
        }
    }
}

Vector load_map(const RandnnSpec& spec, std::span<const double> rho) {
    if (rho.size() != spec.size())
        throw DimensionError("randnn: load vector has length " + std::to_string(rho.size()) +
                             ", expected " + std::to_string(spec.size()));
    Vector excite = spec.lambda_plus;
    Vector inhibit = spec.lambda_minus;
    multiply_add(spec.w_plus, rho, excite);
    multiply_add(spec.w_minus, rho, inhibit);
    Vector next(spec.size());
    for (std::size_t u = 0; u < next.size(); ++u)
        next[u] = excite[u] / (spec.rates[u] + inhibit[u]);
    return next;
}

double residual(const RandnnSpec& spec, std::span<const double> rho) {
    const Vector mapped = load_map(spec, rho);
    double worst = 0.0;
    for (std::size_t u = 0; u < mapped.size(); ++u)
        worst = std::max(worst, std::abs(rho[u] - mapped[u]));
    return worst;
}

SteadyState solve_steady_state(const RandnnSpec& spec, const SolverOptions& options) {
    validate(spec, options.check_routing);
    if (!(options.tol > 0.0)) throw ArgumentError("randnn: tol must be > 0");
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        throw ArgumentError("randnn: damping must be in (0, 1]");

    const std::size_t n = spec.size();
    SteadyState result;
    result.rho.assign(n, 0.0);
    double alpha = options.damping;
    double previous_step = std::numeric_limits<double>::infinity();
    std::size_t saturated_run = 0;

    for (std::size_t it = 0; it < options.max_iter; ++it) {
        const Vector mapped = load_map(spec, result.rho);
        double step = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            step = std::max(step, std::abs(mapped[u] - result.rho[u]));

        result.iterations = it;
        result.residual = step;
        if (step < options.tol) {
            result.stable = std::all_of(result.rho.begin(), result.rho.end(),
                                        [](double r) { return r < 1.0; });
            return result;
        }

        if (step > previous_step) alpha = std::max(alpha * 0.5, 1.0 / 1024.0);
        previous_step = step;

        for (std::size_t u = 0; u < n; ++u)
            result.rho[u] = (1.0 - alpha) * result.rho[u] + alpha * mapped[u];

        const bool saturated =
            std::any_of(result.rho.begin(), result.rho.end(), [](double r) { return r >= 1.0; });
        saturated_run = saturated ? saturated_run + 1 : 0;
        if (saturated_run >= options.unstable_patience) {
            result.iterations = it + 1;
            result.residual = residual(spec, result.rho);
            result.stable = false;
            return result;
        }
    }
    throw ConvergenceError("randnn: fixed-point iteration did not converge in " +
                               std::to_string(options.max_iter) + " iterations",
                           result.residual, result.rho);
}

RandnnSpec read_spec(std::istream& in) {
    long long n_raw = 0;
    if (!(in >> n_raw) || n_raw <= 0) throw ArgumentError("randnn spec: bad neuron count header");
    const auto n = static_cast<std::size_t>(n_raw);
    auto read_values = [&](std::size_t count, const char* what) {
        Vector v(count);
        for (auto& x : v)
            if (!(in >> x)) throw ArgumentError(std::string("randnn spec: truncated ") + what);
        return v;
    };
    RandnnSpec spec;
    spec.lambda_plus = read_values(n, "lambda+ row");
    spec.lambda_minus = read_values(n, "lambda- row");
    spec.rates = read_values(n, "rates row");
    spec.w_plus = DenseMatrix(n, n, read_values(n * n, "w+ block"));
    spec.w_minus = DenseMatrix(n, n, read_values(n * n, "w- block"));
    return spec;
}

RandnnSpec read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(LoadError::Kind::missing_file, "cannot open spec file " + path);
    return read_spec(in);
}

void write_spec(std::ostream& out, const RandnnSpec& spec) {
    out << spec.size() << '\n';
    write_row(out, spec.lambda_plus);
    write_row(out, spec.lambda_minus);
    write_row(out, spec.rates);
    write_rows(out, spec.w_plus);
    write_rows(out, spec.w_minus);
}

} // namespace esqn::randnn
