#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace esqn {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class ArgumentError : public Error {
  public:
    using Error::Error;
};

// Negative rates, negative loads, negative inputs to a queueing model.
class DomainError : public Error {
  public:
    using Error::Error;
};

class SingularError : public Error {
  public:
    using Error::Error;
};

class DegenerateError : public Error {
  public:
    using Error::Error;
};

class GenerationError : public Error {
  public:
    using Error::Error;
};

// Iterative method did not reach tolerance. Carries the best scalar estimate
// and, for vector-valued solvers, the last iterate.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double best_estimate,
                     std::vector<double> last_iterate = {})
        : Error(what), best_estimate_(best_estimate),
          last_iterate_(std::move(last_iterate)) {}

    [[nodiscard]] double best_estimate() const noexcept { return best_estimate_; }
    [[nodiscard]] const std::vector<double>& last_iterate() const noexcept {
        return last_iterate_;
    }

  private:
    double best_estimate_;
    std::vector<double> last_iterate_;
};

class LoadError : public Error {
  public:
    enum class Kind { missing_file, bad_cell, empty_column, missing_column };

    // row/col are 1-based positions in the file; 0 when not applicable.
    LoadError(Kind kind, const std::string& what, std::size_t row = 0,
              std::size_t col = 0)
        : Error(what), kind_(kind), row_(row), col_(col) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t col() const noexcept { return col_; }

  private:
    Kind kind_;
    std::size_t row_;
    std::size_t col_;
};

} // namespace esqn
