#pragma once

#include "esqn/numerics.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace esqn {

/// Shortest round-trip decimal ("%.17g"); locale independent.
std::string format_real(double v);
/// Fixed number of significant digits, for human-facing tables.
std::string format_real(double v, int significant);

/// Space-separated values followed by a newline.
void write_row(std::ostream& out, std::span<const double> values);
void write_rows(std::ostream& out, const DenseMatrix& m);

/// Reads rows*cols whitespace-separated reals.
DenseMatrix read_matrix(std::istream& in, std::size_t rows, std::size_t cols);

/// Parses a whole string as a real; false on trailing garbage or empty input.
bool parse_real(std::string_view text, double& out);

} // namespace esqn
