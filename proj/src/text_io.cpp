#include "esqn/text_io.hpp"

#include "esqn/errors.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

namespace esqn {

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string format_real(double v, int significant) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant);
    return {buf, res.ptr};
}

void write_row(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ' ';
        out << format_real(values[i]);
    }
    out << '\n';
}

void write_rows(std::ostream& out, const DenseMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) write_row(out, m.row(r));
}

DenseMatrix read_matrix(std::istream& in, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    std::string token;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            double v = 0.0;
            if (!(in >> token) || !parse_real(token, v))
                throw ArgumentError("matrix block: bad or missing entry at (" + std::to_string(r) +
                                    ", " + std::to_string(c) + ")");
            m(r, c) = v;
        }
    return m;
}

bool parse_real(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() &&
           (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

} // namespace esqn
