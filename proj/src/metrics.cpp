#include "esqn/metrics.hpp"

#include "esqn/errors.hpp"
#include "esqn/text_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

namespace esqn {

double nmse(const DenseMatrix& targets, const DenseMatrix& predictions) {
    if (targets.rows() != predictions.rows() || targets.cols() != predictions.cols())
        throw DimensionError("nmse: targets and predictions differ in shape");
    const std::size_t k = targets.rows();
    if (k < 2) throw ArgumentError("nmse: need at least two samples");

    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < targets.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < k; ++i) mean += targets(i, j);
        mean /= static_cast<double>(k);
        double col_den = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double e = targets(i, j) - predictions(i, j);
            const double c = targets(i, j) - mean;
            num += e * e;
            col_den += c * c;
        }
        if (!(col_den > 0.0))
            throw DegenerateError("nmse: target dimension " + std::to_string(j) + " is constant");
        den += col_den;
    }
    return num / den;
}

double nmse(std::span<const double> targets, std::span<const double> predictions) {
    return nmse(DenseMatrix(targets.size(), 1, {targets.begin(), targets.end()}),
                DenseMatrix(predictions.size(), 1, {predictions.begin(), predictions.end()}));
}

namespace {

// t_{0.975, dof} for dof = 1..50.
constexpr std::array<double, 50> kT975 = {
    12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912, 2.364624, 2.306004,
    2.262157,  2.228139, 2.200985, 2.178813, 2.160369, 2.144787, 2.131450, 2.119905,
    2.109816,  2.100922, 2.093024, 2.085963, 2.079614, 2.073873, 2.068658, 2.063899,
    2.059539,  2.055529, 2.051831, 2.048407, 2.045230, 2.042272, 2.039513, 2.036933,
    2.034515,  2.032245, 2.030108, 2.028094, 2.026192, 2.024394, 2.022691, 2.021075,
    2.019541,  2.018082, 2.016692, 2.015368, 2.014103, 2.012896, 2.011741, 2.010635,
    2.009575,  2.008559};

Summary summarize_impl(std::span<const TrialResult> results, bool strict) {
    if (results.empty()) throw ArgumentError("summarize: no results");
    Summary s;
    s.series = results.front().series;
    s.model = results.front().model;
    std::vector<double> values;
    std::map<double, std::size_t> lambda_votes;
    for (const auto& r : results) {
        if (r.series != s.series || r.model != s.model)
            throw ArgumentError("summarize: results mix (" + s.series + ", " + s.model +
                                ") with (" + r.series + ", " + r.model + ")");
        if (r.failed) {
            ++s.failed;
            continue;
        }
        values.push_back(r.nmse);
        ++lambda_votes[r.lambda];
    }
    s.n = values.size();
    if (strict && s.n < 2) throw ArgumentError("summarize: need at least two successful trials");
    if (s.n == 0) throw ArgumentError("summarize: every trial failed");

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean_nmse = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean_nmse) * (v - s.mean_nmse);
        const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.ci_halfwidth = t_quantile_975(s.n - 1) * sd / std::sqrt(static_cast<double>(s.n));
    }
    std::size_t best_votes = 0;
    for (const auto& [lambda, votes] : lambda_votes)
        if (votes > best_votes) {
            best_votes = votes;
            s.lambda = lambda;
        }
    return s;
}

} // namespace

double t_quantile_975(std::size_t dof) {
    if (dof == 0) throw ArgumentError("t_quantile_975: dof must be >= 1");
    if (dof <= kT975.size()) return kT975[dof - 1];
    // Cornish-Fisher expansion around the normal quantile; below 1e-5 error past 50 dof.
    const double z = 1.959963984540054;
    const double v = static_cast<double>(dof);
    const double z3 = z * z * z;
    const double z5 = z3 * z * z;
    return z + (z3 + z) / (4 * v) + (5 * z5 + 16 * z3 + 3 * z) / (96 * v * v);
}

Summary summarize(std::span<const TrialResult> results) { return summarize_impl(results, true); }

Summary summarize_lenient(std::span<const TrialResult> results) {
    return summarize_impl(results, false);
}

std::string format_mean_ci(const Summary& s) {
    std::string text = format_real(s.mean_nmse, 4);
    if (s.ci_halfwidth) text += " ±" + format_real(*s.ci_halfwidth, 4);
    return text;
}

void write_summary_csv(std::ostream& out, std::span<const Summary> summaries) {
    out << "series,model,n,mean_nmse,ci_halfwidth,lambda\n";
    for (const auto& s : summaries) {
        out << s.series << ',' << s.model << ',' << s.n << ',' << format_real(s.mean_nmse) << ',';
        if (s.ci_halfwidth) out << format_real(*s.ci_halfwidth);
        out << ',' << format_real(s.lambda) << '\n';
    }
}

void write_results_csv(std::ostream& out, std::span<const TrialResult> results) {
    out << "series,model,trial,seed,nmse,lambda,reservoir_size,status\n";
    for (const auto& r : results) {
        out << r.series << ',' << r.model << ',' << r.trial << ',' << r.seed << ',';
        if (!r.failed) out << format_real(r.nmse);
        out << ',' << format_real(r.lambda) << ',' << r.reservoir_size << ','
            << (r.failed ? "failed" : "ok") << '\n';
    }
}

void write_summary_table(std::ostream& out, std::span<const Summary> summaries) {
    const auto old_flags = out.flags();
    out << std::left << std::setw(10) << "Series" << std::setw(8) << "Model" << std::setw(12)
        << "NMSE" << "CI" << '\n';
    for (const auto& s : summaries) {
        out << std::setw(10) << s.series << std::setw(8) << s.model << std::setw(12)
            << format_real(s.mean_nmse, 4)
            << (s.ci_halfwidth ? "±" + format_real(*s.ci_halfwidth, 4) : std::string("-"))
            << '\n';
    }
    out.flags(old_flags);
}

} // namespace esqn
