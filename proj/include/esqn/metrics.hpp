#pragma once

#include "esqn/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace esqn {

/// sum_k sum_j (b - y)^2 / sum_k sum_j (b - mean_j(b))^2 over K x N_b matrices.
/// Throws DegenerateError when some target column is constant.
double nmse(const DenseMatrix& targets, const DenseMatrix& predictions);
double nmse(std::span<const double> targets, std::span<const double> predictions);

struct TrialResult {
    std::string series;
    std::string model;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double nmse = 0.0;
    double lambda = 0.0;
    std::size_t reservoir_size = 0;
    bool failed = false;
    std::string failure; // reason when failed
};

struct Summary {
    std::string series;
    std::string model;
    std::size_t n = 0;
    double mean_nmse = 0.0;
    /// Absent when fewer than two trials succeeded.
    std::optional<double> ci_halfwidth;
    std::size_t failed = 0;
    /// Most frequently selected lambda among successful trials (ties: smaller).
    double lambda = 0.0;
};

/// Two-sided 95% Student-t quantile t_{0.975, dof}; dof >= 1.
double t_quantile_975(std::size_t dof);

/// Mean and 95% CI half-width t_{0.975,n-1} * s / sqrt(n) over successful
/// trials. Requires at least two successful results of one (series, model).
Summary summarize(std::span<const TrialResult> results);

/// Like summarize, but accepts a single success (CI omitted) and reports
/// failures instead of throwing on them.
Summary summarize_lenient(std::span<const TrialResult> results);

/// "mean ±hw"; "mean" alone when the CI is absent.
std::string format_mean_ci(const Summary& s);

/// series,model,n,mean_nmse,ci_halfwidth,lambda
void write_summary_csv(std::ostream& out, std::span<const Summary> summaries);
/// series,model,trial,seed,nmse,lambda,reservoir_size,status
void write_results_csv(std::ostream& out, std::span<const TrialResult> results);
/// Aligned plain-text table: Series | Model | NMSE | CI
void write_summary_table(std::ostream& out, std::span<const Summary> summaries);

} // namespace esqn
