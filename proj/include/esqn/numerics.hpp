#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace esqn {

using Vector = std::vector<double>;

/// Dense row-major matrix of finite reals.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Builds from nested rows; every row must have the same length.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] const std::vector<double>& entries() const noexcept { return data_; }

    [[nodiscard]] DenseMatrix transposed() const;
    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] std::size_t count_nonzero() const noexcept;

    DenseMatrix& operator*=(double s);
    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix m);

/// y = m x
Vector multiply(const DenseMatrix& m, std::span<const double> x);
/// y += m x
void multiply_add(const DenseMatrix& m, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// SplitMix64 generator. Integer arithmetic only, so draw sequences are
/// identical on every platform:
///   state += 0x9E3779B97F4A7C15
///   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SeededRng {
  public:
    using result_type = std::uint64_t;

    explicit SeededRng(std::uint64_t seed) noexcept : seed_(seed), state_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 bits of resolution.
    double next_unit() noexcept;
    /// Uniform integer on [0, bound); bound > 0. Lemire-style rejection.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    // UniformRandomBitGenerator surface
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next_u64(); }

  private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

/// Independent stream seed for (master, index); not a sequential draw, so
/// stream i does not depend on how many other streams exist.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(SeededRng& rng, std::size_t n, std::size_t k);

/// n independent draws on [lo, hi). lo == hi yields lo exactly.
Vector rng_uniform(SeededRng& rng, double lo, double hi, std::size_t n);

inline constexpr double kSpectralTol = 1e-10;
inline constexpr std::size_t kSpectralMaxIter = 10'000;

/// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const DenseMatrix& m, double tol = kSpectralTol,
                       std::size_t max_iter = kSpectralMaxIter);

/// W minimizing sum_k ||T_k - W Z_k||^2 + lambda ||W||_F^2, where columns of
/// `regressors` (D x K) are Z_k and columns of `targets` (N_b x K) are T_k.
/// Returns N_b x D.
DenseMatrix ridge_solve(const DenseMatrix& regressors, const DenseMatrix& targets,
                        double lambda);

/// Solves A X = B for symmetric positive definite A via Cholesky.
/// Throws SingularError when A is not numerically positive definite.
DenseMatrix cholesky_solve(const DenseMatrix& a, const DenseMatrix& b);

} // namespace esqn
