#include "esqn/numerics.hpp"

#include "esqn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace esqn {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("entry count " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t DenseMatrix::count_nonzero() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matrix product: inner dimensions " + std::to_string(a.cols()) +
                             " and " + std::to_string(b.rows()));
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
        }
    }
    return c;
}

DenseMatrix operator*(double s, DenseMatrix m) {
    m *= s;
    return m;
}

Vector multiply(const DenseMatrix& m, std::span<const double> x) {
    Vector y(m.rows(), 0.0);
    multiply_add(m, x, y);
    return y;
}

void multiply_add(const DenseMatrix& m, std::span<const double> x, std::span<double> y) {
    if (m.cols() != x.size() || m.rows() != y.size())
        throw DimensionError("matrix-vector product: " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " against vector of length " +
                             std::to_string(x.size()));
    for (std::size_t r = 0; r < m.rows(); ++r) y[r] += dot(m.row(r), x);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::uint64_t SeededRng::next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SeededRng::next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::next_below(std::uint64_t bound) noexcept {
    // Rejection on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    SeededRng mixer(master ^ (index * 0xD1B54A32D192ED03ULL));
    mixer.next_u64();
    return mixer.next_u64();
}

std::vector<std::size_t> sample_without_replacement(SeededRng& rng, std::size_t n,
                                                   std::size_t k) {
    if (k > n) throw ArgumentError("sample_without_replacement: k > n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.next_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

Vector rng_uniform(SeededRng& rng, double lo, double hi, std::size_t n) {
    if (!(lo <= hi))
        throw ArgumentError("rng_uniform: lo (" + std::to_string(lo) + ") > hi (" +
                            std::to_string(hi) + ")");
    Vector out(n);
    const double width = hi - lo;
    for (auto& v : out) v = lo + width * rng.next_unit();
    return out;
}

double spectral_radius(const DenseMatrix& m, double tol, std::size_t max_iter) {
    if (!m.square())
        throw DimensionError("spectral_radius: matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    if (!(tol > 0.0)) throw ArgumentError("spectral_radius: tol must be positive");
    if (!m.all_finite()) throw DomainError("spectral_radius: non-finite entry");
    if (m.rows() == 0) return 0.0;

    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        view(m.entries().data(), n, n);
    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    // Eigen scales this per-row budget by the matrix size.
    solver.setMaxIterations(static_cast<Eigen::Index>(std::max<std::size_t>(1, max_iter)));
    solver.compute(view, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        double best = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            double s = 0.0;
            for (double v : m.row(r)) s += std::abs(v);
            best = std::max(best, s);
        }
        throw ConvergenceError("spectral_radius: eigenvalue iteration did not converge", best);
    }
    double radius = 0.0;
    for (const auto& ev : solver.eigenvalues()) radius = std::max(radius, std::abs(ev));
    return radius;
}

DenseMatrix cholesky_solve(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.rows();
    if (!a.square() || b.rows() != n) throw DimensionError("cholesky_solve: shape mismatch");

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const double pivot_floor =
        std::max(max_diag, 1.0) * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > pivot_floor))
            throw SingularError("normal equations are singular (pivot " + std::to_string(j) +
                                "); use a positive ridge lambda");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    DenseMatrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

namespace {

// Gram matrix G = M M^T, accumulated row by row.
DenseMatrix gram(const DenseMatrix& m) {
    DenseMatrix g(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = dot(m.row(i), m.row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

} // namespace

DenseMatrix ridge_solve(const DenseMatrix& regressors, const DenseMatrix& targets,
                        double lambda) {
    const std::size_t d = regressors.rows();
    const std::size_t k = regressors.cols();
    if (d == 0 || k == 0) throw DimensionError("ridge_solve: empty regressor matrix");
    if (targets.cols() != k)
        throw DimensionError("ridge_solve: " + std::to_string(k) + " regressor columns but " +
                             std::to_string(targets.cols()) + " target columns");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ArgumentError("ridge_solve: lambda must be finite and >= 0");
    if (!regressors.all_finite() || !targets.all_finite())
        throw DomainError("ridge_solve: non-finite entry");

    if (d <= k) {
        // (Z Z^T + lambda I) W^T = Z T^T
        DenseMatrix a = gram(regressors);
        for (std::size_t i = 0; i < d; ++i) a(i, i) += lambda;
        DenseMatrix rhs = regressors * targets.transposed();
        return cholesky_solve(a, rhs).transposed();
    }
    // Fewer samples than regressors: W = T (Z^T Z + lambda I)^{-1} Z^T
    const DenseMatrix zt = regressors.transposed();
    DenseMatrix a = gram(zt);
    for (std::size_t i = 0; i < k; ++i) a(i, i) += lambda;
    DenseMatrix x = cholesky_solve(a, targets.transposed()); // K x N_b
    return (regressors * x).transposed();
}

} // namespace esqn
