#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "nag/errors.hpp"

namespace nag {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Row-major dense matrix over a scalar type T.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = DenseMatrix<Complex>;

template <class T>
auto magnitude(const T& v) {
  using std::abs;
  return abs(v);
}

template <class T>
auto norm_inf(std::span<const T> v) {
  decltype(magnitude(T{})) m = 0;
  for (const auto& x : v) {
    auto a = magnitude(x);
    if (a > m) m = a;
  }
  return m;
}

inline double norm_inf(const CVector& v) { return norm_inf(std::span<const Complex>(v)); }

/// Maximum absolute row sum.
template <class T>
auto norm_inf(const DenseMatrix<T>& a) {
  decltype(magnitude(T{})) m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    decltype(magnitude(T{})) s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += magnitude(a(i, j));
    if (s > m) m = s;
  }
  return m;
}

template <class T>
std::vector<T> multiply(const DenseMatrix<T>& a, std::span<const T> x) {
  if (x.size() != a.cols()) throw DimensionMismatch("matrix-vector size mismatch");
  std::vector<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline CVector multiply(const CMatrix& a, const CVector& x) {
  return multiply(a, std::span<const Complex>(x));
}

/// LU factorization with partial pivoting. Throws SingularMatrix when a pivot
/// falls below `relative_pivot_tol * ‖A‖∞`.
template <class T>
class LuDecomposition {
 public:
  using Real = decltype(magnitude(T{}));

  explicit LuDecomposition(DenseMatrix<T> a, Real relative_pivot_tol = Real(1e-14))
      : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw DimensionMismatch("LU requires a square matrix");
    const Real scale = norm_inf(lu_);
    const Real threshold = relative_pivot_tol * scale;
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    if (n == 0) return;
    if (!(scale > Real(0))) throw SingularMatrix("zero matrix");
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      Real best = magnitude(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        Real v = magnitude(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (!(best > threshold)) throw SingularMatrix("pivot below threshold");
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      const T pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        T factor = lu_(i, k) / pivot;
        lu_(i, k) = factor;
        if (factor == T(0)) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  /// Solves A x = b.
  std::vector<T> solve(std::span<const T> b) const {
    const std::size_t n = size();
    if (b.size() != n) throw DimensionMismatch("rhs size mismatch");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
      x[ii] /= lu_(ii, ii);
    }
    return x;
  }

  /// Solves A^H x = b (conjugate transpose).
  std::vector<T> solve_adjoint(std::span<const T> b) const {
    using std::conj;
    const std::size_t n = size();
    if (b.size() != n) throw DimensionMismatch("rhs size mismatch");
    // P A = L U  =>  A^H = U^H L^H P
    std::vector<T> w(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) w[i] -= conj(lu_(j, i)) * w[j];
      w[i] /= conj(lu_(i, i));
    }
    for (std::size_t ii = n; ii-- > 0;)
      for (std::size_t j = ii + 1; j < n; ++j) w[ii] -= conj(lu_(j, ii)) * w[j];
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = w[i];
    return x;
  }

 private:
  DenseMatrix<T> lu_;
  std::vector<std::size_t> perm_;
};

/// Solves the square system A x = b by LU with partial pivoting.
CVector lin_solve(const CMatrix& a, const CVector& b);

/// Estimate of ‖A‖∞·‖A⁻¹‖∞. Returns +infinity if A is singular.
double condition_estimate(const CMatrix& a);

/// Deterministic 64-bit random stream. Copying an Rng copies its state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits; independent of the standard
  /// library's distribution implementations so streams are portable.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Child stream seeded from this one; advances this stream by one draw.
  Rng fork() {
    std::uint64_t z = next_u64() + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 engine_;
};

/// Random complex number of modulus one with uniformly distributed argument.
Complex random_unit_complex(Rng& rng);

CVector random_unit_vector(std::size_t n, Rng& rng);
CMatrix random_unit_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace nag
