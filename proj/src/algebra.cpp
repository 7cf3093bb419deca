#include "nag/algebra.hpp"

#include <numbers>

namespace nag {

CVector lin_solve(const CMatrix& a, const CVector& b) {
  if (a.rows() != a.cols()) throw DimensionMismatch("lin_solve: matrix is not square");
  if (b.size() != a.rows()) throw DimensionMismatch("lin_solve: rhs size mismatch");
  LuDecomposition<Complex> lu(a);
  return lu.solve(b);
}

namespace {

double norm_one(const CVector& v) {
  double s = 0;
  for (const auto& x : v) s += std::abs(x);
  return s;
}

// Hager/Higham estimate of ‖B‖₁ for B = A^{-H}, which equals ‖A⁻¹‖∞.
double inverse_inf_norm_estimate(const LuDecomposition<Complex>& lu) {
  const std::size_t n = lu.size();
  CVector x(n, Complex(1.0 / static_cast<double>(n), 0.0));
  double estimate = 0;
  for (int iter = 0; iter < 5; ++iter) {
    CVector y = lu.solve_adjoint(x);
    estimate = std::max(estimate, norm_one(y));
    CVector sign(n);
    for (std::size_t i = 0; i < n; ++i) {
      double m = std::abs(y[i]);
      sign[i] = m > 0 ? y[i] / m : Complex(1, 0);
    }
    CVector z = lu.solve(sign);
    std::size_t j = 0;
    double zmax = 0;
    Complex zx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        j = i;
      }
      zx += std::conj(z[i]) * x[i];
    }
    if (iter > 0 && zmax <= zx.real()) break;
    std::fill(x.begin(), x.end(), Complex(0, 0));
    x[j] = 1;
  }
  return estimate;
}

}  // namespace

double condition_estimate(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("condition_estimate: matrix is not square");
  if (a.rows() == 0) return 1.0;
  try {
    LuDecomposition<Complex> lu(a);
    double k = norm_inf(a) * inverse_inf_norm_estimate(lu);
    if (!std::isfinite(k)) return std::numeric_limits<double>::infinity();
    return std::max(k, 1.0);
  } catch (const SingularMatrix&) {
    return std::numeric_limits<double>::infinity();
  }
}

Complex random_unit_complex(Rng& rng) {
  double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {std::cos(theta), std::sin(theta)};
}

CVector random_unit_vector(std::size_t n, Rng& rng) {
  CVector v(n);
  for (auto& x : v) x = random_unit_complex(rng);
  return v;
}

CMatrix random_unit_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_unit_complex(rng);
  return m;
}

}  // namespace nag
