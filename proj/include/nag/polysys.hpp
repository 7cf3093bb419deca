#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nag/algebra.hpp"

namespace nag {

using Exponents = std::vector<std::uint32_t>;

struct Term {
  Complex coefficient;
  Exponents exponents;
};

/// Sparse multivariate polynomial over `arity` ambient coordinates
/// (variables followed by parameters). Terms are kept in a canonical order:
/// descending total degree, then descending lexicographic exponents. No two
/// terms share an exponent vector and no stored coefficient is zero.
class Polynomial {
 public:
  explicit Polynomial(std::size_t arity = 0) : arity_(arity) {}

  static Polynomial constant(std::size_t arity, Complex c);
  static Polynomial coordinate(std::size_t arity, std::size_t index);
  /// Combines like terms and drops exact zeros.
  static Polynomial from_terms(std::size_t arity, std::vector<Term> terms);

  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Total degree counting only the first `leading` coordinates.
  std::uint32_t total_degree(std::size_t leading) const;
  std::uint32_t total_degree() const { return total_degree(arity_); }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(Complex scale);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * Complex(-1, 0); }
  Polynomial pow(std::uint32_t exponent) const;

  bool operator==(const Polynomial& other) const;

  /// Value at `point` (length = arity).
  template <class T>
  T evaluate(std::span<const T> point) const;

  /// Value and full gradient over all ambient coordinates.
  template <class T>
  T evaluate_with_gradient(std::span<const T> point, std::span<T> gradient) const;

 private:
  void canonicalize();

  template <class T>
  std::vector<std::vector<T>> power_table(std::span<const T> point) const;

  std::size_t arity_;
  std::vector<Term> terms_;
};

/// f: C^N -> C^n, with optional parameters appended to each exponent vector.
class PolySystem {
 public:
  PolySystem() = default;
  PolySystem(std::vector<std::string> variables, std::vector<std::string> parameters,
             std::vector<Polynomial> polys);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }
  const std::vector<Polynomial>& polys() const noexcept { return polys_; }
  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_parameters() const noexcept { return parameters_.size(); }
  std::size_t size() const noexcept { return polys_.size(); }
  std::size_t arity() const noexcept { return variables_.size() + parameters_.size(); }

  bool operator==(const PolySystem&) const = default;

 private:
  std::vector<std::string> variables_;
  std::vector<std::string> parameters_;
  std::vector<Polynomial> polys_;
};

/// Evaluates the system, and optionally its Jacobians with respect to
/// variables (n×N) and parameters (n×P), in any complex scalar type.
template <class T>
void evaluate_system(const PolySystem& sys, std::span<const T> z, std::span<const T> params,
                     std::vector<T>* values, DenseMatrix<T>* jac_vars,
                     DenseMatrix<T>* jac_params = nullptr);

CVector evaluate(const PolySystem& sys, const CVector& z, const CVector& params = {});
CMatrix jacobian_eval(const PolySystem& sys, const CVector& z, const CVector& params = {});

struct DegreeInfo {
  std::vector<std::uint32_t> degrees;
  /// Product of the degrees, saturating at UINT64_MAX.
  std::uint64_t bezout = 1;
};

DegreeInfo degrees(const PolySystem& sys);
bool is_homogeneous(const PolySystem& sys);
PolySystem specialize(const PolySystem& sys, const CVector& param_values);

/// Rows of R·f for an r×n matrix R; variables and parameters unchanged.
PolySystem randomize(const PolySystem& sys, const CMatrix& mix);
/// Appends equations (arity must match).
PolySystem append(const PolySystem& sys, std::vector<Polynomial> extra);

/// Affine-linear equations L(z) = A z + c, one per row.
struct LinearSlice {
  CMatrix coefficients;
  CVector constants;

  std::size_t codim() const noexcept { return constants.size(); }
  std::size_t ambient() const noexcept { return coefficients.cols(); }
  CVector evaluate(const CVector& z) const;
  /// Each row as a Polynomial over `arity` coordinates (first ambient() are variables).
  std::vector<Polynomial> polynomials(std::size_t arity) const;

  bool operator==(const LinearSlice& o) const {
    return coefficients.data() == o.coefficients.data() && constants == o.constants &&
           coefficients.rows() == o.coefficients.rows();
  }
};

/// Random slice with unit-modulus coefficients and constants; rows independent.
LinearSlice random_slice(std::size_t num_variables, std::size_t codim, Rng& rng);
/// Random unit-modulus coefficients, constants chosen so that L(point) = 0.
LinearSlice slice_through(const CVector& point, std::size_t codim, Rng& rng);

struct PatchedSystem {
  PolySystem system;
  /// Coefficients a of the appended chart equation Σ aᵢzᵢ − 1.
  CVector patch;
};

/// Appends a random affine chart Σ aᵢzᵢ = 1 to a homogeneous system.
PatchedSystem affine_patch(const PolySystem& sys, Rng& rng);
Polynomial patch_polynomial(const CVector& patch, std::size_t arity);

/// Human-readable rendering that re-parses to an identical term list.
std::string to_string(const Polynomial& p, const std::vector<std::string>& names);
/// Complete input-file text for a system.
std::string to_source(const PolySystem& sys, bool projective);
std::string format_complex_literal(Complex c);

// ---------------------------------------------------------------------------

template <class T>
std::vector<std::vector<T>> Polynomial::power_table(std::span<const T> point) const {
  std::vector<std::uint32_t> max_exp(arity_, 0);
  for (const auto& t : terms_)
    for (std::size_t k = 0; k < arity_; ++k) max_exp[k] = std::max(max_exp[k], t.exponents[k]);
  std::vector<std::vector<T>> table(arity_);
  for (std::size_t k = 0; k < arity_; ++k) {
    table[k].resize(max_exp[k] + 1);
    table[k][0] = T(1);
    for (std::uint32_t e = 1; e <= max_exp[k]; ++e) table[k][e] = table[k][e - 1] * point[k];
  }
  return table;
}

template <class T>
T Polynomial::evaluate(std::span<const T> point) const {
  if (point.size() != arity_) throw DimensionMismatch("polynomial evaluation: wrong point length");
  auto table = power_table(point);
  T sum(0);
  for (const auto& t : terms_) {
    T v(t.coefficient.real(), t.coefficient.imag());
    for (std::size_t k = 0; k < arity_; ++k)
      if (t.exponents[k]) v *= table[k][t.exponents[k]];
    sum += v;
  }
  return sum;
}

template <class T>
T Polynomial::evaluate_with_gradient(std::span<const T> point, std::span<T> gradient) const {
  if (point.size() != arity_ || gradient.size() != arity_)
    throw DimensionMismatch("polynomial evaluation: wrong point length");
  auto table = power_table(point);
  for (auto& g : gradient) g = T(0);
  T sum(0);
  for (const auto& t : terms_) {
    const T c(t.coefficient.real(), t.coefficient.imag());
    T v = c;
    for (std::size_t k = 0; k < arity_; ++k)
      if (t.exponents[k]) v *= table[k][t.exponents[k]];
    sum += v;
    for (std::size_t j = 0; j < arity_; ++j) {
      const std::uint32_t ej = t.exponents[j];
      if (!ej) continue;
      T d = c * T(static_cast<double>(ej)) * table[j][ej - 1];
      for (std::size_t k = 0; k < arity_; ++k)
        if (k != j && t.exponents[k]) d *= table[k][t.exponents[k]];
      gradient[j] += d;
    }
  }
  return sum;
}

template <class T>
void evaluate_system(const PolySystem& sys, std::span<const T> z, std::span<const T> params,
                     std::vector<T>* values, DenseMatrix<T>* jac_vars, DenseMatrix<T>* jac_params) {
  const std::size_t nv = sys.num_variables();
  const std::size_t np = sys.num_parameters();
  if (z.size() != nv) throw DimensionMismatch("point has wrong number of coordinates");
  if (params.size() != np) throw DimensionMismatch("wrong number of parameter values");
  std::vector<T> point(nv + np);
  std::copy(z.begin(), z.end(), point.begin());
  std::copy(params.begin(), params.end(), point.begin() + nv);
  const std::size_t n = sys.size();
  if (values) values->assign(n, T(0));
  if (jac_vars) *jac_vars = DenseMatrix<T>(n, nv);
  if (jac_params) *jac_params = DenseMatrix<T>(n, np);
  const bool need_grad = jac_vars || jac_params;
  std::vector<T> grad(nv + np);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = sys.polys()[i];
    T v = need_grad ? p.evaluate_with_gradient(std::span<const T>(point), std::span<T>(grad))
                    : p.evaluate(std::span<const T>(point));
    if (values) (*values)[i] = v;
    if (jac_vars)
      for (std::size_t j = 0; j < nv; ++j) (*jac_vars)(i, j) = grad[j];
    if (jac_params)
      for (std::size_t j = 0; j < np; ++j) (*jac_params)(i, j) = grad[nv + j];
  }
}

}  // namespace nag
