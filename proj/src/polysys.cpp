#include "nag/polysys.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

namespace nag {

namespace {

std::uint32_t degree_of(const Exponents& e, std::size_t leading) {
  std::uint32_t d = 0;
  for (std::size_t k = 0; k < leading && k < e.size(); ++k) d += e[k];
  return d;
}

// Descending total degree, then descending lexicographic exponents.
bool canonical_less(const Exponents& a, const Exponents& b) {
  auto da = degree_of(a, a.size());
  auto db = degree_of(b, b.size());
  if (da != db) return da > db;
  return a > b;
}

}  // namespace

Polynomial Polynomial::constant(std::size_t arity, Complex c) {
  Polynomial p(arity);
  if (c != Complex(0, 0)) p.terms_.push_back({c, Exponents(arity, 0)});
  return p;
}

Polynomial Polynomial::coordinate(std::size_t arity, std::size_t index) {
  if (index >= arity) throw DimensionMismatch("coordinate index out of range");
  Polynomial p(arity);
  Exponents e(arity, 0);
  e[index] = 1;
  p.terms_.push_back({Complex(1, 0), std::move(e)});
  return p;
}

Polynomial Polynomial::from_terms(std::size_t arity, std::vector<Term> terms) {
  Polynomial p(arity);
  for (auto& t : terms)
    if (t.exponents.size() != arity) throw DimensionMismatch("term exponent length mismatch");
  p.terms_ = std::move(terms);
  p.canonicalize();
  return p;
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return canonical_less(a.exponents, b.exponents); });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents)
      merged.back().coefficient += t.coefficient;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const Term& t) { return t.coefficient == Complex(0, 0); });
  terms_ = std::move(merged);
}

std::uint32_t Polynomial::total_degree(std::size_t leading) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, degree_of(t.exponents, leading));
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.arity_ != arity_) throw DimensionMismatch("polynomial arity mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(Complex scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  std::erase_if(terms_, [](const Term& t) { return t.coefficient == Complex(0, 0); });
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.arity_ != b.arity_) throw DimensionMismatch("polynomial arity mismatch");
  std::map<Exponents, Complex> acc;
  Exponents e(a.arity_);
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      for (std::size_t k = 0; k < a.arity_; ++k) e[k] = ta.exponents[k] + tb.exponents[k];
      acc[e] += ta.coefficient * tb.coefficient;
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [ex, c] : acc) terms.push_back({c, ex});
  return Polynomial::from_terms(a.arity_, std::move(terms));
}

Polynomial Polynomial::pow(std::uint32_t exponent) const {
  Polynomial result = constant(arity_, Complex(1, 0));
  Polynomial base = *this;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (arity_ != other.arity_ || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coefficient != other.terms_[i].coefficient ||
        terms_[i].exponents != other.terms_[i].exponents)
      return false;
  return true;
}

PolySystem::PolySystem(std::vector<std::string> variables, std::vector<std::string> parameters,
                       std::vector<Polynomial> polys)
    : variables_(std::move(variables)), parameters_(std::move(parameters)), polys_(std::move(polys)) {
  if (variables_.empty()) throw InvalidSystem("a system needs at least one variable");
  if (polys_.empty()) throw InvalidSystem("a system needs at least one equation");
  for (const auto& p : polys_)
    if (p.arity() != arity()) throw DimensionMismatch("polynomial arity does not match the system");
}

CVector evaluate(const PolySystem& sys, const CVector& z, const CVector& params) {
  CVector out;
  evaluate_system<Complex>(sys, z, params, &out, nullptr);
  return out;
}

CMatrix jacobian_eval(const PolySystem& sys, const CVector& z, const CVector& params) {
  CMatrix jac;
  evaluate_system<Complex>(sys, z, params, nullptr, &jac);
  return jac;
}

DegreeInfo degrees(const PolySystem& sys) {
  DegreeInfo info;
  for (const auto& p : sys.polys()) {
    auto d = p.total_degree(sys.num_variables());
    info.degrees.push_back(d);
    if (d != 0 && info.bezout > UINT64_MAX / d)
      info.bezout = UINT64_MAX;
    else
      info.bezout *= d;
  }
  return info;
}

bool is_homogeneous(const PolySystem& sys) {
  const std::size_t nv = sys.num_variables();
  for (const auto& p : sys.polys()) {
    if (p.is_zero()) continue;
    auto d = degree_of(p.terms().front().exponents, nv);
    for (const auto& t : p.terms())
      if (degree_of(t.exponents, nv) != d) return false;
  }
  return true;
}

PolySystem specialize(const PolySystem& sys, const CVector& param_values) {
  const std::size_t nv = sys.num_variables();
  const std::size_t np = sys.num_parameters();
  if (param_values.size() != np) throw DimensionMismatch("specialize: wrong number of parameter values");
  std::vector<Polynomial> out;
  out.reserve(sys.size());
  for (const auto& p : sys.polys()) {
    std::vector<Term> terms;
    terms.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
      Complex c = t.coefficient;
      for (std::size_t k = 0; k < np; ++k)
        for (std::uint32_t e = 0; e < t.exponents[nv + k]; ++e) c *= param_values[k];
      terms.push_back({c, Exponents(t.exponents.begin(), t.exponents.begin() + nv)});
    }
    out.push_back(Polynomial::from_terms(nv, std::move(terms)));
  }
  return PolySystem(sys.variables(), {}, std::move(out));
}

PolySystem randomize(const PolySystem& sys, const CMatrix& mix) {
  if (mix.cols() != sys.size()) throw DimensionMismatch("randomize: matrix columns must equal equation count");
  std::vector<Polynomial> rows;
  for (std::size_t i = 0; i < mix.rows(); ++i) {
    Polynomial r(sys.arity());
    for (std::size_t j = 0; j < mix.cols(); ++j) r += sys.polys()[j] * mix(i, j);
    rows.push_back(std::move(r));
  }
  return PolySystem(sys.variables(), sys.parameters(), std::move(rows));
}

PolySystem append(const PolySystem& sys, std::vector<Polynomial> extra) {
  std::vector<Polynomial> polys = sys.polys();
  for (auto& p : extra) polys.push_back(std::move(p));
  return PolySystem(sys.variables(), sys.parameters(), std::move(polys));
}

CVector LinearSlice::evaluate(const CVector& z) const {
  CVector v = multiply(coefficients, z);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += constants[i];
  return v;
}

std::vector<Polynomial> LinearSlice::polynomials(std::size_t arity) const {
  if (arity < ambient()) throw DimensionMismatch("slice has more coordinates than the system");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < codim(); ++i) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < ambient(); ++j) {
      Exponents e(arity, 0);
      e[j] = 1;
      terms.push_back({coefficients(i, j), std::move(e)});
    }
    terms.push_back({constants[i], Exponents(arity, 0)});
    out.push_back(Polynomial::from_terms(arity, std::move(terms)));
  }
  return out;
}

namespace {

bool rows_independent(const CMatrix& a) {
  // Gram matrix A A^H must be well conditioned.
  CMatrix gram(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) {
      Complex s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * std::conj(a(j, k));
      gram(i, j) = s;
    }
  return condition_estimate(gram) < 1e12;
}

}  // namespace

LinearSlice random_slice(std::size_t num_variables, std::size_t codim, Rng& rng) {
  if (codim == 0 || codim > num_variables)
    throw DimensionMismatch("random_slice: codimension must lie in [1, N]");
  for (;;) {
    LinearSlice s{random_unit_matrix(codim, num_variables, rng), random_unit_vector(codim, rng)};
    if (rows_independent(s.coefficients)) return s;
  }
}

LinearSlice slice_through(const CVector& point, std::size_t codim, Rng& rng) {
  const std::size_t n = point.size();
  if (codim == 0 || codim > n) throw DimensionMismatch("slice_through: codimension must lie in [1, N]");
  for (;;) {
    CMatrix a = random_unit_matrix(codim, n, rng);
    if (!rows_independent(a)) continue;
    CVector c = multiply(a, point);
    for (auto& v : c) v = -v;
    return {std::move(a), std::move(c)};
  }
}

Polynomial patch_polynomial(const CVector& patch, std::size_t arity) {
  std::vector<Term> terms;
  for (std::size_t j = 0; j < patch.size(); ++j) {
    Exponents e(arity, 0);
    e[j] = 1;
    terms.push_back({patch[j], std::move(e)});
  }
  terms.push_back({Complex(-1, 0), Exponents(arity, 0)});
  return Polynomial::from_terms(arity, std::move(terms));
}

PatchedSystem affine_patch(const PolySystem& sys, Rng& rng) {
  if (!is_homogeneous(sys)) throw NotHomogeneous("affine_patch: system is not homogeneous");
  CVector a = random_unit_vector(sys.num_variables(), rng);
  Polynomial eq = patch_polynomial(a, sys.arity());
  return {append(sys, {std::move(eq)}), std::move(a)};
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_complex_literal(Complex c) {
  if (c.imag() == 0) return fmt_double(c.real());
  if (c.real() == 0) return fmt_double(c.imag()) + "*I";
  std::string s = "(" + fmt_double(c.real());
  if (std::signbit(c.imag()))
    s += "-" + fmt_double(-c.imag());
  else
    s += "+" + fmt_double(c.imag());
  return s + "*I)";
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
  if (names.size() != p.arity()) throw DimensionMismatch("to_string: name list does not match arity");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Complex c = t.coefficient;
    bool negative = c.imag() == 0 && std::signbit(c.real());
    if (negative) c = -c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t k = 0; k < p.arity(); ++k) {
      if (!t.exponents[k]) continue;
      if (!mono.empty()) mono += "*";
      mono += names[k];
      if (t.exponents[k] > 1) mono += "^" + std::to_string(t.exponents[k]);
    }
    if (mono.empty())
      out += format_complex_literal(c);
    else if (c == Complex(1, 0))
      out += mono;
    else
      out += format_complex_literal(c) + "*" + mono;
  }
  return out;
}

std::string to_source(const PolySystem& sys, bool projective) {
  std::vector<std::string> names = sys.variables();
  names.insert(names.end(), sys.parameters().begin(), sys.parameters().end());
  std::set<std::string> taken(names.begin(), names.end());
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  std::string out = "vars " + join(sys.variables()) + ";\n";
  if (sys.num_parameters()) out += "params " + join(sys.parameters()) + ";\n";
  if (projective) out += "projective;\n";
  std::string prefix = "eq";
  auto clashes = [&](const std::string& pre) {
    for (std::size_t i = 0; i < sys.size(); ++i)
      if (taken.count(pre + std::to_string(i + 1))) return true;
    return false;
  };
  while (clashes(prefix)) prefix = "_" + prefix;
  for (std::size_t i = 0; i < sys.size(); ++i)
    out += prefix + std::to_string(i + 1) + " = " + to_string(sys.polys()[i], names) + ";\n";
  return out;
}

}  // namespace nag
