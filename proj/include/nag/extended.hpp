#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "nag/algebra.hpp"

namespace nag {

/// Software floating point with a 50-decimal-digit (168-bit) mantissa.
using ExtReal = boost::multiprecision::cpp_bin_float_50;
using ExtComplex = boost::multiprecision::cpp_complex_50;
using ExtVector = std::vector<ExtComplex>;

inline constexpr int kExtendedPrecisionBits = std::numeric_limits<ExtReal>::digits;
inline constexpr int kHardwarePrecisionBits = std::numeric_limits<double>::digits;

inline ExtComplex to_extended(const Complex& z) { return ExtComplex(ExtReal(z.real()), ExtReal(z.imag())); }

inline Complex to_hardware(const ExtComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline ExtVector to_extended(const CVector& v) {
  ExtVector out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(to_extended(z));
  return out;
}

inline CVector to_hardware(const ExtVector& v) {
  CVector out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(to_hardware(z));
  return out;
}

/// Parses a decimal string exactly into extended precision.
inline ExtReal parse_extended(const std::string& s) { return ExtReal(s); }

/// Decimal rendering with `digits` significant digits, scientific when needed.
inline std::string format_extended(const ExtReal& x, int digits) {
  return x.str(digits, std::ios_base::fmtflags(0));
}

}  // namespace nag
