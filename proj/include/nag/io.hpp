#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nag/witness.hpp"
#include "nag/zerodim.hpp"

namespace nag {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
/// Significant digits written for extended-precision coordinates.
inline constexpr int kExtendedOutputDigits = 45;

/// "%.17g" rendering; round-trips every finite double.
std::string format_double(double x);
double parse_double(const std::string& s);

Json complex_to_json(Complex z);
Json complex_to_json(const ExtComplex& z);
Complex complex_from_json(const Json& j);
ExtComplex extended_from_json(const Json& j);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, std::size_t cols);

Json solution_to_json(const SolutionPoint& s);
SolutionPoint solution_from_json(const Json& j);

Json solve_to_json(const SolveReport& report, std::uint64_t seed, bool projective);
/// Reads the solutions (and chart, if any) written by solve or refine.
std::vector<SolutionPoint> solutions_from_json(const Json& j, CVector* patch = nullptr);

Json parameter_result_to_json(const ParameterHomotopyResult& r, const std::vector<std::string>& names,
                              std::uint64_t seed);

Json decomposition_to_json(const NumericalVariety& nv);
/// Throws SchemaVersionMismatch or CorruptFile.
NumericalVariety decomposition_from_json(const Json& j);

std::string write_decomposition(const NumericalVariety& nv);
void write_decomposition(const NumericalVariety& nv, const std::string& path);
NumericalVariety read_decomposition_text(const std::string& text);
NumericalVariety read_decomposition(const std::string& path);

/// Whole file contents; throws CorruptFile if unreadable.
std::string read_file(const std::string& path);

}  // namespace nag
