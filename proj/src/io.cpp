#include "nag/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nag/parser.hpp"

namespace nag {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) throw CorruptFile("empty number");
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw CorruptFile("malformed number '" + s + "'");
  return v;
}

Json complex_to_json(Complex z) { return Json{{"re", format_double(z.real())}, {"im", format_double(z.imag())}}; }

Json complex_to_json(const ExtComplex& z) {
  return Json{{"re", format_extended(z.real(), kExtendedOutputDigits)},
              {"im", format_extended(z.imag(), kExtendedOutputDigits)}};
}

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw CorruptFile(std::string("expected an object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw CorruptFile(std::string("missing field '") + name + "'");
  return *it;
}

const std::string& text(const Json& j, const char* what) {
  if (!j.is_string()) throw CorruptFile(std::string(what) + " must be a decimal string");
  return j.get_ref<const std::string&>();
}

template <class T>
T integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw CorruptFile(std::string(what) + " must be an integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (j.is_number_unsigned()) return static_cast<T>(j.get<std::uint64_t>());
    if (j.get<std::int64_t>() < 0) throw CorruptFile(std::string(what) + " must be nonnegative");
  }
  return static_cast<T>(j.get<std::int64_t>());
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw CorruptFile(std::string(what) + " must be an array");
  return j;
}

}  // namespace

Complex complex_from_json(const Json& j) {
  return {parse_double(text(field(j, "re"), "re")), parse_double(text(field(j, "im"), "im"))};
}

ExtComplex extended_from_json(const Json& j) {
  try {
    return ExtComplex(parse_extended(text(field(j, "re"), "re")), parse_extended(text(field(j, "im"), "im")));
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw CorruptFile(std::string("malformed extended number: ") + e.what());
  }
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

CVector vector_from_json(const Json& j) {
  CVector out;
  for (const auto& e : array(j, "vector")) out.push_back(complex_from_json(e));
  return out;
}

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

CMatrix matrix_from_json(const Json& j, std::size_t cols) {
  array(j, "matrix");
  CMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto row = vector_from_json(j[i]);
    if (row.size() != cols) throw CorruptFile("matrix row has wrong length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = row[k];
  }
  return m;
}

Json solution_to_json(const SolutionPoint& s) {
  Json coords = Json::array();
  if (!s.extended.empty())
    for (const auto& z : s.extended) coords.push_back(complex_to_json(z));
  else
    coords = vector_to_json(s.coordinates);
  return Json{{"coordinates", std::move(coords)},
              {"conditionNumber", format_double(s.condition_number)},
              {"cycleNumber", s.cycle_number},
              {"functionResidual", format_double(s.function_residual)},
              {"lastT", format_double(s.last_t)},
              {"maxPrecisionBits", s.max_precision_bits},
              {"newtonResidual", format_double(s.newton_residual)},
              {"solutionNumber", s.solution_number},
              {"multiplicity", s.multiplicity}};
}

SolutionPoint solution_from_json(const Json& j) {
  SolutionPoint s;
  s.max_precision_bits = integer<int>(field(j, "maxPrecisionBits"), "maxPrecisionBits");
  const Json& coords = array(field(j, "coordinates"), "coordinates");
  if (s.max_precision_bits > kHardwarePrecisionBits) {
    for (const auto& c : coords) s.extended.push_back(extended_from_json(c));
    s.coordinates = to_hardware(s.extended);
  } else {
    s.coordinates = vector_from_json(coords);
  }
  s.condition_number = parse_double(text(field(j, "conditionNumber"), "conditionNumber"));
  s.cycle_number = integer<int>(field(j, "cycleNumber"), "cycleNumber");
  s.function_residual = parse_double(text(field(j, "functionResidual"), "functionResidual"));
  s.last_t = parse_double(text(field(j, "lastT"), "lastT"));
  s.newton_residual = parse_double(text(field(j, "newtonResidual"), "newtonResidual"));
  s.solution_number = integer<std::size_t>(field(j, "solutionNumber"), "solutionNumber");
  if (j.contains("multiplicity")) s.multiplicity = integer<std::size_t>(j["multiplicity"], "multiplicity");
  return s;
}

Json solve_to_json(const SolveReport& report, std::uint64_t seed, bool projective) {
  Json sols = Json::array();
  for (const auto& s : report.solutions) sols.push_back(solution_to_json(s));
  Json out{{"mode", "solve"}, {"seed", seed}, {"projective", projective}};
  if (projective) out["patch"] = vector_to_json(report.patch);
  out["pathCount"] = report.paths.size();
  out["solutions"] = std::move(sols);
  return out;
}

std::vector<SolutionPoint> solutions_from_json(const Json& j, CVector* patch) {
  const Json* list = &j;
  if (j.is_object()) {
    list = &field(j, "solutions");
    if (patch) *patch = j.contains("patch") ? vector_from_json(j["patch"]) : CVector{};
  } else if (patch) {
    patch->clear();
  }
  std::vector<SolutionPoint> out;
  for (const auto& s : array(*list, "solutions")) {
    out.push_back(solution_from_json(s));
    out.back().is_projective = patch && !patch->empty();
  }
  return out;
}

Json parameter_result_to_json(const ParameterHomotopyResult& r, const std::vector<std::string>& names,
                              std::uint64_t seed) {
  Json start = Json::array();
  for (const auto& s : r.start_solutions) start.push_back(solution_to_json(s));
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json sols = Json::array();
    for (const auto& s : run.solutions) sols.push_back(solution_to_json(s));
    runs.push_back(Json{{"values", vector_to_json(run.values)}, {"pathCount", run.path_count}, {"solutions", sols}});
  }
  return Json{{"mode", "param"},
              {"seed", seed},
              {"parameters", names},
              {"startParameters", vector_to_json(r.start_params)},
              {"startSolutions", std::move(start)},
              {"runs", std::move(runs)}};
}

Json decomposition_to_json(const NumericalVariety& nv) {
  Json comps = Json::array();
  for (const auto& [dim, list] : nv.components)
    for (const auto& ws : list) {
      Json pts = Json::array();
      for (const auto& p : ws.points) pts.push_back(vector_to_json(p));
      comps.push_back(Json{{"dim", dim},
                           {"index", ws.component_index},
                           {"degree", ws.degree()},
                           {"slice", {{"coefficients", matrix_to_json(ws.slice.coefficients)},
                                      {"constants", vector_to_json(ws.slice.constants)}}},
                           {"randomization", matrix_to_json(ws.randomization)},
                           {"points", std::move(pts)}});
    }
  Json out{{"schemaVersion", kSchemaVersion},
           {"seed", nv.seed},
           {"system", to_source(nv.system, nv.is_projective)},
           {"projective", nv.is_projective}};
  if (nv.is_projective) out["patch"] = vector_to_json(nv.patch);
  out["components"] = std::move(comps);
  return out;
}

NumericalVariety decomposition_from_json(const Json& j) {
  if (!j.is_object()) throw CorruptFile("decomposition must be a JSON object");
  const Json& version = field(j, "schemaVersion");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kSchemaVersion)
    throw SchemaVersionMismatch("unsupported decomposition schema version " + version.dump());
  NumericalVariety nv;
  nv.seed = integer<std::uint64_t>(field(j, "seed"), "seed");
  const Json& proj = field(j, "projective");
  if (!proj.is_boolean()) throw CorruptFile("projective must be a boolean");
  nv.is_projective = proj.get<bool>();
  ProblemSpec spec;
  try {
    spec = parse_input_file(text(field(j, "system"), "system"), "<decomposition>");
  } catch (const ParseError& e) {
    throw CorruptFile(std::string("embedded system does not parse: ") + e.what());
  }
  nv.system = std::move(spec.system);
  const std::size_t n = nv.system.num_variables();
  if (nv.is_projective) {
    nv.patch = vector_from_json(field(j, "patch"));
    if (nv.patch.size() != n) throw CorruptFile("chart has wrong length");
  }
  for (const auto& c : array(field(j, "components"), "components")) {
    WitnessSet ws;
    ws.system = nv.system;
    ws.is_projective = nv.is_projective;
    ws.patch = nv.patch;
    ws.dimension = integer<std::size_t>(field(c, "dim"), "dim");
    ws.component_index = integer<std::size_t>(field(c, "index"), "index");
    const Json& slice = field(c, "slice");
    ws.slice.coefficients = matrix_from_json(field(slice, "coefficients"), n);
    ws.slice.constants = vector_from_json(field(slice, "constants"));
    if (ws.slice.coefficients.rows() != ws.dimension || ws.slice.constants.size() != ws.dimension)
      throw CorruptFile("slice codimension does not match component dimension");
    ws.randomization = matrix_from_json(field(c, "randomization"), nv.system.size());
    const std::size_t n_eff = n - (nv.is_projective ? 1 : 0);
    if (ws.dimension >= n_eff || ws.randomization.rows() != n_eff - ws.dimension)
      throw CorruptFile("randomization shape does not match component dimension");
    for (const auto& p : array(field(c, "points"), "points")) {
      ws.points.push_back(vector_from_json(p));
      if (ws.points.back().size() != n) throw CorruptFile("witness point has wrong length");
    }
    if (ws.points.empty()) throw CorruptFile("component has no witness points");
    if (integer<std::size_t>(field(c, "degree"), "degree") != ws.points.size())
      throw CorruptFile("degree does not match point count");
    auto& list = nv.components[ws.dimension];
    if (ws.component_index != list.size()) throw CorruptFile("component indices are not consecutive");
    list.push_back(std::move(ws));
  }
  return nv;
}

std::string write_decomposition(const NumericalVariety& nv) { return decomposition_to_json(nv).dump(2) + "\n"; }

void write_decomposition(const NumericalVariety& nv, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorruptFile("cannot open '" + path + "' for writing");
  out << write_decomposition(nv);
  if (!out) throw CorruptFile("failed writing '" + path + "'");
}

NumericalVariety read_decomposition_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw CorruptFile(std::string("decomposition is not valid JSON: ") + e.what());
  }
  return decomposition_from_json(j);
}

NumericalVariety read_decomposition(const std::string& path) { return read_decomposition_text(read_file(path)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptFile("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nag
