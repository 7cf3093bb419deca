#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nag/cli.hpp"
#include "nag/io.hpp"
#include "nag/parser.hpp"
#include "nag/witness.hpp"
#include "nag/zerodim.hpp"

namespace py = pybind11;
using namespace nag;

namespace {

ProblemSpec load(const std::string& text) { return parse_input_file(text); }

bool resolve_projective(const ProblemSpec& spec, std::optional<bool> projective) {
  if (!projective) return spec.declared_projective;
  if (!*projective && spec.declared_projective)
    throw UsageError("system declares projective but projective=False was requested");
  return *projective;
}

py::dict solve_json(const SolveReport& r, std::uint64_t seed, bool projective) {
  return py::module_::import("json").attr("loads")(solve_to_json(r, seed, projective).dump());
}

std::vector<std::string> extended_strings(const SolutionPoint& s, int digits) {
  std::vector<std::string> out;
  for (const auto& z : s.extended)
    out.push_back(format_extended(z.real(), digits) + (z.imag() < 0 ? "-" : "+") +
                  format_extended(abs(z.imag()), digits) + "I");
  return out;
}

}  // namespace

PYBIND11_MODULE(nagpy, m) {
  m.doc() = "Numerical algebraic geometry: homotopy solving and witness sets";

  static py::exception<Error> error(m, "NagError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.kind(), e.what()).ptr());
    }
  });

  py::class_<PolySystem>(m, "System")
      .def_property_readonly("variables", &PolySystem::variables)
      .def_property_readonly("parameters", &PolySystem::parameters)
      .def("__len__", &PolySystem::size)
      .def("evaluate", [](const PolySystem& f, const CVector& z, const CVector& p) { return evaluate(f, z, p); },
           py::arg("point"), py::arg("params") = CVector{})
      .def("jacobian",
           [](const PolySystem& f, const CVector& z) {
             CMatrix j = jacobian_eval(f, z);
             std::vector<CVector> rows(j.rows(), CVector(j.cols()));
             for (std::size_t r = 0; r < j.rows(); ++r)
               for (std::size_t c = 0; c < j.cols(); ++c) rows[r][c] = j(r, c);
             return rows;
           })
      .def("is_homogeneous", [](const PolySystem& f) { return is_homogeneous(f); })
      .def("source", [](const PolySystem& f, bool projective) { return to_source(f, projective); },
           py::arg("projective") = false);

  py::class_<SolutionPoint>(m, "Solution")
      .def_readonly("coordinates", &SolutionPoint::coordinates)
      .def_readonly("condition_number", &SolutionPoint::condition_number)
      .def_readonly("cycle_number", &SolutionPoint::cycle_number)
      .def_readonly("function_residual", &SolutionPoint::function_residual)
      .def_readonly("last_t", &SolutionPoint::last_t)
      .def_readonly("max_precision_bits", &SolutionPoint::max_precision_bits)
      .def_readonly("newton_residual", &SolutionPoint::newton_residual)
      .def_readonly("solution_number", &SolutionPoint::solution_number)
      .def_readonly("multiplicity", &SolutionPoint::multiplicity)
      .def("extended", &extended_strings, py::arg("digits") = 30);

  py::class_<WitnessSet>(m, "WitnessSet")
      .def_readonly("dimension", &WitnessSet::dimension)
      .def_readonly("index", &WitnessSet::component_index)
      .def_property_readonly("degree", &WitnessSet::degree)
      .def_readonly("points", &WitnessSet::points);

  py::class_<NumericalVariety>(m, "Variety")
      .def_property_readonly("dimension", &NumericalVariety::dimension)
      .def_property_readonly("component_count", &NumericalVariety::component_count)
      .def_readonly("seed", &NumericalVariety::seed)
      .def_readonly("projective", &NumericalVariety::is_projective)
      .def("component", &NumericalVariety::component, py::return_value_policy::reference_internal)
      .def("components",
           [](const NumericalVariety& nv) {
             std::vector<WitnessSet> all;
             for (const auto& [dim, list] : nv.components) all.insert(all.end(), list.begin(), list.end());
             return all;
           })
      .def("describe", [](const NumericalVariety& nv) { return describe(nv); })
      .def("to_json", [](const NumericalVariety& nv) { return write_decomposition(nv); })
      .def("__repr__", [](const NumericalVariety& nv) { return describe(nv); });

  m.def("parse", [](const std::string& text) { return load(text).system; }, py::arg("text"));

  m.def(
      "solve",
      [](const std::string& text, std::uint64_t seed, std::optional<bool> projective) {
        auto spec = load(text);
        SolveOptions opts;
        opts.seed = seed;
        opts.projective = resolve_projective(spec, projective);
        return zero_dim_solve_report(spec.system, opts).solutions;
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("projective") = py::none());

  m.def(
      "solve_json",
      [](const std::string& text, std::uint64_t seed, std::optional<bool> projective) {
        auto spec = load(text);
        SolveOptions opts;
        opts.seed = seed;
        opts.projective = resolve_projective(spec, projective);
        return solve_json(zero_dim_solve_report(spec.system, opts), seed, opts.projective);
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("projective") = py::none());

  m.def(
      "refine",
      [](const std::string& text, const std::vector<CVector>& points, int digits) {
        auto spec = load(text);
        std::vector<SolutionPoint> sols;
        for (const auto& p : points) {
          SolutionPoint s;
          s.coordinates = p;
          sols.push_back(s);
        }
        return refine_solutions(spec.system, sols, digits);
      },
      py::arg("text"), py::arg("points"), py::arg("digits") = 20);

  m.def(
      "param",
      [](const std::string& text, const std::vector<CVector>& tuples, std::uint64_t seed) {
        auto spec = load(text);
        SolveOptions opts;
        opts.seed = seed;
        auto r = parameter_homotopy(spec.system, spec.system.parameters(), tuples, opts);
        std::vector<std::vector<SolutionPoint>> out;
        for (const auto& run : r.runs) out.push_back(run.solutions);
        return out;
      },
      py::arg("text"), py::arg("values"), py::arg("seed") = 0);

  m.def(
      "decompose",
      [](const std::string& text, std::uint64_t seed, std::optional<bool> projective) {
        auto spec = load(text);
        DecompositionOptions opts;
        opts.seed = seed;
        opts.projective = resolve_projective(spec, projective);
        return numerical_irreducible_decomposition(spec.system, opts);
      },
      py::arg("text"), py::arg("seed") = 0, py::arg("projective") = py::none());

  m.def("load_decomposition", &read_decomposition_text, py::arg("json_text"));

  m.def(
      "membership",
      [](const NumericalVariety& nv, const std::vector<CVector>& points) {
        return membership_test(nv, points, nv.seed);
      },
      py::arg("variety"), py::arg("points"));

  m.def(
      "sample",
      [](const NumericalVariety& nv, std::size_t dim, std::size_t index, std::size_t count, std::uint64_t seed) {
        Rng rng(seed);
        return sample(nv.component(dim, index), count, rng);
      },
      py::arg("variety"), py::arg("dim"), py::arg("index"), py::arg("count") = 1, py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        auto o = cli::dispatch(args);
        return py::make_tuple(o.exit_code, o.out, o.err);
      },
      py::arg("args"));
}
