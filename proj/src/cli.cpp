#include "nag/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nag/io.hpp"
#include "nag/parser.hpp"

namespace nag::cli {

namespace {

struct Request {
  std::string file;
  bool projective = false;
  bool affine = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string solutions;
  int digits = 0;
  std::string values;
  std::string decomposition;
  std::vector<std::string> points;
  std::size_t dim = 0;
  std::size_t index = 0;
  std::size_t count = 0;
};

ProblemSpec load_problem(const std::string& path) {
  return parse_input_file(read_file(path), path);
}

bool resolve_projective(const ProblemSpec& spec, const Request& r) {
  if (r.projective && r.affine) throw UsageError("--projective and --affine are mutually exclusive");
  if (r.affine && spec.declared_projective)
    throw UsageError("--affine conflicts with the 'projective;' statement in " + r.file);
  return r.projective || spec.declared_projective;
}

Json run_solve(const Request& r) {
  auto spec = load_problem(r.file);
  SolveOptions opts;
  opts.projective = resolve_projective(spec, r);
  opts.seed = r.seed;
  auto report = zero_dim_solve_report(spec.system, opts);
  return solve_to_json(report, r.seed, opts.projective);
}

Json run_posdim(const Request& r) {
  auto spec = load_problem(r.file);
  DecompositionOptions opts;
  opts.projective = resolve_projective(spec, r);
  opts.seed = r.seed;
  auto nv = numerical_irreducible_decomposition(spec.system, opts);
  Json j = decomposition_to_json(nv);
  j["summary"] = describe(nv);
  return j;
}

Json run_refine(const Request& r) {
  auto spec = load_problem(r.file);
  Json sol_json;
  try {
    sol_json = Json::parse(read_file(r.solutions));
  } catch (const Json::exception& e) {
    throw CorruptFile(std::string("solutions file is not valid JSON: ") + e.what());
  }
  CVector patch;
  auto points = solutions_from_json(sol_json, &patch);
  const bool projective = resolve_projective(spec, r) || !patch.empty();
  if (projective && patch.empty())
    throw UsageError("projective solutions need the 'patch' recorded by solve");
  auto refined = refine_solutions(spec.system, points, r.digits, patch);
  Json sols = Json::array();
  for (const auto& s : refined) sols.push_back(solution_to_json(s));
  Json out{{"mode", "refine"}, {"digits", r.digits}, {"projective", projective}};
  if (projective) out["patch"] = vector_to_json(patch);
  out["solutions"] = std::move(sols);
  return out;
}

Json run_param(const Request& r) {
  auto spec = load_problem(r.file);
  if (spec.declared_projective) throw UsageError("param does not support projective systems");
  std::vector<CVector> tuples;
  std::stringstream ss(r.values);
  std::string piece;
  while (std::getline(ss, piece, ';')) tuples.push_back(parse_complex_list(piece));
  if (tuples.empty()) throw UsageError("--values lists no parameter tuples");
  SolveOptions opts;
  opts.seed = r.seed;
  const auto& names = spec.system.parameters();
  auto result = parameter_homotopy(spec.system, names, tuples, opts);
  return parameter_result_to_json(result, names, r.seed);
}

NumericalVariety load_matching_decomposition(const Request& r) {
  auto spec = load_problem(r.file);
  auto nv = read_decomposition(r.decomposition);
  if (!(spec.system == nv.system))
    throw DimensionMismatch("the system in " + r.file + " differs from the one stored in " + r.decomposition);
  if (spec.declared_projective != nv.is_projective)
    throw DimensionMismatch("projective setting of " + r.file + " differs from the decomposition");
  return nv;
}

Json run_member(const Request& r) {
  auto nv = load_matching_decomposition(r);
  std::vector<CVector> points;
  for (const auto& p : r.points) points.push_back(parse_complex_list(p));
  auto hits = membership_test(nv, points, nv.seed);
  Json out = Json::array();
  for (const auto& list : hits) {
    Json row = Json::array();
    for (const auto& [dim, idx] : list) row.push_back(std::to_string(dim) + "/" + std::to_string(idx));
    out.push_back(std::move(row));
  }
  return out;
}

Json run_sample(const Request& r) {
  auto nv = load_matching_decomposition(r);
  const auto& ws = nv.component(r.dim, r.index);
  Rng rng(r.seed);
  auto pts = sample(ws, r.count, rng);
  Json samples = Json::array();
  for (const auto& p : pts) samples.push_back(vector_to_json(p));
  return Json{{"mode", "sample"},
              {"seed", r.seed},
              {"dim", r.dim},
              {"index", r.index},
              {"samples", std::move(samples)}};
}

std::string error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() + "\n";
}

std::string error_json(const ParseError& e) {
  return Json{{"error",
               {{"kind", e.kind()},
                {"message", e.message()},
                {"line", e.line()},
                {"column", e.column()},
                {"token", e.token()}}}}
             .dump() +
         "\n";
}

}  // namespace

Outcome dispatch(const std::vector<std::string>& args) {
  Request r;
  CLI::App app{"Numerical algebraic geometry by homotopy continuation", "nag"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("FILE", r.file, "Problem file")->required()->check(CLI::ExistingFile);
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", r.out, "Write JSON here instead of stdout"); };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", r.seed, "Random seed"); };
  auto add_proj = [&](CLI::App* sub) {
    sub->add_flag("--projective", r.projective, "Treat the system as homogeneous on projective space");
    sub->add_flag("--affine", r.affine, "Insist on affine solving");
  };

  auto* solve = app.add_subcommand("solve", "Isolated solutions by total-degree homotopy");
  add_file(solve);
  add_proj(solve);
  add_seed(solve);
  add_out(solve);

  auto* posdim = app.add_subcommand("posdim", "Numerical irreducible decomposition");
  add_file(posdim);
  add_proj(posdim);
  add_seed(posdim);
  add_out(posdim);

  auto* refine = app.add_subcommand("refine", "Sharpen solutions with extended-precision Newton steps");
  add_file(refine);
  refine->add_option("--solutions", r.solutions, "Solutions JSON from solve")->required()->check(CLI::ExistingFile);
  refine->add_option("--digits", r.digits, "Correct digits wanted")->required()->check(CLI::Range(1, 30));
  add_proj(refine);
  add_out(refine);

  auto* param = app.add_subcommand("param", "Two-stage parameter homotopy");
  add_file(param);
  param->add_option("--values", r.values, "Parameter tuples, e.g. \"1,1,1;2,3,4\"")->required();
  add_seed(param);
  add_out(param);

  auto* member = app.add_subcommand("member", "Component membership of points");
  add_file(member);
  member->add_option("--decomposition", r.decomposition, "Decomposition JSON from posdim")
      ->required()
      ->check(CLI::ExistingFile);
  member->add_option("--point", r.points, "Point as \"c1,c2,...\" (repeatable)")->required();
  add_out(member);

  auto* samp = app.add_subcommand("sample", "Sample points on a component");
  add_file(samp);
  samp->add_option("--decomposition", r.decomposition, "Decomposition JSON from posdim")
      ->required()
      ->check(CLI::ExistingFile);
  samp->add_option("--dim", r.dim, "Component dimension")->required();
  samp->add_option("--index", r.index, "Component index within the dimension")->required();
  samp->add_option("--count", r.count, "Number of samples")->required()->check(CLI::PositiveNumber);
  add_seed(samp);
  add_out(samp);

  Outcome result;
  std::ostringstream out, err;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    result.exit_code = app.exit(e, out, err);
    result.out = out.str();
    return result;
  } catch (const CLI::CallForAllHelp& e) {
    result.exit_code = app.exit(e, out, err);
    result.out = out.str();
    return result;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    result.exit_code = 1;
    result.err = error_json("UsageError", e.what()) + err.str();
    return result;
  }

  try {
    Json payload;
    if (solve->parsed()) payload = run_solve(r);
    else if (posdim->parsed()) payload = run_posdim(r);
    else if (refine->parsed()) payload = run_refine(r);
    else if (param->parsed()) payload = run_param(r);
    else if (member->parsed()) payload = run_member(r);
    else payload = run_sample(r);
    std::string body = payload.dump(2) + "\n";
    if (!r.out.empty()) {
      std::ofstream f(r.out, std::ios::binary);
      if (!f) throw UsageError("cannot write '" + r.out + "'");
      f << body;
    } else {
      result.out = std::move(body);
    }
  } catch (const ParseError& e) {
    result.exit_code = 1;
    result.err = error_json(e);
  } catch (const Error& e) {
    result.exit_code = e.numerical() ? 2 : 1;
    result.err = error_json(e.kind(), e.what());
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.err = error_json("InternalError", e.what());
  }
  return result;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto o = dispatch(args);
  std::cout << o.out;
  std::cerr << o.err;
  return o.exit_code;
}

}  // namespace nag::cli
