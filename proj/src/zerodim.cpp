#include "nag/zerodim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nag {

StartData total_degree_start(const PolySystem& f) {
  const std::size_t n = f.num_variables();
  if (f.size() != n) throw NotSquare("total_degree_start: system is not square");
  if (f.num_parameters()) throw DimensionMismatch("total_degree_start: system has unspecialized parameters");
  auto info = degrees(f);
  std::vector<Polynomial> g;
  for (std::size_t i = 0; i < n; ++i) {
    if (info.degrees[i] == 0) throw InvalidSystem("total_degree_start: constant equation");
    Exponents e(n, 0);
    e[i] = info.degrees[i];
    g.push_back(Polynomial::from_terms(n, {{Complex(1, 0), e}, {Complex(-1, 0), Exponents(n, 0)}}));
  }
  StartData sd{PolySystem(f.variables(), {}, std::move(g)), {}};

  std::vector<std::vector<Complex>> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = info.degrees[i];
    for (std::uint32_t k = 0; k < d; ++k) {
      if (k == 0) {
        roots[i].push_back({1, 0});
        continue;
      }
      double theta = 2.0 * std::numbers::pi * k / d;
      roots[i].push_back({std::cos(theta), std::sin(theta)});
    }
  }
  std::vector<std::uint32_t> idx(n, 0);
  for (;;) {
    CVector p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = roots[i][idx[i]];
    sd.start_points.push_back(std::move(p));
    std::size_t i = n;
    while (i-- > 0) {
      if (++idx[i] < info.degrees[i]) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return sd;
}

std::size_t SolveReport::count(PathStatus s) const {
  return static_cast<std::size_t>(std::count_if(paths.begin(), paths.end(), [s](const PathResult& r) { return r.status == s; }));
}

namespace {

CVector comparison_form(const CVector& z, bool projective) {
  if (!projective || z.empty()) return z;
  std::size_t best = 0;
  for (std::size_t i = 1; i < z.size(); ++i)
    if (std::abs(z[i]) > std::abs(z[best])) best = i;
  CVector out(z);
  if (std::abs(z[best]) == 0) return out;
  for (auto& v : out) v /= z[best];
  return out;
}

double distance(const CVector& a, const CVector& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

SolutionPoint from_path(const PathResult& r, bool projective) {
  SolutionPoint s;
  s.coordinates = r.endpoint;
  s.condition_number = r.condition_number;
  s.cycle_number = r.cycle_number;
  s.function_residual = r.function_residual;
  s.last_t = r.last_t;
  s.max_precision_bits = r.max_precision_bits;
  s.newton_residual = r.newton_residual;
  s.is_projective = projective;
  return s;
}

std::vector<SolutionPoint> cluster(std::vector<SolutionPoint> items, double tol) {
  std::vector<SolutionPoint> reps;
  std::vector<CVector> keys;
  for (auto& s : items) {
    CVector key = comparison_form(s.coordinates, s.is_projective);
    bool merged = false;
    for (std::size_t j = 0; j < reps.size(); ++j) {
      if (keys[j].size() == key.size() && distance(keys[j], key) < tol) {
        reps[j].multiplicity += s.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) {
      keys.push_back(std::move(key));
      reps.push_back(std::move(s));
    }
  }
  for (std::size_t i = 0; i < reps.size(); ++i) reps[i].solution_number = i;
  return reps;
}

}  // namespace

std::vector<SolutionPoint> dedupe(const std::vector<PathResult>& results, double tol, bool projective) {
  std::vector<SolutionPoint> items;
  for (const auto& r : results)
    if (r.status == PathStatus::Success) items.push_back(from_path(r, projective));
  return cluster(std::move(items), tol);
}

std::vector<SolutionPoint> dedupe(const std::vector<SolutionPoint>& points, double tol) {
  return cluster(points, tol);
}

SolveReport zero_dim_solve_report(const PolySystem& f, const SolveOptions& opts) {
  if (f.num_parameters()) throw DimensionMismatch("zero_dim_solve: system has unspecialized parameters");
  for (const auto& p : f.polys())
    if (p.is_zero()) throw InvalidSystem("zero_dim_solve: system contains the zero polynomial");
  Rng rng(opts.seed);
  SolveReport report;
  if (opts.projective) {
    if (!is_homogeneous(f)) throw NotHomogeneous("zero_dim_solve: projective mode needs a homogeneous system");
    if (f.size() + 1 != f.num_variables())
      throw NotSquare("zero_dim_solve: projective mode needs n homogeneous equations in n+1 unknowns");
    auto patched = affine_patch(f, rng);
    report.working_system = std::move(patched.system);
    report.patch = std::move(patched.patch);
  } else {
    if (f.size() != f.num_variables()) throw NotSquare("zero_dim_solve: system is not square");
    report.working_system = f;
  }
  auto start = total_degree_start(report.working_system);
  report.gamma = random_unit_complex(rng);
  auto h = straight_line_homotopy(report.working_system, start.start_system, report.gamma);
  report.paths.reserve(start.start_points.size());
  for (const auto& z0 : start.start_points) report.paths.push_back(track_path(h, z0, opts.tracker));
  report.solutions = dedupe(report.paths, opts.dedupe_tolerance, opts.projective);
  for (auto& s : report.solutions) s.function_residual = norm_inf(evaluate(report.working_system, s.coordinates));
  return report;
}

std::vector<SolutionPoint> zero_dim_solve(const PolySystem& f, const SolveOptions& opts) {
  return zero_dim_solve_report(f, opts).solutions;
}

std::vector<SolutionPoint> refine_solutions(const PolySystem& f, const std::vector<SolutionPoint>& points, int digits,
                                            const CVector& patch) {
  if (digits < 1 || digits > 30) throw DimensionMismatch("refine_solutions: digits must lie in [1, 30]");
  if (f.num_parameters()) throw DimensionMismatch("refine_solutions: system has unspecialized parameters");
  PolySystem work = f;
  if (!patch.empty()) {
    if (patch.size() != f.num_variables()) throw DimensionMismatch("refine_solutions: chart has wrong length");
    work = append(f, {patch_polynomial(patch, f.arity())});
  }
  if (work.size() != work.num_variables()) throw NotSquare("refine_solutions: system is not square");

  const ExtReal tol = boost::multiprecision::pow(ExtReal(10), -digits);
  std::vector<SolutionPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (p.coordinates.size() != work.num_variables() && p.extended.size() != work.num_variables())
      throw DimensionMismatch("refine_solutions: point has wrong length");
    ExtVector z = p.extended.empty() ? to_extended(p.coordinates) : p.extended;
    std::vector<ExtComplex> fv;
    DenseMatrix<ExtComplex> jac;
    ExtReal prev_step = -1;
    ExtReal last_step = 0;
    bool converged = false;
    for (int it = 0; it < 30; ++it) {
      evaluate_system<ExtComplex>(work, z, {}, &fv, &jac);
      std::vector<ExtComplex> delta;
      try {
        LuDecomposition<ExtComplex> lu(jac, ExtReal(1e-30));
        delta = lu.solve(fv);
      } catch (const SingularMatrix&) {
        throw RefinementDiverged("refine_solutions: singular Jacobian at solution " + std::to_string(p.solution_number));
      }
      ExtReal step = 0;
      ExtReal znorm = 0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] -= delta[i];
        step = std::max(step, ExtReal(abs(delta[i])));
        znorm = std::max(znorm, ExtReal(abs(z[i])));
      }
      last_step = step;
      bool agree = true;
      for (std::size_t i = 0; i < z.size(); ++i) {
        ExtReal scale = std::max(ExtReal(abs(z[i])), tol * znorm);
        if (ExtReal(abs(delta[i])) > tol * scale) agree = false;
      }
      if (agree) {
        converged = true;
        break;
      }
      if (it >= 4 && prev_step >= 0 && step > prev_step / 4)
        throw RefinementDiverged("refine_solutions: Newton is not contracting at solution " +
                                 std::to_string(p.solution_number));
      prev_step = step;
    }
    if (!converged)
      throw RefinementDiverged("refine_solutions: no convergence at solution " + std::to_string(p.solution_number));

    evaluate_system<ExtComplex>(work, z, {}, &fv, &jac);
    ExtReal residual = 0;
    for (const auto& v : fv) residual = std::max(residual, ExtReal(abs(v)));
    SolutionPoint r = p;
    r.extended = z;
    r.coordinates = to_hardware(z);
    r.function_residual = static_cast<double>(residual);
    r.newton_residual = static_cast<double>(last_step);
    r.max_precision_bits = kExtendedPrecisionBits;
    CMatrix jd(jac.rows(), jac.cols());
    for (std::size_t i = 0; i < jac.rows(); ++i)
      for (std::size_t j = 0; j < jac.cols(); ++j) jd(i, j) = to_hardware(jac(i, j));
    r.condition_number = condition_estimate(jd);
    out.push_back(std::move(r));
  }
  return out;
}

ParameterHomotopyResult parameter_homotopy(const PolySystem& family, const std::vector<std::string>& param_names,
                                           const std::vector<CVector>& tuples, const SolveOptions& opts) {
  const std::size_t np = family.num_parameters();
  if (np == 0) throw DimensionMismatch("parameter_homotopy: system declares no parameters");
  if (family.size() != family.num_variables()) throw NotSquare("parameter_homotopy: system is not square");
  if (param_names.size() != np) throw DimensionMismatch("parameter_homotopy: parameter names do not match");
  // order[k] = index in the declared list of the k-th supplied name
  std::vector<std::size_t> order(np);
  for (std::size_t k = 0; k < np; ++k) {
    auto it = std::find(family.parameters().begin(), family.parameters().end(), param_names[k]);
    if (it == family.parameters().end())
      throw DimensionMismatch("parameter_homotopy: unknown parameter '" + param_names[k] + "'");
    order[k] = static_cast<std::size_t>(it - family.parameters().begin());
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DimensionMismatch("parameter_homotopy: parameter named twice");
  }
  for (const auto& t : tuples)
    if (t.size() != np) throw DimensionMismatch("parameter_homotopy: tuple has wrong length");

  Rng rng(opts.seed);
  ParameterHomotopyResult out;
  out.start_params = random_unit_vector(np, rng);
  SolveOptions stage1 = opts;
  stage1.projective = false;
  stage1.seed = rng.next_u64();
  auto first = zero_dim_solve(specialize(family, out.start_params), stage1);
  for (auto& s : first)
    if (s.cycle_number == 1 && s.multiplicity == 1 && std::isfinite(s.condition_number) && s.condition_number < 1e8)
      out.start_solutions.push_back(std::move(s));
  for (std::size_t i = 0; i < out.start_solutions.size(); ++i) out.start_solutions[i].solution_number = i;

  for (const auto& tuple : tuples) {
    ParameterRun run;
    run.values.assign(np, Complex(0, 0));
    for (std::size_t k = 0; k < np; ++k) run.values[order[k]] = tuple[k];
    auto h = parameter_path_homotopy(family, out.start_params, run.values);
    for (const auto& s : out.start_solutions) run.paths.push_back(track_path(h, s.coordinates, opts.tracker));
    run.path_count = run.paths.size();
    run.solutions = dedupe(run.paths, opts.dedupe_tolerance, false);
    auto target = specialize(family, run.values);
    for (auto& s : run.solutions) s.function_residual = norm_inf(evaluate(target, s.coordinates));
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace nag
