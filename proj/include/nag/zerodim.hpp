#pragma once

#include <cstdint>
#include <vector>

#include "nag/extended.hpp"
#include "nag/polysys.hpp"
#include "nag/tracker.hpp"

namespace nag {

/// An approximate solution with its path diagnostics.
struct SolutionPoint {
  CVector coordinates;
  /// Extended-precision coordinates; empty unless the point was refined.
  ExtVector extended;
  double condition_number = 0;
  int cycle_number = 1;
  double function_residual = 0;
  double last_t = 0;
  int max_precision_bits = kHardwarePrecisionBits;
  double newton_residual = 0;
  std::size_t solution_number = 0;
  std::size_t multiplicity = 1;
  bool is_projective = false;
};

struct StartData {
  PolySystem start_system;
  std::vector<CVector> start_points;
};

/// g_i = z_i^{d_i} - 1 with all products of d_i-th roots of unity, in
/// lexicographic index order (last coordinate varies fastest).
StartData total_degree_start(const PolySystem& f);

struct SolveOptions {
  bool projective = false;
  std::uint64_t seed = 0;
  double dedupe_tolerance = 1e-6;
  TrackerConfig tracker;
};

struct SolveReport {
  std::vector<SolutionPoint> solutions;
  std::vector<PathResult> paths;
  /// The square system actually solved (f, plus the chart equation in projective mode).
  PolySystem working_system;
  Complex gamma;
  /// Chart coefficients in projective mode, else empty.
  CVector patch;

  std::size_t count(PathStatus s) const;
};

SolveReport zero_dim_solve_report(const PolySystem& f, const SolveOptions& opts = {});
std::vector<SolutionPoint> zero_dim_solve(const PolySystem& f, const SolveOptions& opts = {});

/// Clusters successful endpoints closer than `tol` (∞-norm). In projective mode
/// points are compared after scaling the largest-modulus coordinate to 1.
std::vector<SolutionPoint> dedupe(const std::vector<PathResult>& results, double tol = 1e-6,
                                  bool projective = false);
/// Idempotent re-clustering of existing solutions (multiplicities add).
std::vector<SolutionPoint> dedupe(const std::vector<SolutionPoint>& points, double tol = 1e-6);

/// Newton's method in extended precision until successive iterates agree to
/// 10^-digits in every coordinate. `f` must be square and parameter-free;
/// projective points need the chart coefficients used to produce them.
std::vector<SolutionPoint> refine_solutions(const PolySystem& f, const std::vector<SolutionPoint>& points,
                                            int digits, const CVector& patch = {});

struct ParameterRun {
  CVector values;
  std::size_t path_count = 0;
  std::vector<PathResult> paths;
  std::vector<SolutionPoint> solutions;
};

struct ParameterHomotopyResult {
  CVector start_params;
  std::vector<SolutionPoint> start_solutions;
  std::vector<ParameterRun> runs;
};

/// Two-stage parameter homotopy: solve once at random complex parameters,
/// then carry those solutions to each requested parameter tuple.
ParameterHomotopyResult parameter_homotopy(const PolySystem& family, const std::vector<std::string>& param_names,
                                           const std::vector<CVector>& tuples, const SolveOptions& opts = {});

}  // namespace nag
