#pragma once

#include <cstdint>
#include <string>

#include "nag/polysys.hpp"

namespace nag {

/// One-parameter family H(z, t) tracked from t = 1 (start) to t = 0 (target).
///
/// StraightLine:  H(z,t) = (1 - t) f(z) + gamma t g(z)
/// ParameterPath: H(z,t) = F(z; t p0 + (1 - t) p1)
struct Homotopy {
  enum class Kind { StraightLine, ParameterPath };

  Kind kind = Kind::StraightLine;
  PolySystem target;
  PolySystem start;
  Complex gamma{1, 0};
  CVector start_params;
  CVector target_params;

  std::size_t num_variables() const { return target.num_variables(); }
  std::size_t size() const { return target.size(); }
};

Homotopy straight_line_homotopy(PolySystem target, PolySystem start, Complex gamma);
Homotopy parameter_path_homotopy(PolySystem family, CVector start_params, CVector target_params);

struct HomotopyValue {
  CVector value;
  CMatrix dz;
  CVector dt;
};

HomotopyValue homotopy_eval(const Homotopy& h, const CVector& z, double t);

enum class Predictor { RungeKutta4, Euler };

struct TrackerConfig {
  double initial_step = 0.1;
  double min_step = 1e-7;
  double max_step = 0.1;
  double corrector_tolerance = 1e-7;
  int max_newton_iterations = 3;
  int successes_before_growth = 5;
  double step_growth = 2.0;
  double step_shrink = 0.5;
  double endgame_boundary = 0.1;
  double final_tolerance = 1e-11;
  double infinity_threshold = 1e8;
  std::uint64_t max_steps = 100'000;
  /// Samples t_k = endgame_boundary * 2^-k for k up to this bound.
  int endgame_max_samples = 12;
  /// Extrapolants are compared only once their samples lie below this t.
  double endgame_zone = 1e-3;
  /// Success requires ‖H(endpoint, 0)‖∞ below this.
  double success_residual = 1e-8;
  Predictor predictor = Predictor::RungeKutta4;
};

enum class PathStatus { Success, AtInfinity, StepFailure, MaxSteps };

const char* to_string(PathStatus s);

struct PathResult {
  PathStatus status = PathStatus::StepFailure;
  CVector endpoint;
  double last_t = 1.0;
  int cycle_number = 1;
  double newton_residual = 0;
  double function_residual = 0;
  double condition_number = 0;
  int max_precision_bits = 53;
  std::uint64_t steps_taken = 0;
};

/// Tracks one path from t = 1 to t = 0. Throws StartPointInvalid when
/// z_start does not solve H(., 1).
PathResult track_path(const Homotopy& h, const CVector& z_start, const TrackerConfig& cfg = {});

struct EndgameResult {
  PathStatus status = PathStatus::StepFailure;
  CVector endpoint;
  int cycle_number = 1;
  double last_t = 0;
  double newton_residual = 0;
  double function_residual = 0;
  double condition_number = 0;
  std::uint64_t steps_taken = 0;
};

/// Drives a path from t = cfg.endgame_boundary to t = 0 via the geometric
/// sample sequence t_k = t_EG 2^-k with Richardson extrapolation.
EndgameResult endgame(const Homotopy& h, const CVector& z_at_boundary, const TrackerConfig& cfg = {});

}  // namespace nag
