#include "nag/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace nag {

Homotopy straight_line_homotopy(PolySystem target, PolySystem start, Complex gamma) {
  if (target.num_variables() != start.num_variables() || target.size() != start.size())
    throw DimensionMismatch("straight_line_homotopy: target and start must have the same shape");
  if (target.num_parameters() || start.num_parameters())
    throw DimensionMismatch("straight_line_homotopy: systems must be parameter-free");
  Homotopy h;
  h.kind = Homotopy::Kind::StraightLine;
  h.target = std::move(target);
  h.start = std::move(start);
  h.gamma = gamma;
  return h;
}

Homotopy parameter_path_homotopy(PolySystem family, CVector start_params, CVector target_params) {
  if (start_params.size() != family.num_parameters() || target_params.size() != family.num_parameters())
    throw DimensionMismatch("parameter_path_homotopy: wrong number of parameter values");
  Homotopy h;
  h.kind = Homotopy::Kind::ParameterPath;
  h.target = std::move(family);
  h.start_params = std::move(start_params);
  h.target_params = std::move(target_params);
  return h;
}

HomotopyValue homotopy_eval(const Homotopy& h, const CVector& z, double t) {
  HomotopyValue out;
  if (h.kind == Homotopy::Kind::StraightLine) {
    CVector fv, gv;
    CMatrix fj, gj;
    evaluate_system<Complex>(h.target, z, {}, &fv, &fj);
    evaluate_system<Complex>(h.start, z, {}, &gv, &gj);
    const Complex a(1.0 - t, 0.0);
    const Complex b = h.gamma * t;
    out.value.resize(fv.size());
    out.dt.resize(fv.size());
    out.dz = CMatrix(fj.rows(), fj.cols());
    for (std::size_t i = 0; i < fv.size(); ++i) {
      out.value[i] = a * fv[i] + b * gv[i];
      out.dt[i] = h.gamma * gv[i] - fv[i];
      for (std::size_t j = 0; j < fj.cols(); ++j) out.dz(i, j) = a * fj(i, j) + b * gj(i, j);
    }
    return out;
  }
  const std::size_t np = h.target.num_parameters();
  CVector p(np), dp(np);
  for (std::size_t k = 0; k < np; ++k) {
    p[k] = t * h.start_params[k] + (1.0 - t) * h.target_params[k];
    dp[k] = h.start_params[k] - h.target_params[k];
  }
  CMatrix jp;
  evaluate_system<Complex>(h.target, z, p, &out.value, &out.dz, &jp);
  out.dt = multiply(jp, dp);
  return out;
}

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success: return "Success";
    case PathStatus::AtInfinity: return "AtInfinity";
    case PathStatus::StepFailure: return "StepFailure";
    case PathStatus::MaxSteps: return "MaxSteps";
  }
  return "Unknown";
}

namespace {

enum class Advance { Reached, Failed, Infinity, MaxSteps };

double scaled_norm(const CVector& v) { return norm_inf(v); }

class Stepper {
 public:
  Stepper(const Homotopy& h, const TrackerConfig& cfg) : h_(h), cfg_(cfg), step_(cfg.initial_step) {}

  std::uint64_t steps() const { return steps_; }

  /// Moves (z, t) down to t_to. On anything but Reached, (z, t) hold the last
  /// accepted point.
  Advance advance(CVector& z, double& t, double t_to) {
    while (t > t_to) {
      if (steps_ >= cfg_.max_steps) return Advance::MaxSteps;
      ++steps_;
      const double h = std::min(step_, t - t_to);
      const double t_new = (t - h <= t_to) ? t_to : t - h;
      CVector z_new;
      bool ok = predict(z, t, t_new - t, z_new) && correct(z_new, t_new, cfg_.corrector_tolerance,
                                                           cfg_.max_newton_iterations, nullptr);
      if (ok) {
        z = std::move(z_new);
        t = t_new;
        if (norm_inf(z) > cfg_.infinity_threshold) return Advance::Infinity;
        if (++successes_ >= cfg_.successes_before_growth) {
          step_ = std::min(step_ * cfg_.step_growth, cfg_.max_step);
          successes_ = 0;
        }
      } else {
        successes_ = 0;
        step_ *= cfg_.step_shrink;
        if (step_ < cfg_.min_step) return Advance::Failed;
      }
    }
    return Advance::Reached;
  }

  /// Newton at fixed t until the update is below tol·(1 + ‖z‖∞).
  bool correct(CVector& z, double t, double tol, int max_iter, double* last_update) const {
    double prev = INFINITY;
    for (int it = 0; it < max_iter; ++it) {
      CVector delta;
      try {
        auto hv = homotopy_eval(h_, z, t);
        delta = lin_solve(hv.dz, hv.value);
      } catch (const SingularMatrix&) {
        return false;
      }
      double d = scaled_norm(delta);
      if (!std::isfinite(d)) return false;
      for (std::size_t i = 0; i < z.size(); ++i) z[i] -= delta[i];
      if (last_update) *last_update = d;
      if (d <= tol * (1.0 + norm_inf(z))) return true;
      if (it > 0 && d > prev) return false;
      prev = d;
    }
    return false;
  }

 private:
  bool tangent(const CVector& z, double t, CVector& out) const {
    try {
      auto hv = homotopy_eval(h_, z, t);
      for (auto& v : hv.dt) v = -v;
      out = lin_solve(hv.dz, hv.dt);
    } catch (const SingularMatrix&) {
      return false;
    }
    for (const auto& v : out)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  bool predict(const CVector& z, double t, double s, CVector& out) const {
    const std::size_t n = z.size();
    CVector k1;
    if (!tangent(z, t, k1)) return false;
    if (cfg_.predictor == Predictor::Euler) {
      out.resize(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = z[i] + s * k1[i];
      return true;
    }
    CVector tmp(n), k2, k3, k4;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * s * k1[i];
    if (!tangent(tmp, t + 0.5 * s, k2)) return false;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * s * k2[i];
    if (!tangent(tmp, t + 0.5 * s, k3)) return false;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + s * k3[i];
    if (!tangent(tmp, t + s, k4)) return false;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i] + (s / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return true;
  }

  const Homotopy& h_;
  const TrackerConfig& cfg_;
  double step_;
  int successes_ = 0;
  std::uint64_t steps_ = 0;
};

// Top of the Richardson table for samples at t, t/2, t/4, ... assuming an
// expansion in powers of t^(1/c); ratio = 2^(1/c).
CVector richardson(const std::vector<CVector>& samples, std::size_t count, double ratio) {
  std::vector<CVector> row(samples.end() - static_cast<std::ptrdiff_t>(count), samples.end());
  double factor = 1;
  for (std::size_t level = 1; level < count; ++level) {
    factor *= ratio;
    for (std::size_t j = count - 1; j >= level; --j)
      for (std::size_t i = 0; i < row[j].size(); ++i)
        row[j][i] = (factor * row[j][i] - row[j - 1][i]) / (factor - 1.0);
  }
  return row.back();
}

double distance(const CVector& a, const CVector& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

EndgameResult run_endgame(const Homotopy& h, CVector z, const TrackerConfig& cfg, Stepper& stepper) {
  EndgameResult res;
  const std::uint64_t steps_before = stepper.steps();
  auto finish = [&](PathStatus s, CVector endpoint, double last_t) {
    res.status = s;
    res.endpoint = std::move(endpoint);
    res.last_t = last_t;
    res.steps_taken = stepper.steps() - steps_before;
    return res;
  };

  // Samples are polished well past the tracking tolerance so extrapolation is
  // limited by the expansion, not by corrector noise.
  constexpr double kSampleTolerance = 1e-14;
  constexpr int kSampleIterations = 6;
  constexpr std::size_t kMaxLevels = 4;

  double t = cfg.endgame_boundary;
  stepper.correct(z, t, kSampleTolerance, kSampleIterations, nullptr);
  std::vector<CVector> samples{z};
  std::vector<double> times{t};
  std::vector<double> ratios;
  std::vector<CVector> extrapolants;
  std::vector<int> cycles;
  int cycle = 1;
  bool converged = false;

  for (int k = 1; k <= cfg.endgame_max_samples; ++k) {
    const double t_next = cfg.endgame_boundary * std::ldexp(1.0, -k);
    switch (stepper.advance(z, t, t_next)) {
      case Advance::Reached: break;
      case Advance::Infinity: return finish(PathStatus::AtInfinity, z, t);
      case Advance::MaxSteps: return finish(PathStatus::MaxSteps, z, t);
      case Advance::Failed: return finish(PathStatus::StepFailure, z, t);
    }
    stepper.correct(z, t, kSampleTolerance, kSampleIterations, nullptr);
    samples.push_back(z);
    times.push_back(t);

    const std::size_t m = samples.size();
    const double d_new = distance(samples[m - 1], samples[m - 2]);
    if (m >= 3) {
      const double d_old = distance(samples[m - 2], samples[m - 3]);
      const double scale = 1.0 + norm_inf(z);
      if (d_new <= 1e-13 * scale) {
        cycle = 1;
        ratios.push_back(0);
      } else if (d_old > 0) {
        const double r = d_new / d_old;
        ratios.push_back(r);
        if (r < 1) cycle = static_cast<int>(std::clamp<long>(std::lround(std::log(2.0) / -std::log(r)), 1L, 16L));
      }
      // Differences growing geometrically: the path is leaving every compact set.
      if (ratios.size() >= 3 && std::all_of(ratios.end() - 3, ratios.end(), [](double r) { return r > 1.0; }))
        return finish(PathStatus::AtInfinity, z, t);
    }
    if (m >= 2) {
      const std::size_t count = std::min(m, kMaxLevels + 1);
      extrapolants.push_back(richardson(samples, count, std::pow(2.0, 1.0 / cycle)));
      cycles.push_back(cycle);
    }
    const std::size_t e = extrapolants.size();
    if (e >= 2 && times[m - 2] <= cfg.endgame_zone && cycles[e - 1] == cycles[e - 2]) {
      const double agree = distance(extrapolants[e - 1], extrapolants[e - 2]);
      if (agree <= cfg.final_tolerance * (1.0 + norm_inf(extrapolants[e - 1]))) {
        converged = true;
        res.newton_residual = agree;
        break;
      }
    }
  }

  if (extrapolants.empty()) return finish(PathStatus::StepFailure, z, t);
  CVector endpoint = extrapolants.back();
  if (!converged) {
    const std::size_t e = extrapolants.size();
    const double agree = e >= 2 ? distance(extrapolants[e - 1], extrapolants[e - 2]) : INFINITY;
    // Not Cauchy even loosely: report divergence.
    if (!(agree <= 1e-6 * (1.0 + norm_inf(endpoint)))) return finish(PathStatus::StepFailure, endpoint, t);
    res.newton_residual = agree;
  }
  res.cycle_number = cycle;

  if (cycle == 1) {
    CVector polished = endpoint;
    double update = INFINITY;
    stepper.correct(polished, 0.0, 1e-15, 3, &update);
    auto before = norm_inf(homotopy_eval(h, endpoint, 0.0).value);
    auto after = norm_inf(homotopy_eval(h, polished, 0.0).value);
    if (std::isfinite(after) && after <= before && distance(polished, endpoint) <= 1e-8 * (1.0 + norm_inf(endpoint))) {
      endpoint = std::move(polished);
      res.newton_residual = update;
    }
  }

  auto hv = homotopy_eval(h, endpoint, 0.0);
  res.function_residual = norm_inf(hv.value);
  res.condition_number = condition_estimate(hv.dz);
  const bool ok = std::isfinite(res.function_residual) && res.function_residual <= cfg.success_residual;
  if (norm_inf(endpoint) > cfg.infinity_threshold) return finish(PathStatus::AtInfinity, endpoint, t);
  return finish(ok ? PathStatus::Success : PathStatus::StepFailure, endpoint, t);
}

}  // namespace

EndgameResult endgame(const Homotopy& h, const CVector& z_at_boundary, const TrackerConfig& cfg) {
  TrackerConfig local = cfg;
  local.initial_step = std::min(cfg.initial_step, cfg.endgame_boundary / 2);
  Stepper stepper(h, local);
  return run_endgame(h, z_at_boundary, local, stepper);
}

PathResult track_path(const Homotopy& h, const CVector& z_start, const TrackerConfig& cfg) {
  if (z_start.size() != h.num_variables()) throw DimensionMismatch("track_path: start point has wrong length");
  if (h.size() != h.num_variables()) throw NotSquare("track_path: homotopy is not square");
  {
    auto hv = homotopy_eval(h, z_start, 1.0);
    if (!(norm_inf(hv.value) <= 1e-8 * (1.0 + norm_inf(z_start))))
      throw StartPointInvalid("track_path: start point does not solve the start system");
  }
  PathResult out;
  out.max_precision_bits = 53;
  Stepper stepper(h, cfg);
  CVector z = z_start;
  double t = 1.0;
  auto status = stepper.advance(z, t, cfg.endgame_boundary);
  if (status != Advance::Reached) {
    out.status = status == Advance::Infinity   ? PathStatus::AtInfinity
                 : status == Advance::MaxSteps ? PathStatus::MaxSteps
                                               : PathStatus::StepFailure;
    out.endpoint = z;
    out.last_t = t;
    out.steps_taken = stepper.steps();
    auto hv = homotopy_eval(h, z, t);
    out.function_residual = norm_inf(hv.value);
    out.condition_number = condition_estimate(hv.dz);
    return out;
  }
  auto eg = run_endgame(h, z, cfg, stepper);
  out.status = eg.status;
  out.endpoint = std::move(eg.endpoint);
  out.last_t = eg.last_t;
  out.cycle_number = eg.cycle_number;
  out.newton_residual = eg.newton_residual;
  out.function_residual = eg.function_residual;
  out.condition_number = eg.condition_number;
  out.steps_taken = stepper.steps();
  return out;
}

}  // namespace nag
