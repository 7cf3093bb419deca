#include "nag/witness.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nag/zerodim.hpp"

namespace nag {

namespace {

constexpr int kMaxRetries = 3;

std::size_t effective_dimension(const PolySystem& f, bool projective) {
  return f.num_variables() - (projective ? 1 : 0);
}

LinearSlice empty_slice(std::size_t n) { return {CMatrix(0, n), {}}; }

double distance(const CVector& a, const CVector& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool lex_less(const CVector& a, const CVector& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

bool on_system(const PolySystem& f, const CVector& p, double tol) {
  return norm_inf(evaluate(f, p)) <= tol * (1.0 + norm_inf(p));
}

std::vector<CVector> dedupe_points(const std::vector<CVector>& pts, double tol) {
  std::vector<CVector> out;
  for (const auto& p : pts)
    if (std::none_of(out.begin(), out.end(), [&](const CVector& q) { return distance(p, q) < tol; }))
      out.push_back(p);
  return out;
}

void validate_system(const PolySystem& f) {
  if (f.num_parameters()) throw DimensionMismatch("system has unspecialized parameters");
  for (const auto& p : f.polys())
    if (p.is_zero()) throw InvalidSystem("system contains the zero polynomial");
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

PolySystem tracking_system(const WitnessSet& ws) {
  PolySystem s = randomize(ws.system, ws.randomization);
  if (ws.is_projective) s = append(s, {patch_polynomial(ws.patch, ws.system.arity())});
  return s;
}

std::size_t NumericalVariety::dimension() const {
  std::size_t d = 0;
  for (const auto& [dim, list] : components)
    if (!list.empty()) d = std::max(d, dim);
  return d;
}

std::size_t NumericalVariety::component_count() const {
  std::size_t n = 0;
  for (const auto& [dim, list] : components) n += list.size();
  return n;
}

const WitnessSet& NumericalVariety::component(std::size_t dim, std::size_t index) const {
  auto it = components.find(dim);
  if (it == components.end() || index >= it->second.size())
    throw DimensionOutOfRange("no component " + std::to_string(dim) + "/" + std::to_string(index));
  return it->second[index];
}

std::string describe(const NumericalVariety& nv) {
  std::ostringstream os;
  if (nv.is_projective)
    os << "A projective variety with components in projective dimension:\n";
  else
    os << "A variety of dimension " << nv.dimension() << " with components in\n";
  for (const auto& [dim, list] : nv.components) {
    if (list.empty()) continue;
    os << "  dim " << dim << ":";
    for (const auto& c : list) os << "  [dim=" << dim << ",deg=" << c.degree() << "]";
    os << "\n";
  }
  return os.str();
}

SupersetResult witness_superset(const PolySystem& f, std::size_t dim, Rng& rng, const CVector& patch,
                                const TrackerConfig& cfg) {
  validate_system(f);
  const bool projective = !patch.empty();
  const std::size_t n_eff = effective_dimension(f, projective);
  if (projective && patch.size() != f.num_variables()) throw DimensionMismatch("witness_superset: chart has wrong length");
  if (n_eff == 0 || dim >= n_eff)
    throw DimensionOutOfRange("witness_superset: dimension " + std::to_string(dim) + " out of range");
  const std::size_t rows = n_eff - dim;
  // Fewer equations than codimension: no component of this dimension exists.
  if (rows > f.size()) {
    SupersetResult out;
    out.slice = dim ? random_slice(f.num_variables(), dim, rng) : empty_slice(f.num_variables());
    out.randomization = CMatrix(0, f.size());
    return out;
  }
  // A path that fails (rather than diverging) marks a non-generic slice or
  // mixing matrix; redraw them.
  SupersetResult out;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    out = SupersetResult{};
    out.slice = dim ? random_slice(f.num_variables(), dim, rng) : empty_slice(f.num_variables());
    out.randomization = rows == f.size() ? CMatrix::identity(rows) : random_unit_matrix(rows, f.size(), rng);
    PolySystem sys = randomize(f, out.randomization);
    std::vector<Polynomial> extra;
    if (projective) extra.push_back(patch_polynomial(patch, f.arity()));
    for (auto& p : out.slice.polynomials(f.arity())) extra.push_back(std::move(p));
    sys = append(sys, std::move(extra));

    SolveOptions opts;
    opts.seed = rng.next_u64();
    opts.tracker = cfg;
    auto report = zero_dim_solve_report(sys, opts);
    for (const auto& r : report.paths) {
      if (r.status != PathStatus::Success) continue;
      if (!on_system(f, r.endpoint, 1e-7)) continue;
      out.points.push_back(r.endpoint);
    }
    if (report.count(PathStatus::StepFailure) + report.count(PathStatus::MaxSteps) == 0) break;
  }
  return out;
}

WitnessSet move_slice(const WitnessSet& ws, const LinearSlice& target, Complex gamma, const TrackerConfig& cfg) {
  if (target.codim() != ws.slice.codim() || target.ambient() != ws.slice.ambient())
    throw DimensionMismatch("move_slice: target slice has a different shape");
  WitnessSet out = ws;
  out.slice = target;
  if (target.codim() == 0 || ws.points.empty()) return out;
  const PolySystem base = tracking_system(ws);
  const std::size_t arity = ws.system.arity();
  auto h = straight_line_homotopy(append(base, target.polynomials(arity)), append(base, ws.slice.polynomials(arity)),
                                  gamma);
  out.points.clear();
  for (const auto& p : ws.points) {
    PathResult r;
    try {
      r = track_path(h, p, cfg);
    } catch (const StartPointInvalid&) {
      throw PathFailure("move_slice: witness point does not lie on the source slice");
    }
    if (r.status != PathStatus::Success)
      throw PathFailure(std::string("move_slice: path ended with ") + to_string(r.status));
    // Endpoints must stay on f itself (not only on R f) and stay distinct;
    // anything else is a path that jumped.
    if (!on_system(ws.system, r.endpoint, 1e-8))
      throw PathFailure("move_slice: path left the solution set of the original system");
    for (const auto& q : out.points)
      if (distance(q, r.endpoint) < kMatchTolerance) throw PathFailure("move_slice: two paths met");
    out.points.push_back(std::move(r.endpoint));
  }
  return out;
}

WitnessSet move_slice(const WitnessSet& ws, const LinearSlice& target, Rng& rng, const TrackerConfig& cfg) {
  return move_slice(ws, target, random_unit_complex(rng), cfg);
}

bool contains_point(const WitnessSet& ws, const CVector& point, Rng& rng, const TrackerConfig& cfg) {
  if (point.size() != ws.system.num_variables()) throw DimensionMismatch("membership: point has wrong length");
  if (ws.points.empty()) return false;
  if (!on_system(ws.system, point, 1e-6)) return false;
  auto near = [&](const std::vector<CVector>& pts) {
    return std::any_of(pts.begin(), pts.end(), [&](const CVector& q) { return distance(q, point) < kMatchTolerance; });
  };
  if (ws.dimension == 0) return near(ws.points);
  for (int attempt = 0;; ++attempt) {
    try {
      auto moved = move_slice(ws, slice_through(point, ws.dimension, rng), rng, cfg);
      return near(moved.points);
    } catch (const PathFailure&) {
      if (attempt + 1 >= kMaxRetries) throw;
    }
  }
}

std::map<std::size_t, WitnessSet> junk_removal(std::map<std::size_t, WitnessSet> supersets, Rng& rng,
                                               const TrackerConfig& cfg) {
  std::vector<const WitnessSet*> confirmed;
  for (auto it = supersets.rbegin(); it != supersets.rend(); ++it) {
    WitnessSet& ws = it->second;
    std::vector<CVector> kept;
    for (const auto& p : ws.points) {
      bool junk = false;
      for (const WitnessSet* higher : confirmed) {
        if (contains_point(*higher, p, rng, cfg)) {
          junk = true;
          break;
        }
      }
      if (!junk) kept.push_back(p);
    }
    ws.points = std::move(kept);
    if (!ws.points.empty()) confirmed.push_back(&ws);
  }
  return supersets;
}

std::vector<std::vector<std::size_t>> monodromy_partition(const WitnessSet& ws, Rng& rng, int max_loops,
                                                          const TrackerConfig& cfg) {
  const std::size_t d = ws.points.size();
  UnionFind uf(d);
  auto blocks_of = [&] {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < d; ++i) groups[uf.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
  };
  if (d <= 1 || ws.dimension == 0) {
    if (ws.dimension == 0) return blocks_of();
    return d ? std::vector<std::vector<std::size_t>>{{0}} : std::vector<std::vector<std::size_t>>{};
  }
  const std::size_t n = ws.system.num_variables();
  int quiet = 0;
  int failures = 0;
  std::size_t sets = d;
  while (quiet < max_loops && sets > 1) {
    std::vector<CVector> end;
    try {
      auto w1 = move_slice(ws, random_slice(n, ws.dimension, rng), rng, cfg);
      auto w2 = move_slice(w1, random_slice(n, ws.dimension, rng), rng, cfg);
      end = move_slice(w2, ws.slice, rng, cfg).points;
    } catch (const PathFailure&) {
      // A loop that cannot be completed is discarded; repeated failures count
      // as a quiet loop so the search terminates.
      if (++failures >= kMaxRetries) {
        failures = 0;
        ++quiet;
      }
      continue;
    }
    failures = 0;
    std::vector<std::size_t> perm(d);
    std::vector<bool> used(d, false);
    bool valid = true;
    for (std::size_t k = 0; k < d && valid; ++k) {
      std::size_t best = d;
      double best_dist = kMatchTolerance;
      for (std::size_t j = 0; j < d; ++j) {
        double dist = distance(end[k], ws.points[j]);
        if (dist < best_dist) {
          best_dist = dist;
          best = j;
        }
      }
      if (best == d || used[best]) valid = false;
      else {
        used[best] = true;
        perm[k] = best;
      }
    }
    if (!valid) continue;
    bool merged = false;
    for (std::size_t k = 0; k < d; ++k)
      if (uf.unite(k, perm[k])) {
        merged = true;
        --sets;
      }
    quiet = merged ? 0 : quiet + 1;
  }
  return blocks_of();
}

TraceData trace_data(const WitnessSet& ws, Rng& rng, const TrackerConfig& cfg) {
  TraceData td;
  td.centers = ws.points;
  const std::size_t n = ws.system.num_variables();
  if (ws.dimension == 0 || ws.points.empty()) {
    td.second_differences.assign(ws.points.size(), CVector(n, Complex(0, 0)));
    return td;
  }
  for (int attempt = 0;; ++attempt) {
    CVector v = random_unit_vector(ws.dimension, rng);
    LinearSlice plus = ws.slice, minus = ws.slice;
    for (std::size_t i = 0; i < v.size(); ++i) {
      plus.constants[i] += v[i];
      minus.constants[i] -= v[i];
    }
    try {
      auto up = move_slice(ws, plus, rng, cfg);
      auto down = move_slice(ws, minus, rng, cfg);
      td.second_differences.clear();
      for (std::size_t k = 0; k < ws.points.size(); ++k) {
        CVector dd(n);
        for (std::size_t j = 0; j < n; ++j) dd[j] = up.points[k][j] + down.points[k][j] - 2.0 * ws.points[k][j];
        td.second_differences.push_back(std::move(dd));
      }
      return td;
    } catch (const PathFailure&) {
      if (attempt + 1 >= kMaxRetries) throw;
    }
  }
}

double trace_defect(const TraceData& data, const std::vector<std::size_t>& block) {
  if (block.empty()) throw DimensionMismatch("trace_defect: empty block");
  const std::size_t n = data.centers.at(block.front()).size();
  CVector sum_dd(n), sum_c(n);
  for (auto k : block)
    for (std::size_t j = 0; j < n; ++j) {
      sum_dd[j] += data.second_differences.at(k)[j];
      sum_c[j] += data.centers.at(k)[j];
    }
  return norm_inf(sum_dd) / (1.0 + norm_inf(sum_c));
}

bool trace_test(const WitnessSet& ws, const std::vector<std::size_t>& block, Rng& rng, const TrackerConfig& cfg) {
  if (block.empty()) throw DimensionMismatch("trace_test: empty block");
  WitnessSet sub = ws;
  sub.points.clear();
  for (auto k : block) sub.points.push_back(ws.points.at(k));
  std::vector<std::size_t> all(block.size());
  std::iota(all.begin(), all.end(), 0);
  return trace_defect(trace_data(sub, rng, cfg), all) <= kTraceTolerance;
}

NumericalVariety numerical_irreducible_decomposition(const PolySystem& f, const DecompositionOptions& opts) {
  validate_system(f);
  NumericalVariety nv;
  nv.system = f;
  nv.seed = opts.seed;
  nv.is_projective = opts.projective;
  Rng rng(opts.seed);
  if (opts.projective) {
    if (!is_homogeneous(f)) throw NotHomogeneous("decomposition: projective mode needs a homogeneous system");
    if (f.num_variables() < 2) throw DimensionOutOfRange("decomposition: projective space needs two coordinates");
    nv.patch = random_unit_vector(f.num_variables(), rng);
  }
  const std::size_t n_eff = effective_dimension(f, opts.projective);
  const std::size_t top = n_eff - 1;
  const std::size_t bottom = f.size() >= n_eff ? 0 : n_eff - f.size();

  std::map<std::size_t, WitnessSet> supersets;
  for (std::size_t i = top + 1; i-- > bottom;) {
    auto sr = witness_superset(f, i, rng, nv.patch, opts.tracker);
    WitnessSet ws;
    ws.system = f;
    ws.slice = std::move(sr.slice);
    ws.points = dedupe_points(sr.points, kMatchTolerance);
    ws.dimension = i;
    ws.is_projective = opts.projective;
    ws.randomization = std::move(sr.randomization);
    ws.patch = nv.patch;
    supersets.emplace(i, std::move(ws));
  }
  auto clean = junk_removal(std::move(supersets), rng, opts.tracker);

  for (auto& [dim, ws] : clean) {
    if (ws.points.empty()) continue;
    auto blocks = monodromy_partition(ws, rng, opts.max_loops, opts.tracker);
    auto td = trace_data(ws, rng, opts.tracker);
    auto passes = [&](const std::vector<std::size_t>& b) { return trace_defect(td, b) <= kTraceTolerance; };
    for (;;) {
      std::vector<std::size_t> failing;
      for (std::size_t b = 0; b < blocks.size(); ++b)
        if (!passes(blocks[b])) failing.push_back(b);
      if (failing.empty()) break;
      if (blocks.size() == 1)
        throw DecompositionIncomplete("decomposition: witness points in dimension " + std::to_string(dim) +
                                      " fail the trace test even as a single block");
      // Merge the pair with the smallest combined defect, preferring two failing blocks.
      double best = INFINITY;
      std::pair<std::size_t, std::size_t> pick{0, 0};
      auto consider = [&](std::size_t a, std::size_t b) {
        auto merged = blocks[a];
        merged.insert(merged.end(), blocks[b].begin(), blocks[b].end());
        double d = trace_defect(td, merged);
        if (d < best) {
          best = d;
          pick = {std::min(a, b), std::max(a, b)};
        }
      };
      if (failing.size() >= 2) {
        for (std::size_t i = 0; i < failing.size(); ++i)
          for (std::size_t j = i + 1; j < failing.size(); ++j) consider(failing[i], failing[j]);
      } else {
        for (std::size_t b = 0; b < blocks.size(); ++b)
          if (b != failing[0]) consider(failing[0], b);
      }
      blocks[pick.first].insert(blocks[pick.first].end(), blocks[pick.second].begin(), blocks[pick.second].end());
      std::sort(blocks[pick.first].begin(), blocks[pick.first].end());
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(pick.second));
    }
    std::vector<WitnessSet> comps;
    for (const auto& b : blocks) {
      WitnessSet c = ws;
      c.points.clear();
      for (auto k : b) c.points.push_back(ws.points[k]);
      comps.push_back(std::move(c));
    }
    std::stable_sort(comps.begin(), comps.end(), [](const WitnessSet& a, const WitnessSet& b) {
      if (a.degree() != b.degree()) return a.degree() < b.degree();
      return lex_less(a.points.front(), b.points.front());
    });
    for (std::size_t j = 0; j < comps.size(); ++j) comps[j].component_index = j;
    nv.components[dim] = std::move(comps);
  }
  return nv;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> membership_test(const NumericalVariety& nv,
                                                                              const std::vector<CVector>& points,
                                                                              std::uint64_t seed,
                                                                              const TrackerConfig& cfg) {
  Rng rng(seed);
  const std::size_t n = nv.system.num_variables();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  for (CVector p : points) {
    if (p.size() != n) throw DimensionMismatch("membership_test: point has wrong length");
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    if (nv.is_projective) {
      Complex s = 0;
      for (std::size_t i = 0; i < n; ++i) s += nv.patch[i] * p[i];
      if (!(std::abs(s) > 1e-12 * norm_inf(p))) {
        out.push_back({});
        continue;
      }
      for (auto& v : p) v /= s;
    }
    for (const auto& [dim, list] : nv.components)
      for (const auto& ws : list)
        if (contains_point(ws, p, rng, cfg)) hits.emplace_back(dim, ws.component_index);
    out.push_back(std::move(hits));
  }
  return out;
}

std::vector<CVector> sample(const WitnessSet& ws, std::size_t k, Rng& rng, const TrackerConfig& cfg) {
  if (k == 0) throw DimensionMismatch("sample: count must be positive");
  if (ws.points.empty()) throw DimensionMismatch("sample: witness set is empty");
  std::vector<CVector> out;
  const std::size_t n = ws.system.num_variables();
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t idx = static_cast<std::size_t>(rng.next_u64() % ws.points.size());
    if (ws.dimension == 0) {
      out.push_back(ws.points[idx]);
      continue;
    }
    WitnessSet single = ws;
    single.points = {ws.points[idx]};
    for (int attempt = 0;; ++attempt) {
      try {
        auto moved = move_slice(single, random_slice(n, ws.dimension, rng), rng, cfg);
        out.push_back(moved.points.front());
        break;
      } catch (const PathFailure&) {
        if (attempt + 1 >= kMaxRetries) throw;
      }
    }
  }
  return out;
}

}  // namespace nag
