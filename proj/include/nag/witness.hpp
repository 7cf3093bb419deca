#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nag/polysys.hpp"
#include "nag/tracker.hpp"

namespace nag {

/// Witness set (f, L, W) for one pure-dimensional piece of V(f).
///
/// Points satisfy f and the slice. They are tracked on the square system
/// [R f; chart; L], where R mixes the equations of f down to
/// (ambient dimension - dimension) rows and the chart equation is present
/// only in projective mode.
struct WitnessSet {
  PolySystem system;
  LinearSlice slice;
  std::vector<CVector> points;
  std::size_t dimension = 0;
  std::size_t component_index = 0;
  bool is_projective = false;
  CMatrix randomization;
  CVector patch;

  std::size_t degree() const { return points.size(); }
};

/// Square system used for tracking, without the slice rows.
PolySystem tracking_system(const WitnessSet& ws);

/// A numerical irreducible decomposition: witness sets keyed by dimension.
struct NumericalVariety {
  std::map<std::size_t, std::vector<WitnessSet>> components;
  PolySystem system;
  std::uint64_t seed = 0;
  bool is_projective = false;
  CVector patch;

  /// Largest dimension with a component; 0 when empty.
  std::size_t dimension() const;
  std::size_t component_count() const;
  const WitnessSet& component(std::size_t dim, std::size_t index) const;
};

/// "A variety of dimension 2 with components in / dim 1: [dim=1,deg=1] ...".
std::string describe(const NumericalVariety& nv);

struct SupersetResult {
  LinearSlice slice;
  CMatrix randomization;
  std::vector<CVector> points;
};

/// Finite solutions of [R f; chart; L_dim] that also satisfy f: the witness
/// points of every dimension-`dim` component plus junk on higher-dimensional
/// ones. In projective mode `patch` holds the chart coefficients.
SupersetResult witness_superset(const PolySystem& f, std::size_t dim, Rng& rng, const CVector& patch = {},
                                const TrackerConfig& cfg = {});

/// Tracks every point from ws.slice to `target` along
/// [R f; chart; (1 - t) L_target + gamma t L_source]. Throws PathFailure if any
/// path does not finish successfully.
WitnessSet move_slice(const WitnessSet& ws, const LinearSlice& target, Complex gamma,
                      const TrackerConfig& cfg = {});
WitnessSet move_slice(const WitnessSet& ws, const LinearSlice& target, Rng& rng, const TrackerConfig& cfg = {});

/// True if `point` lies on the pure-dimensional set represented by ws.
bool contains_point(const WitnessSet& ws, const CVector& point, Rng& rng, const TrackerConfig& cfg = {});

/// Drops superset points that lie on a higher-dimensional set, scanning from
/// the top dimension down.
std::map<std::size_t, WitnessSet> junk_removal(std::map<std::size_t, WitnessSet> supersets, Rng& rng,
                                               const TrackerConfig& cfg = {});

/// Partition of witness point indices into blocks closed under the monodromy
/// action observed over random slice loops.
std::vector<std::vector<std::size_t>> monodromy_partition(const WitnessSet& ws, Rng& rng, int max_loops = 10,
                                                          const TrackerConfig& cfg = {});

/// Second differences Σz(-1) + Σz(+1) - 2Σz(0) per point under the parallel
/// slice family L + s v, plus the s = 0 positions.
struct TraceData {
  std::vector<CVector> second_differences;
  std::vector<CVector> centers;
};

TraceData trace_data(const WitnessSet& ws, Rng& rng, const TrackerConfig& cfg = {});
/// Relative trace defect of a block; linear-trace blocks give ~roundoff.
double trace_defect(const TraceData& data, const std::vector<std::size_t>& block);
bool trace_test(const WitnessSet& ws, const std::vector<std::size_t>& block, Rng& rng, const TrackerConfig& cfg = {});

inline constexpr double kTraceTolerance = 1e-6;
inline constexpr double kMatchTolerance = 1e-6;

struct DecompositionOptions {
  bool projective = false;
  std::uint64_t seed = 0;
  int max_loops = 10;
  TrackerConfig tracker;
};

/// Witness supersets top-down, junk removal by membership, then monodromy
/// plus linear trace certification in each dimension.
NumericalVariety numerical_irreducible_decomposition(const PolySystem& f, const DecompositionOptions& opts = {});

/// For each point, the (dimension, component index) pairs whose component
/// contains it. Projective points may be any nonzero representative.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> membership_test(
    const NumericalVariety& nv, const std::vector<CVector>& points, std::uint64_t seed = 0,
    const TrackerConfig& cfg = {});

/// k points on the component, each the image of one witness point on a fresh
/// random slice.
std::vector<CVector> sample(const WitnessSet& ws, std::size_t k, Rng& rng, const TrackerConfig& cfg = {});

}  // namespace nag
