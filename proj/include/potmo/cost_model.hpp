#pragma once

#include <vector>

#include "potmo/cost_vec.hpp"
#include "potmo/temporal_graph.hpp"
#include "potmo/traffic_oracle.hpp"

namespace potmo {

inline constexpr double kGravity = 9.81;      // m/s^2
inline constexpr double kAirDensity = 1.225;  // kg/m^3
inline constexpr double kBeelineSpeed = 13.89;  // m/s, 50 km/h cap

/// Electric-vehicle battery and radio parameters.
struct VehicleTwin {
  double mass_kg = 2500.0;
  double rolling_coeff = 0.01;
  double drag_area_m2 = 3.0;  // C_d * A
  double drivetrain_eff = 0.85;
  double regen_eff = 0.6;
  double battery_wh = 90000.0;
  double radio_j_per_packet = 0.1;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Signed traction energy (Wh) for `length_m` at constant `speed_ms` on a
/// grade of `slope_rad`. Positive demand is divided by drivetrain efficiency;
/// net recovery downhill is scaled by regen efficiency and bounded by the
/// battery capacity.
double traction_energy(const VehicleTwin& twin, double length_m, double slope_rad, double speed_ms);

/// Per-vertex desirability in [0, 1]; out-of-range inputs are clamped.
class DesirabilityMap {
 public:
  DesirabilityMap() = default;
  explicit DesirabilityMap(std::vector<double> scores);

  double at(VertexId v) const;
  std::size_t size() const noexcept { return scores_.size(); }
  const std::vector<double>& scores() const noexcept { return scores_; }

  friend bool operator==(const DesirabilityMap&, const DesirabilityMap&) = default;

 private:
  std::vector<double> scores_;
};

/// (1 - mean endpoint desirability) * length in km.
double desirability_cost(const DesirabilityMap& map, const TemporalGraph& g, EdgeId e);

/// [predicted cars at dst(e), traction energy clamped at 0, desirability
/// cost, length / vmax, length].
CostVec build_cost_vector(const TemporalGraph& g, EdgeId e, double t, const ForecastTable& forecast,
                          const DesirabilityMap& map, const VehicleTwin& twin);

/// Lower bound on the remaining cost from `v` to `target` over the beeline:
/// [0, elevation-aware rolling energy bound, 0, beeline / 13.89, beeline].
CostVec build_heuristic(const TemporalGraph& g, VertexId v, double t, VertexId target, const DesirabilityMap& map,
                        const VehicleTwin& twin);

Heuristic beeline_heuristic(const TemporalGraph& g, VertexId target, const VehicleTwin& twin);

/// Attaches five-dimensional cost bins (one per forecast bin) to the topology.
TemporalGraph build_cost_graph(const TemporalGraph& topology, const ForecastTable& forecast,
                               const DesirabilityMap& map, const VehicleTwin& twin);

}  // namespace potmo
