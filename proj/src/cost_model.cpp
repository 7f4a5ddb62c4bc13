#include "potmo/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace potmo {

void VehicleTwin::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("vehicle twin: ") + name + " must be positive");
  };
  positive(mass_kg, "mass_kg");
  positive(rolling_coeff, "rolling_coeff");
  positive(drag_area_m2, "drag_area_m2");
  positive(battery_wh, "battery_wh");
  positive(radio_j_per_packet, "radio_j_per_packet");
  if (!(drivetrain_eff > 0.0 && drivetrain_eff <= 1.0)) {
    throw std::invalid_argument("vehicle twin: drivetrain_eff must be in (0, 1]");
  }
  if (!(regen_eff >= 0.0 && regen_eff < 1.0)) throw std::invalid_argument("vehicle twin: regen_eff must be in [0, 1)");
}

double traction_energy(const VehicleTwin& twin, double length_m, double slope_rad, double speed_ms) {
  if (!(length_m > 0.0)) throw std::invalid_argument("traction_energy: length must be positive");
  if (!(speed_ms > 0.0)) throw std::invalid_argument("traction_energy: speed must be positive");
  const double grade = twin.mass_kg * kGravity * (twin.rolling_coeff * std::cos(slope_rad) + std::sin(slope_rad));
  const double aero = 0.5 * kAirDensity * twin.drag_area_m2 * speed_ms * speed_ms;
  const double joules = (grade + aero) * length_m;
  if (joules >= 0.0) return joules / twin.drivetrain_eff / 3600.0;
  return std::max(joules * twin.regen_eff / 3600.0, -twin.battery_wh);
}

DesirabilityMap::DesirabilityMap(std::vector<double> scores) : scores_(std::move(scores)) {
  for (double& s : scores_) {
    if (std::isnan(s)) throw std::invalid_argument("desirability score is NaN");
    s = std::clamp(s, 0.0, 1.0);
  }
}

double DesirabilityMap::at(VertexId v) const {
  if (v >= scores_.size()) throw std::out_of_range("no desirability for vertex " + std::to_string(v));
  return scores_[v];
}

double desirability_cost(const DesirabilityMap& map, const TemporalGraph& g, EdgeId e) {
  const Edge& edge = g.edge(e);
  const double mean = 0.5 * (map.at(edge.src) + map.at(edge.dst));
  return (1.0 - mean) * (edge.length_m / 1000.0);
}

CostVec build_cost_vector(const TemporalGraph& g, EdgeId e, double t, const ForecastTable& forecast,
                          const DesirabilityMap& map, const VehicleTwin& twin) {
  const Edge& edge = g.edge(e);
  return CostVec{
      forecast.count_at(edge.dst, t),
      std::max(0.0, traction_energy(twin, edge.length_m, edge.slope_rad, edge.vmax_ms)),
      desirability_cost(map, g, e),
      edge.length_m / edge.vmax_ms,
      edge.length_m,
  };
}

CostVec build_heuristic(const TemporalGraph& g, VertexId v, double /*t*/, VertexId target,
                        const DesirabilityMap& /*map*/, const VehicleTwin& twin) {
  const double beeline = g.planar_distance(v, target);
  if (beeline == 0.0 && g.vertex(v).z == g.vertex(target).z) return CostVec(kDefaultDims);
  // Sum over a path of max(0, grade + aero) / eta is at least the rolling
  // work over the planar beeline plus the net climb.
  const double climb = g.vertex(target).z - g.vertex(v).z;
  const double joules = twin.mass_kg * kGravity * (twin.rolling_coeff * beeline + climb);
  const double energy = std::max(0.0, joules) / twin.drivetrain_eff / 3600.0;
  return CostVec{0.0, energy, 0.0, beeline / kBeelineSpeed, beeline};
}

Heuristic beeline_heuristic(const TemporalGraph& g, VertexId target, const VehicleTwin& twin) {
  static const DesirabilityMap unused;
  return [&g, target, twin](VertexId v, double t) { return build_heuristic(g, v, t, target, unused, twin); };
}

TemporalGraph build_cost_graph(const TemporalGraph& topology, const ForecastTable& forecast,
                               const DesirabilityMap& map, const VehicleTwin& twin) {
  if (map.size() != topology.vertex_count()) throw std::invalid_argument("desirability map must cover every vertex");
  if (forecast.bin_count() > 0 && forecast.vertex_count() != topology.vertex_count()) {
    throw std::invalid_argument("forecast must cover every vertex");
  }
  const std::size_t bins = std::max<std::size_t>(forecast.bin_count(), 1);
  const double width = forecast.bin_count() > 0 ? forecast.bin_width() : topology.bin_width();
  std::vector<std::vector<CostVec>> costs(topology.edge_count());
  for (const Edge& e : topology.edges()) {
    costs[e.id].reserve(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      costs[e.id].push_back(build_cost_vector(topology, e.id, static_cast<double>(b) * width, forecast, map, twin));
    }
  }
  return TemporalGraph(std::vector<Vertex>(topology.vertices().begin(), topology.vertices().end()),
                       std::vector<Edge>(topology.edges().begin(), topology.edges().end()), std::move(costs),
                       kDefaultDims, kDimTime, width);
}

}  // namespace potmo
