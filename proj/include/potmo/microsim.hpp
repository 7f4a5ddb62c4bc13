#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "potmo/cost_model.hpp"
#include "potmo/planners.hpp"
#include "potmo/temporal_graph.hpp"
#include "potmo/traffic_oracle.hpp"

namespace potmo {

enum class PlannerKind { SSP, WSP, POTMO };

const char* to_string(PlannerKind kind);
PlannerKind planner_from_string(const std::string& name);

/// Edge execution unit attached to a roadside-unit junction.
struct Mel {
  std::string id;
  VertexId vertex = 0;
  double service_rate_ips = 1e6;          // instructions per second
  double instructions_per_packet = 1e6;
};

struct BackgroundTrip {
  double depart_s = 0.0;
  std::vector<EdgeId> route;
};

struct SimConfig {
  TemporalGraph graph;  // topology; costs are derived when needed
  DesirabilityMap desirability;
  VehicleTwin twin;
  PlannerKind planner = PlannerKind::SSP;
  std::size_t fleet_size = 35;
  double injection_interval_s = 100.0;
  double packet_interval_s = 60.0;
  double tick_s = 1.0;
  double horizon_s = 7200.0;
  double congestion_beta = 0.5;
  double jam_spacing_m = 7.5;  // edge capacity = floor(length / spacing), at least 1
  VertexId ambulance_source = 0;
  VertexId ambulance_target = 0;
  std::vector<BackgroundTrip> background;
  std::vector<Mel> mels;
  std::optional<ForecastTable> forecast;  // unset: replay a background-only run
  std::uint64_t seed = 0;
  bool paper_literal_priority = false;

  /// Collects every problem rather than stopping at the first.
  std::vector<std::string> validation_errors() const;
  void validate() const;
};

struct CommRecord {
  std::uint32_t vehicle = 0;
  bool ambulance = false;
  Point origin;
  double start_s = 0.0;
  std::size_t mel = 0;  // index into SimConfig::mels
  double wait_s = 0.0;
  double service_s = 0.0;
  double propagation_s = 0.0;
  double transmission_s = 0.0;  // wait + service + propagation
  std::size_t queue_at_start = 0;
};

/// Distance an ambulance covered on one edge during one tick.
struct MoveEvent {
  double tick_s = 0.0;
  std::uint32_t vehicle = 0;
  EdgeId edge = 0;
  double distance_m = 0.0;
  double speed_ms = 0.0;
};

struct ScenarioResult {
  std::size_t ard = 0;
  double tec_wh = 0.0;
  std::vector<double> series_ambulance;  // per tick mean transmission time
  std::vector<double> series_all;
  std::vector<CommRecord> comms;
  std::vector<MoveEvent> moves;
  std::vector<Observation> rsu_observations;
  std::vector<std::vector<EdgeId>> ambulance_routes;
  std::vector<double> ambulance_arrivals;  // negative when never arrived
  std::size_t ambulance_packets = 0;
};

// --- Communication -----------------------------------------------------------

inline constexpr double kSignalSpeed = 2e8;  // m/s

/// Least-loaded MEL; ties go to the geographically closest, then the lowest id.
std::size_t assign_mel(const Point& origin, std::span<const Point> mel_positions, std::span<const std::size_t> queues,
                       std::span<const std::string> ids);

/// FIFO single-server queue at one MEL.
class MelQueue {
 public:
  /// Packets still in the system at time t.
  std::size_t length(double t);

  struct Timing {
    double wait_s;
    double service_s;
    double propagation_s;
    double transmission_s;
  };
  /// Enqueues a packet arriving at `t` from `distance_m` away.
  Timing serve(double t, double instructions, double rate_ips, double distance_m);

 private:
  double busy_until_ = 0.0;
  std::vector<double> completions_;  // ascending
};

// --- Simulation --------------------------------------------------------------

class Simulation {
 public:
  explicit Simulation(SimConfig cfg);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  /// Advances one tick: injects vehicles, emits packets, moves traffic.
  void step();
  bool finished() const;
  double clock() const;
  std::size_t active_vehicles() const;
  /// Offset along the current edge, or nullopt when not on an edge.
  std::optional<std::pair<EdgeId, double>> vehicle_position(std::uint32_t vehicle) const;
  /// Adds an ad-hoc background vehicle departing now (used by tests).
  std::uint32_t add_vehicle(std::vector<EdgeId> route);

  ScenarioResult result() &&;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

ScenarioResult run_scenario(const SimConfig& cfg);

/// Forecast derived from a background-only run of the same scenario,
/// gap-filled spatially.
ForecastTable replay_forecast(const SimConfig& cfg);

/// Signed traction energy of the move log plus radio energy of every
/// ambulance packet, recomputed from the logs alone.
double recompute_tec(const SimConfig& cfg, const ScenarioResult& result);

// --- Series metrics ----------------------------------------------------------

std::vector<double> pareto_min_series(std::span<const std::vector<double>> runs);

/// Mean gap between `run` and `floor`; throws if run dips below floor.
double pmd(std::span<const double> run, std::span<const double> floor);

/// Fraction of steps where run equals floor within 1e-9.
double fraction_on_front(std::span<const double> run, std::span<const double> floor);

}  // namespace potmo
