#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "potmo/cost_model.hpp"
#include "potmo/microsim.hpp"
#include "potmo/planners.hpp"
#include "potmo/temporal_graph.hpp"
#include "potmo/traffic_oracle.hpp"

namespace potmo {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// --- Graph -------------------------------------------------------------------

Json graph_to_json(const TemporalGraph& g, bool include_costs = true);
/// Appends problems to `errors` (prefixed with `where`); returns nullopt if
/// any were found.
std::optional<TemporalGraph> graph_from_json(const Json& j, const std::string& where, std::vector<std::string>& errors);
TemporalGraph load_graph(const fs::path& path);
void save_graph(const TemporalGraph& g, const fs::path& path, bool include_costs = true);

// --- Desirability and forecast ----------------------------------------------

DesirabilityMap load_desirability(const fs::path& path, std::size_t vertices);
void save_desirability(const DesirabilityMap& map, const fs::path& path);

/// Sidecar next to a forecast CSV: same stem, ".json".
fs::path forecast_sidecar(const fs::path& csv);
ForecastTable load_forecast(const fs::path& csv, std::size_t vertices);
void save_forecast(const ForecastTable& table, const fs::path& csv);

// --- Scenario bundle -----------------------------------------------------------

Json twin_to_json(const VehicleTwin& twin);
VehicleTwin twin_from_json(const Json& j);

struct Scenario {
  fs::path root;
  std::string graph_file = "graph.json";
  std::string desirability_file = "desirability.json";
  std::optional<std::string> forecast_file;  // unset: replay background traffic
  std::string output_dir = "out";
  SimConfig sim;
};

/// Loads `scenario.json` from a bundle directory (or the manifest path
/// itself). Throws ValidationError listing every cross-reference failure.
Scenario load_scenario(const fs::path& path);
void save_scenario(const Scenario& scenario, const fs::path& dir);

// --- Generators ----------------------------------------------------------------

struct GeneratedGrid {
  TemporalGraph graph;  // carries cost bins derived from the forecast
  DesirabilityMap desirability;
  ForecastTable forecast;
  std::vector<VertexId> rsus;
};

inline constexpr std::size_t kMaxGridSide = 64;

/// rows x cols grid with randomised geometry, centre-weighted desirability and
/// a spatially smoothed synthetic forecast.
GeneratedGrid generate_grid(std::size_t rows, std::size_t cols, std::uint64_t seed, double horizon_s = 7200.0);

struct ScenarioOptions {
  std::size_t background_trips = 900;
  std::size_t fleet_size = 35;
  PlannerKind planner = PlannerKind::POTMO;
  bool include_forecast = false;
};

/// Full bundle: generated grid, MELs on roadside units, commuter traffic
/// biased towards the centre, and a corner-to-centre ambulance route.
Scenario generate_scenario(std::size_t rows, std::size_t cols, std::uint64_t seed, const ScenarioOptions& options = {});

// --- Planning against a bundle -----------------------------------------------

/// The bundled forecast, else a replay of the background traffic.
ForecastTable planning_forecast(const Scenario& sc);

/// Cost dimension by name (cars, energy, desirability, time, length) or index.
std::size_t parse_dim(const std::string& name);

struct ScenarioPlanRequest {
  std::string algo = "potmo";  // potmo, ssp, tdd or wsp
  VertexId source = 0;
  VertexId target = 0;
  double start_s = 0.0;
  std::size_t dim = kDimLength;  // ssp only
  bool paper_literal_priority = false;
};

/// One plan on `costed` (the bundle graph with costs from `forecast`). WSP
/// treats MEL vertices as roadside units and reads counts from `forecast`.
PlanResult plan_scenario(const Scenario& sc, const TemporalGraph& costed, const ForecastTable& forecast,
                         const ScenarioPlanRequest& request);

// --- Results -------------------------------------------------------------------

Json plan_to_json(const PlanResult& plan);

/// Shortest round-trip decimal, always with a fractional part or exponent.
std::string format_number(double v);

void write_comms_csv(const ScenarioResult& r, const fs::path& path);
void write_series_csv(const ScenarioResult& r, double tick_s, const fs::path& path);
struct SeriesFile {
  std::vector<double> ambulance;
  std::vector<double> all;
};
SeriesFile read_series_csv(const fs::path& path);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace potmo
