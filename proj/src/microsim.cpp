#include "potmo/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "potmo/error.hpp"

namespace potmo {

const char* to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::SSP:
      return "ssp";
    case PlannerKind::WSP:
      return "wsp";
    case PlannerKind::POTMO:
      return "potmo";
  }
  return "?";
}

PlannerKind planner_from_string(const std::string& name) {
  if (name == "ssp") return PlannerKind::SSP;
  if (name == "wsp") return PlannerKind::WSP;
  if (name == "potmo") return PlannerKind::POTMO;
  throw std::invalid_argument("unknown planner '" + name + "' (expected ssp, wsp or potmo)");
}

std::vector<std::string> SimConfig::validation_errors() const {
  std::vector<std::string> errs;
  const std::size_t n = graph.vertex_count();
  if (n == 0) errs.emplace_back("graph has no vertices");
  if (!(injection_interval_s > 0.0)) errs.emplace_back("injection_interval_s must be positive");
  if (!(packet_interval_s > 0.0)) errs.emplace_back("packet_interval_s must be positive");
  if (!(tick_s > 0.0)) errs.emplace_back("tick_s must be positive");
  if (!(horizon_s > 0.0)) errs.emplace_back("horizon_s must be positive");
  if (!(congestion_beta >= 0.0)) errs.emplace_back("congestion_beta must be nonnegative");
  if (!(jam_spacing_m > 0.0)) errs.emplace_back("jam_spacing_m must be positive");
  if (ambulance_source >= n) errs.emplace_back("ambulance source " + std::to_string(ambulance_source) + " unknown");
  if (ambulance_target >= n) errs.emplace_back("ambulance target " + std::to_string(ambulance_target) + " unknown");
  if (desirability.size() != n) {
    errs.emplace_back("desirability covers " + std::to_string(desirability.size()) + " vertices, graph has " +
                      std::to_string(n));
  }
  try {
    twin.validate();
  } catch (const std::invalid_argument& e) {
    errs.emplace_back(e.what());
  }
  if (mels.empty()) errs.emplace_back("at least one MEL is required");
  for (const Mel& m : mels) {
    if (m.vertex >= n) errs.emplace_back("MEL '" + m.id + "' sits on unknown vertex " + std::to_string(m.vertex));
    if (!(m.service_rate_ips > 0.0) || !(m.instructions_per_packet > 0.0)) {
      errs.emplace_back("MEL '" + m.id + "' needs positive service rate and packet cost");
    }
  }
  for (std::size_t i = 0; i < background.size(); ++i) {
    const auto& trip = background[i];
    const std::string where = "background trip " + std::to_string(i);
    if (!(trip.depart_s >= 0.0)) errs.emplace_back(where + ": negative departure");
    for (std::size_t k = 0; k < trip.route.size(); ++k) {
      if (trip.route[k] >= graph.edge_count()) {
        errs.emplace_back(where + ": unknown edge " + std::to_string(trip.route[k]));
        break;
      }
      if (k > 0 && graph.edge(trip.route[k - 1]).dst != graph.edge(trip.route[k]).src) {
        errs.emplace_back(where + ": route is not connected at position " + std::to_string(k));
        break;
      }
    }
  }
  if (forecast && forecast->vertex_count() != n) errs.emplace_back("forecast does not cover every vertex");
  return errs;
}

void SimConfig::validate() const {
  auto errs = validation_errors();
  if (!errs.empty()) throw ValidationError(std::move(errs));
}

std::size_t assign_mel(const Point& origin, std::span<const Point> mel_positions, std::span<const std::size_t> queues,
                       std::span<const std::string> ids) {
  if (mel_positions.empty()) throw std::invalid_argument("assign_mel needs at least one MEL");
  if (queues.size() != mel_positions.size() || ids.size() != mel_positions.size()) {
    throw std::invalid_argument("assign_mel: inconsistent MEL descriptions");
  }
  std::size_t best = 0;
  double best_dist = distance(origin, mel_positions[0]);
  for (std::size_t i = 1; i < mel_positions.size(); ++i) {
    const double d = distance(origin, mel_positions[i]);
    if (queues[i] != queues[best]) {
      if (queues[i] < queues[best]) best = i, best_dist = d;
    } else if (d != best_dist) {
      if (d < best_dist) best = i, best_dist = d;
    } else if (ids[i] < ids[best]) {
      best = i, best_dist = d;
    }
  }
  return best;
}

std::size_t MelQueue::length(double t) {
  auto done = std::upper_bound(completions_.begin(), completions_.end(), t);
  completions_.erase(completions_.begin(), done);
  return completions_.size();
}

MelQueue::Timing MelQueue::serve(double t, double instructions, double rate_ips, double distance_m) {
  const double start = std::max(t, busy_until_);
  Timing timing;
  timing.wait_s = start - t;
  timing.service_s = instructions / rate_ips;
  timing.propagation_s = distance_m / kSignalSpeed;
  timing.transmission_s = timing.wait_s + timing.service_s + timing.propagation_s;
  busy_until_ = start + timing.service_s;
  completions_.push_back(busy_until_);
  return timing;
}

// --- Simulation ----------------------------------------------------------------

namespace {

constexpr double kObservationInterval = 10.0;  // s

struct Vehicle {
  std::uint32_t id = 0;
  bool ambulance = false;
  std::size_t ambulance_index = 0;
  std::vector<EdgeId> route;  // WSP ambulances: realised edges so far
  std::size_t next = 0;       // next route index to enter
  bool on_edge = false;
  EdgeId edge = 0;
  double offset = 0.0;
  VertexId junction = 0;
  VertexId target = 0;
  bool active = false;
  double next_packet = 0.0;
  double waiting_s = 0.0;
  Point tick_position;
};

}  // namespace

struct Simulation::State {
  SimConfig cfg;
  TemporalGraph cost_graph;
  ForecastTable forecast;
  std::vector<bool> rsu;
  std::vector<Point> mel_pos;
  std::vector<std::string> mel_ids;
  std::vector<MelQueue> queues;
  std::vector<std::size_t> capacity;
  std::vector<std::size_t> occupancy;
  std::vector<Vehicle> vehicles;
  std::vector<std::size_t> trip_order;
  std::size_t next_trip = 0;
  std::size_t next_ambulance = 0;
  std::size_t tick = 0;
  std::size_t ticks = 0;
  std::mt19937_64 rng;
  ScenarioResult out;

  explicit State(SimConfig c) : cfg(std::move(c)), rng(cfg.seed) {
    cfg.validate();
    const TemporalGraph& g = cfg.graph;
    ticks = static_cast<std::size_t>(std::ceil(cfg.horizon_s / cfg.tick_s));
    rsu.assign(g.vertex_count(), false);
    for (const Mel& m : cfg.mels) {
      rsu[m.vertex] = true;
      mel_pos.push_back(g.vertex(m.vertex).position());
      mel_ids.push_back(m.id);
    }
    queues.resize(cfg.mels.size());
    capacity.resize(g.edge_count());
    for (const Edge& e : g.edges()) {
      capacity[e.id] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(e.length_m / cfg.jam_spacing_m)));
    }
    occupancy.assign(g.edge_count(), 0);
    trip_order.resize(cfg.background.size());
    std::iota(trip_order.begin(), trip_order.end(), 0);
    std::stable_sort(trip_order.begin(), trip_order.end(), [&](std::size_t a, std::size_t b) {
      return cfg.background[a].depart_s < cfg.background[b].depart_s;
    });
    if (cfg.fleet_size > 0 && cfg.planner != PlannerKind::WSP) {
      if (cfg.planner == PlannerKind::POTMO) forecast = cfg.forecast ? *cfg.forecast : replay_forecast(cfg);
      cost_graph = build_cost_graph(g, cfg.planner == PlannerKind::POTMO ? forecast : ForecastTable{},
                                    cfg.desirability, cfg.twin);
    }
    out.series_ambulance.assign(ticks, 0.0);
    out.series_all.assign(ticks, 0.0);
    out.ambulance_routes.resize(cfg.fleet_size);
    out.ambulance_arrivals.assign(cfg.fleet_size, -1.0);
  }

  double now() const { return static_cast<double>(tick) * cfg.tick_s; }

  Point position(const Vehicle& v) const {
    if (!v.on_edge) return cfg.graph.vertex(v.junction).position();
    const Edge& e = cfg.graph.edge(v.edge);
    const Vertex& a = cfg.graph.vertex(e.src);
    const Vertex& b = cfg.graph.vertex(e.dst);
    const double f = v.offset / e.length_m;
    return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  }

  Vehicle& spawn(bool ambulance, VertexId at, VertexId target) {
    Vehicle v;
    v.id = static_cast<std::uint32_t>(vehicles.size());
    v.ambulance = ambulance;
    v.junction = at;
    v.target = target;
    v.active = true;
    // Packet phase: a whole number of ticks inside one packet interval.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double phase_ticks = std::floor(u * cfg.packet_interval_s / cfg.tick_s);
    v.next_packet = now() + phase_ticks * cfg.tick_s;
    vehicles.push_back(std::move(v));
    return vehicles.back();
  }

  void inject() {
    const double t = now();
    while (next_trip < trip_order.size() && cfg.background[trip_order[next_trip]].depart_s <= t) {
      const auto& trip = cfg.background[trip_order[next_trip++]];
      if (trip.route.empty()) continue;
      Vehicle& v = spawn(false, cfg.graph.edge(trip.route.front()).src, cfg.graph.edge(trip.route.back()).dst);
      v.route = trip.route;
    }
    while (next_ambulance < cfg.fleet_size &&
           static_cast<double>(next_ambulance) * cfg.injection_interval_s <= t) {
      const std::size_t index = next_ambulance++;
      Vehicle& v = spawn(true, cfg.ambulance_source, cfg.ambulance_target);
      v.ambulance_index = index;
      try {
        plan_ambulance(v, t);
      } catch (const NoPathError&) {
        v.active = false;  // stalled
        continue;
      }
      if (v.junction == v.target) arrive(v, t);
    }
  }

  void plan_ambulance(Vehicle& v, double t) {
    if (v.junction == v.target) return;
    switch (cfg.planner) {
      case PlannerKind::SSP:
        v.route = dijkstra_ssp(cost_graph, v.junction, v.target, kDimLength).chosen.edges;
        break;
      case PlannerKind::POTMO: {
        const TemporalGraph g = build_cost_graph(cfg.graph, forecast, cfg.desirability, cfg.twin);
        PotmoOptions opts;
        opts.paper_literal_priority = cfg.paper_literal_priority;
        PlanResult plan = potmo_astar(g, v.junction, t, v.target, beeline_heuristic(g, v.target, cfg.twin), opts);
        forecast = commit_plan_load(std::move(forecast), plan.chosen);
        v.route = plan.chosen.edges;
        break;
      }
      case PlannerKind::WSP:
        // Reachability check only; the route is chosen junction by junction.
        shortest_by_weight(cfg.graph, v.junction, v.target, std::vector<double>(cfg.graph.edge_count(), 1.0));
        break;
    }
  }

  void arrive(Vehicle& v, double at) {
    v.active = false;
    if (v.ambulance) {
      ++out.ard;
      out.ambulance_arrivals[v.ambulance_index] = at;
    }
  }

  void emit_packets() {
    const double t = now();
    double sum_all = 0.0, sum_amb = 0.0;
    std::size_t n_all = 0, n_amb = 0;
    for (Vehicle& v : vehicles) {
      if (!v.active) continue;
      while (v.next_packet <= t) {
        v.next_packet += cfg.packet_interval_s;
        const Point origin = position(v);
        std::vector<std::size_t> lengths(queues.size());
        for (std::size_t i = 0; i < queues.size(); ++i) lengths[i] = queues[i].length(t);
        const std::size_t m = assign_mel(origin, mel_pos, lengths, mel_ids);
        const Mel& mel = cfg.mels[m];
        auto timing = queues[m].serve(t, mel.instructions_per_packet, mel.service_rate_ips, distance(origin, mel_pos[m]));
        CommRecord rec{v.id, v.ambulance, origin, t, m, timing.wait_s, timing.service_s, timing.propagation_s,
                       timing.transmission_s, lengths[m]};
        out.comms.push_back(rec);
        sum_all += rec.transmission_s;
        ++n_all;
        if (v.ambulance) {
          sum_amb += rec.transmission_s;
          ++n_amb;
          ++out.ambulance_packets;
          out.tec_wh += cfg.twin.radio_j_per_packet / 3600.0;
        }
      }
    }
    if (n_all) out.series_all[tick] = sum_all / static_cast<double>(n_all);
    if (n_amb) out.series_ambulance[tick] = sum_amb / static_cast<double>(n_amb);
  }

  void observe() {
    const double t = now();
    if (std::fmod(t, kObservationInterval) != 0.0) return;
    const TemporalGraph& g = cfg.graph;
    for (VertexId r = 0; r < g.vertex_count(); ++r) {
      if (!rsu[r]) continue;
      std::size_t count = 0;
      for (EdgeId e : g.in_edges(r)) count += occupancy[e];
      for (EdgeId e : g.out_edges(r)) count += occupancy[e];
      out.rsu_observations.push_back({r, t, static_cast<double>(count)});
    }
  }

  // Next edge for a vehicle waiting at a junction; nullopt when stalled.
  std::optional<EdgeId> next_edge(Vehicle& v, const std::vector<double>& live_counts) {
    if (v.ambulance && cfg.planner == PlannerKind::WSP) {
      auto weights = wsp_reweight(cfg.graph, {v.tick_position, v.waiting_s}, live_counts, v.target, rsu);
      try {
        return shortest_by_weight(cfg.graph, v.junction, v.target, weights).chosen.edges.front();
      } catch (const NoPathError&) {
        return std::nullopt;
      }
    }
    return v.route[v.next];
  }

  void move(Vehicle& v, const std::vector<double>& live_counts) {
    const TemporalGraph& g = cfg.graph;
    const double t0 = now();
    double budget = cfg.tick_s;
    while (budget > 0.0 && v.active) {
      if (!v.on_edge) {
        auto e = next_edge(v, live_counts);
        if (!e) {
          v.active = false;
          return;
        }
        if (occupancy[*e] >= capacity[*e]) {
          v.waiting_s += budget;
          return;
        }
        ++occupancy[*e];
        v.on_edge = true;
        v.edge = *e;
        v.offset = 0.0;
        if (v.ambulance) out.ambulance_routes[v.ambulance_index].push_back(*e);
        if (v.ambulance && cfg.planner == PlannerKind::WSP) v.route.push_back(*e);
      }
      const Edge& e = g.edge(v.edge);
      const double others = static_cast<double>(occupancy[v.edge] - 1);
      const double speed = std::min(e.vmax_ms, e.vmax_ms / (1.0 + cfg.congestion_beta * others));
      const double to_end = (e.length_m - v.offset) / speed;
      double moved;
      if (to_end <= budget) {
        moved = e.length_m - v.offset;
        budget -= to_end;
        --occupancy[v.edge];
        v.on_edge = false;
        v.junction = e.dst;
        ++v.next;
      } else {
        moved = speed * budget;
        v.offset += moved;
        budget = 0.0;
      }
      if (v.ambulance && moved > 0.0) {
        out.moves.push_back({t0, v.id, v.edge, moved, speed});
        out.tec_wh += traction_energy(cfg.twin, moved, e.slope_rad, speed);
      }
      if (!v.on_edge) {
        const bool done = v.ambulance ? v.junction == v.target : v.next == v.route.size();
        if (done) arrive(v, t0 + cfg.tick_s - budget);
      }
    }
  }

  void step() {
    if (tick >= ticks) return;
    inject();
    emit_packets();
    observe();
    std::vector<double> live_counts(occupancy.begin(), occupancy.end());
    for (Vehicle& v : vehicles) {
      if (v.active) v.tick_position = position(v);
    }
    for (Vehicle& v : vehicles) {
      if (v.active) move(v, live_counts);
    }
    ++tick;
  }
};

Simulation::Simulation(SimConfig cfg) : state_(std::make_unique<State>(std::move(cfg))) {}
Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

void Simulation::step() { state_->step(); }
bool Simulation::finished() const { return state_->tick >= state_->ticks; }
double Simulation::clock() const { return state_->now(); }

std::size_t Simulation::active_vehicles() const {
  return static_cast<std::size_t>(
      std::count_if(state_->vehicles.begin(), state_->vehicles.end(), [](const Vehicle& v) { return v.active; }));
}

std::optional<std::pair<EdgeId, double>> Simulation::vehicle_position(std::uint32_t vehicle) const {
  const Vehicle& v = state_->vehicles.at(vehicle);
  if (!v.on_edge) return std::nullopt;
  return std::pair{v.edge, v.offset};
}

std::uint32_t Simulation::add_vehicle(std::vector<EdgeId> route) {
  if (route.empty()) throw std::invalid_argument("route must not be empty");
  const TemporalGraph& g = state_->cfg.graph;
  Vehicle& v = state_->spawn(false, g.edge(route.front()).src, g.edge(route.back()).dst);
  v.route = std::move(route);
  return v.id;
}

ScenarioResult Simulation::result() && { return std::move(state_->out); }

ScenarioResult run_scenario(const SimConfig& cfg) {
  Simulation sim(cfg);
  while (!sim.finished()) sim.step();
  return std::move(sim).result();
}

ForecastTable replay_forecast(const SimConfig& cfg) {
  SimConfig background = cfg;
  background.fleet_size = 0;
  background.forecast.reset();
  const ScenarioResult r = run_scenario(background);
  const double width = cfg.graph.bin_width();
  const auto bins = static_cast<std::size_t>(std::ceil(cfg.horizon_s / width));
  ForecastTable observed = ingest_observations(r.rsu_observations, cfg.graph.vertex_count(), width, bins);
  return smooth_spatial(observed, cfg.graph);
}

double recompute_tec(const SimConfig& cfg, const ScenarioResult& result) {
  double wh = 0.0;
  for (const MoveEvent& m : result.moves) {
    wh += traction_energy(cfg.twin, m.distance_m, cfg.graph.edge(m.edge).slope_rad, m.speed_ms);
  }
  std::size_t packets = 0;
  for (const CommRecord& c : result.comms) packets += c.ambulance ? 1 : 0;
  return wh + static_cast<double>(packets) * cfg.twin.radio_j_per_packet / 3600.0;
}

// --- Series metrics ------------------------------------------------------------

std::vector<double> pareto_min_series(std::span<const std::vector<double>> runs) {
  if (runs.empty()) throw std::invalid_argument("pareto_min_series needs at least one run");
  std::vector<double> floor = runs[0];
  for (const auto& run : runs.subspan(1)) {
    if (run.size() != floor.size()) throw std::invalid_argument("series length mismatch");
    for (std::size_t i = 0; i < run.size(); ++i) floor[i] = std::min(floor[i], run[i]);
  }
  return floor;
}

double pmd(std::span<const double> run, std::span<const double> floor) {
  if (run.size() != floor.size()) throw std::invalid_argument("series length mismatch");
  if (run.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run[i] < floor[i]) {
      throw std::invalid_argument("run lies below the floor at step " + std::to_string(i));
    }
    total += run[i] - floor[i];
  }
  return total / static_cast<double>(run.size());
}

double fraction_on_front(std::span<const double> run, std::span<const double> floor) {
  if (run.size() != floor.size()) throw std::invalid_argument("series length mismatch");
  if (run.empty()) return 1.0;
  std::size_t on = 0;
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run[i] < floor[i] - 1e-9) {
      throw std::invalid_argument("run lies below the floor at step " + std::to_string(i));
    }
    if (std::abs(run[i] - floor[i]) <= 1e-9) ++on;
  }
  return static_cast<double>(on) / static_cast<double>(run.size());
}

}  // namespace potmo
