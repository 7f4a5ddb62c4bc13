#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <future>
#include <iostream>

#include "potmo/cost_model.hpp"
#include "potmo/error.hpp"
#include "potmo/microsim.hpp"
#include "potmo/planners.hpp"
#include "potmo/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace potmo;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNoPath = 2;

void setup_logging(bool verbose) {
  auto logger = spdlog::stderr_color_mt("potmo");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("POTMO_LOG")) spdlog::set_level(spdlog::level::from_str(env));
  if (verbose) spdlog::set_level(spdlog::level::debug);
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(out, text);
    spdlog::info("wrote {}", out);
  }
}

struct PlanArgs {
  std::string scenario;
  std::string algo = "potmo";
  std::optional<VertexId> source;
  std::optional<VertexId> target;
  double start_s = 0.0;
  std::string dim = "length";
  bool paper_literal = false;
  std::string out;
};

PlanResult plan_once(const Scenario& sc, const TemporalGraph& g, const ForecastTable& forecast, const PlanArgs& a,
                     VertexId s, VertexId t, double start) {
  return plan_scenario(sc, g, forecast, {a.algo, s, t, start, parse_dim(a.dim), a.paper_literal});
}

int cmd_plan(const PlanArgs& a) {
  Scenario sc = load_scenario(a.scenario);
  const ForecastTable forecast = planning_forecast(sc);
  const TemporalGraph g = build_cost_graph(sc.sim.graph, forecast, sc.sim.desirability, sc.sim.twin);
  const VertexId s = a.source.value_or(sc.sim.ambulance_source);
  const VertexId t = a.target.value_or(sc.sim.ambulance_target);
  PlanResult plan = plan_once(sc, g, forecast, a, s, t, a.start_s);
  spdlog::info("{}: {} edges, {} labels expanded, {:.2f} ms", a.algo, plan.chosen.edges.size(), plan.expanded,
               plan.wall_ms);
  Json j = plan_to_json(plan);
  j.erase("wall_ms");
  j["algo"] = a.algo;
  if (a.algo == "ssp") {
    const std::size_t dim = parse_dim(a.dim);
    j["dim"] = a.dim;
    j["objective"] = plan.chosen.cost[dim];
  }
  emit(j, a.out);
  return 0;
}

struct FleetArgs {
  PlanArgs plan;
  std::size_t count = 0;
  double interval_s = 0.0;
};

// Sequential planning for a fleet; each committed plan loads the forecast
// seen by the next request.
int cmd_fleet(const FleetArgs& a) {
  Scenario sc = load_scenario(a.plan.scenario);
  ForecastTable forecast = planning_forecast(sc);
  const std::size_t count = a.count ? a.count : sc.sim.fleet_size;
  const double interval = a.interval_s > 0 ? a.interval_s : sc.sim.injection_interval_s;
  const VertexId s = a.plan.source.value_or(sc.sim.ambulance_source);
  const VertexId t = a.plan.target.value_or(sc.sim.ambulance_target);
  Json plans = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const double start = a.plan.start_s + static_cast<double>(i) * interval;
    const TemporalGraph g = build_cost_graph(sc.sim.graph, forecast, sc.sim.desirability, sc.sim.twin);
    PlanResult plan = plan_once(sc, g, forecast, a.plan, s, t, start);
    forecast = commit_plan_load(std::move(forecast), plan.chosen);
    Json j = plan_to_json(plan);
    j.erase("wall_ms");
    j.erase("front");
    j["agent"] = i;
    j["start_s"] = start;
    plans.push_back(std::move(j));
  }
  emit(Json{{"plans", std::move(plans)}}, a.plan.out);
  return 0;
}

Json run_summary(const ScenarioResult& r) {
  return {{"ard", r.ard}, {"tec_wh", r.tec_wh}, {"ambulance_packets", r.ambulance_packets},
          {"packets", r.comms.size()}};
}

void write_run(const ScenarioResult& r, const SimConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_comms_csv(r, dir / "comms.csv");
  write_series_csv(r, cfg.tick_s, dir / "series.csv");
}

struct SimArgs {
  std::string scenario;
  std::string algo = "ssp";
  std::uint64_t seed = 0;
  std::string out;
  bool paper_literal = false;
};

fs::path output_dir(const Scenario& sc, const std::string& out) {
  if (!out.empty()) return out;
  fs::path dir = sc.output_dir;
  return dir.is_absolute() ? dir : sc.root / dir;
}

int cmd_simulate(const SimArgs& a) {
  Scenario sc = load_scenario(a.scenario);
  sc.sim.seed = a.seed;
  sc.sim.planner = planner_from_string(a.algo);
  sc.sim.paper_literal_priority = a.paper_literal;
  const fs::path dir = output_dir(sc, a.out);
  ScenarioResult r = run_scenario(sc.sim);
  write_run(r, sc.sim, dir);
  Json j{{"planner", a.algo}, {"seed", a.seed}};
  j.update(run_summary(r));
  emit(j, (dir / "result.json").string());
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_compare(const SimArgs& a) {
  Scenario sc = load_scenario(a.scenario);
  sc.sim.seed = a.seed;
  sc.sim.paper_literal_priority = a.paper_literal;
  const fs::path dir = output_dir(sc, a.out);

  struct Run {
    std::string name;
    SimConfig cfg;
  };
  std::vector<Run> runs;
  SimConfig none = sc.sim;
  none.fleet_size = 0;
  runs.push_back({"NO_AMBU", none});
  for (PlannerKind k : {PlannerKind::SSP, PlannerKind::WSP, PlannerKind::POTMO}) {
    SimConfig c = sc.sim;
    c.planner = k;
    std::string name = to_string(k);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    runs.push_back({name, c});
  }
  std::vector<std::future<ScenarioResult>> futures;
  for (const Run& r : runs) {
    futures.push_back(std::async(std::launch::async, [&r] {
      spdlog::info("running {}", r.name);
      return run_scenario(r.cfg);
    }));
  }
  std::vector<ScenarioResult> results;
  for (auto& f : futures) results.push_back(f.get());

  std::vector<std::vector<double>> all, amb;
  for (std::size_t i = 1; i < results.size(); ++i) {
    all.push_back(results[i].series_all);
    amb.push_back(results[i].series_ambulance);
  }
  const auto floor_all = pareto_min_series(all);
  const auto floor_amb = pareto_min_series(amb);

  Json planners = Json::object();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    write_run(results[i], runs[i].cfg, dir / runs[i].name);
    Json j = run_summary(results[i]);
    if (i > 0) {
      j["pmd_all"] = pmd(results[i].series_all, floor_all);
      j["pmd_ambulance"] = pmd(results[i].series_ambulance, floor_amb);
      j["fraction_on_front_all"] = fraction_on_front(results[i].series_all, floor_all);
      j["fraction_on_front_ambulance"] = fraction_on_front(results[i].series_ambulance, floor_amb);
    }
    planners[runs[i].name] = std::move(j);
  }
  Json out{{"seed", a.seed}, {"planners", std::move(planners)}};
  emit(out, (dir / "result.json").string());
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct GenArgs {
  std::size_t rows = 8;
  std::size_t cols = 8;
  std::uint64_t seed = 1;
  std::size_t trips = ScenarioOptions{}.background_trips;
  std::size_t fleet = ScenarioOptions{}.fleet_size;
  bool with_forecast = false;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  ScenarioOptions opts;
  opts.background_trips = a.trips;
  opts.fleet_size = a.fleet;
  opts.include_forecast = a.with_forecast;
  Scenario sc = generate_scenario(a.rows, a.cols, a.seed, opts);
  save_scenario(sc, a.out);
  std::cout << (fs::path(a.out) / "scenario.json").string() << "\n";
  return 0;
}

struct MetricsArgs {
  std::vector<std::string> runs;
  std::string out;
};

int cmd_metrics(const MetricsArgs& a) {
  std::vector<SeriesFile> files;
  for (const auto& p : a.runs) files.push_back(read_series_csv(p));
  std::vector<std::vector<double>> all, amb;
  for (const auto& f : files) {
    all.push_back(f.all);
    amb.push_back(f.ambulance);
  }
  const auto floor_all = pareto_min_series(all);
  const auto floor_amb = pareto_min_series(amb);
  Json runs = Json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    runs.push_back({{"series", a.runs[i]},
                    {"pmd_all", pmd(files[i].all, floor_all)},
                    {"pmd_ambulance", pmd(files[i].ambulance, floor_amb)},
                    {"fraction_on_front_all", fraction_on_front(files[i].all, floor_all)},
                    {"fraction_on_front_ambulance", fraction_on_front(files[i].ambulance, floor_amb)}});
  }
  emit(Json{{"runs", std::move(runs)}}, a.out);
  return 0;
}

struct OracleArgs {
  std::string graph;
  VertexId source = 0;
  VertexId target = 0;
  double start_s = 0.0;
};

int cmd_oracle(const OracleArgs& a) {
  TemporalGraph g = load_graph(a.graph);
  if (g.vertex_count() > kMaxEnumerationVertices) {
    throw std::invalid_argument("oracle refuses graphs with more than " + std::to_string(kMaxEnumerationVertices) +
                                " vertices (got " + std::to_string(g.vertex_count()) + ")");
  }
  if (!g.has_costs()) {
    g = build_cost_graph(g, ForecastTable{}, DesirabilityMap(std::vector<double>(g.vertex_count(), 0.0)),
                         VehicleTwin{});
  }
  const PlanResult truth = brute_force_optimum(g, a.source, a.start_s, a.target);
  PotmoOptions opts;
  opts.check_invariants = true;
  const PlanResult got = potmo_astar(g, a.source, a.start_s, a.target, {}, opts);
  // The search stops at the first target pop, so only the lex-min is
  // guaranteed; the partial front is reported for information.
  bool match = truth.chosen.cost == got.chosen.cost;
  Json checks = Json::object();
  if (g.dims() == 1) {
    const bool tdd_ok = tdd(g, a.source, a.start_s, a.target).chosen.cost == truth.chosen.cost;
    const bool ssp_ok = g.is_fifo() && g.cost_bins(0).size() == 1
                            ? dijkstra_ssp(g, a.source, a.target, 0).chosen.cost == truth.chosen.cost
                            : true;
    checks["tdd"] = tdd_ok;
    checks["dijkstra"] = ssp_ok;
    match = match && tdd_ok && ssp_ok;
  }
  for (const Label& l : truth.front) {
    std::cout << "front";
    for (double c : l.cost.values()) std::cout << ' ' << format_number(c);
    std::cout << "  path";
    for (EdgeId e : l.edges) std::cout << ' ' << e;
    std::cout << "\n";
  }
  std::cout << "potmo front " << got.front.size() << " of " << truth.front.size() << "\n";
  if (!checks.empty()) std::cout << "baselines " << checks.dump() << "\n";
  std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
  return match ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective time-dependent route planning and traffic microsimulation"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging (also POTMO_LOG=<level>)");

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Plan one route on a scenario's cost graph");
  p->add_option("--scenario", plan.scenario, "Scenario bundle directory or manifest")->required();
  p->add_option("--algo", plan.algo, "potmo | ssp | tdd | wsp")
      ->check(CLI::IsMember({"potmo", "ssp", "tdd", "wsp"}));
  p->add_option("--source", plan.source, "Source vertex (default: scenario's)");
  p->add_option("--target", plan.target, "Target vertex (default: scenario's)");
  p->add_option("--start", plan.start_s, "Departure time, s");
  p->add_option("--dim", plan.dim, "Cost dimension for ssp: cars, energy, desirability, time, length (or 0-4)");
  p->add_flag("--paper-literal-priority", plan.paper_literal, "Count the last edge's time twice in the queue key");
  p->add_option("--out", plan.out, "Output JSON path (default: stdout)");

  FleetArgs fleet;
  auto* f = app.add_subcommand("fleet", "Plan a fleet sequentially, committing each plan's load");
  f->add_option("--scenario", fleet.plan.scenario, "Scenario bundle directory or manifest")->required();
  f->add_option("--algo", fleet.plan.algo, "potmo | ssp | tdd")->check(CLI::IsMember({"potmo", "ssp", "tdd"}));
  f->add_option("--count", fleet.count, "Number of vehicles (default: scenario fleet size)");
  f->add_option("--interval", fleet.interval_s, "Seconds between departures (default: scenario's)");
  f->add_option("--source", fleet.plan.source, "Source vertex");
  f->add_option("--target", fleet.plan.target, "Target vertex");
  f->add_option("--start", fleet.plan.start_s, "First departure time, s");
  f->add_option("--dim", fleet.plan.dim, "Cost dimension for ssp");
  f->add_flag("--paper-literal-priority", fleet.plan.paper_literal, "Count the last edge's time twice");
  f->add_option("--out", fleet.plan.out, "Output JSON path (default: stdout)");

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "Run the microsimulation with one planner");
  s->add_option("--scenario", sim.scenario, "Scenario bundle directory or manifest")->required();
  s->add_option("--algo", sim.algo, "ssp | wsp | potmo")->check(CLI::IsMember({"ssp", "wsp", "potmo"}));
  s->add_option("--seed", sim.seed, "Random seed")->required();
  s->add_option("--out", sim.out, "Output directory (default: bundle's output)");
  s->add_flag("--paper-literal-priority", sim.paper_literal, "Count the last edge's time twice");

  SimArgs cmp;
  auto* c = app.add_subcommand("compare", "Run NO_AMBU, SSP, WSP and POTMO and compare them");
  c->add_option("--scenario", cmp.scenario, "Scenario bundle directory or manifest")->required();
  c->add_option("--seed", cmp.seed, "Random seed")->required();
  c->add_option("--out", cmp.out, "Output directory (default: bundle's output)");
  c->add_flag("--paper-literal-priority", cmp.paper_literal, "Count the last edge's time twice");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic grid scenario bundle");
  g->add_option("--rows", gen.rows, "Grid rows")->check(CLI::Range(std::size_t{2}, kMaxGridSide));
  g->add_option("--cols", gen.cols, "Grid columns")->check(CLI::Range(std::size_t{2}, kMaxGridSide));
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--trips", gen.trips, "Background trips");
  g->add_option("--fleet", gen.fleet, "Ambulance fleet size");
  g->add_flag("--with-forecast", gen.with_forecast, "Bundle a synthetic forecast instead of replaying traffic");
  g->add_option("--out", gen.out, "Output directory")->required();

  MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "Pareto-minimum distance between transmission-time series");
  m->add_option("runs", metrics.runs, "series.csv files")->required()->check(CLI::ExistingFile);
  m->add_option("--out", metrics.out, "Output JSON path (default: stdout)");

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Check the planner against exhaustive enumeration on a small graph");
  o->add_option("--graph", oracle.graph, "Graph JSON")->required();
  o->add_option("--source", oracle.source, "Source vertex")->required();
  o->add_option("--target", oracle.target, "Target vertex")->required();
  o->add_option("--start", oracle.start_s, "Departure time, s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  setup_logging(verbose);

  try {
    if (*p) return cmd_plan(plan);
    if (*f) return cmd_fleet(fleet);
    if (*s) return cmd_simulate(sim);
    if (*c) return cmd_compare(cmp);
    if (*g) return cmd_gen(gen);
    if (*m) return cmd_metrics(metrics);
    if (*o) return cmd_oracle(oracle);
  } catch (const ValidationError& e) {
    for (const auto& msg : e.failures()) spdlog::error("{}", msg);
    return kExitValidation;
  } catch (const NoPathError& e) {
    spdlog::error("no path: {}", e.what());
    return kExitNoPath;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 4;
  }
  return 0;
}
