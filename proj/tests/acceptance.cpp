// One PASS/FAIL line per primary acceptance criterion; exit status is the
// number of failures.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include "potmo/microsim.hpp"
#include "potmo/planners.hpp"
#include "potmo/scenario_io.hpp"
#include "potmo/traffic_oracle.hpp"
#include "random_graphs.hpp"

using namespace potmo;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t graphs = 0, mismatches = 0;
  const std::size_t dims[] = {1, 3, 5};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t d = dims[seed % 3];
    testing::RandomGraphSpec spec{.vertices = 3 + seed % 6, .dims = d, .edge_probability = 0.25 + 0.05 * (seed % 5)};
    const TemporalGraph g = testing::random_graph(0xACCE55 + seed, spec);
    const VertexId t = static_cast<VertexId>(g.vertex_count() - 1);
    const PlanResult truth = brute_force_optimum(g, 0, 0.0, t);
    const Heuristic h = seed % 2 ? testing::exact_lower_bound(g, t) : Heuristic{};
    const PlanResult got = potmo_astar(g, 0, 0.0, t, h);
    ++graphs;
    if (!(got.chosen.cost == truth.chosen.cost)) ++mismatches;
  }
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << graphs << " graphs, " << mismatches << " mismatches, " << secs << " s";
  report(mismatches == 0 && secs < 60.0, "oracle equivalence", msg.str());
}

void baseline_collapse() {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TemporalGraph g = testing::random_graph(0xBA5E + seed, {.vertices = 8, .dims = 1});
    const CostVec p = potmo_astar(g, 0, 0.0, 7).chosen.cost;
    if (!(p == tdd(g, 0, 0.0, 7).chosen.cost) || !(p == dijkstra_ssp(g, 0, 7, 0).chosen.cost)) ++mismatches;
  }
  report(mismatches == 0, "baseline collapse", "100 graphs, " + std::to_string(mismatches) + " mismatches");
}

void path_count_law() {
  bool ok = true;
  std::ostringstream msg;
  for (std::size_t n = 3; n <= 6; ++n) {
    const std::size_t count = enumerate_simple_paths(testing::complete_graph(n), 0, 1).size();
    const auto law = static_cast<std::size_t>(std::floor(std::tgamma(static_cast<double>(n - 1)) * std::exp(1.0)));
    ok &= count == law;
    msg << "K" << n << "=" << count << (n < 6 ? " " : "");
  }
  report(ok, "path-count law", msg.str());
}

void wsp_evaluation() {
  // Target at the origin; agent position supplied per case.
  std::vector<Vertex> vs{{0, 0, 0, 0}, {1, 100, 0, 0}, {2, 160, 80, 0}, {3, 1, 0, 0}, {4, 1, 5, 0}};
  std::vector<Edge> es{{0, 2, 1, 100, 10, 0}, {1, 4, 3, 5, 10, 0}};
  const TemporalGraph g(std::move(vs), std::move(es), {});
  std::vector<bool> rsu{false, true, false, true, false};
  const auto a = wsp_reweight(g, {{0, 200}, 10.0}, std::vector<double>{3, 1}, 0, rsu);
  const auto b = wsp_reweight(g, {{0, 0}, 0.0}, std::vector<double>{3, 1}, 0, rsu);
  const bool ok = std::abs(a[0] - 165.0) <= 165.0 * 1e-9 && std::abs(b[1] - 1e6) <= 1e6 * 1e-9;
  std::ostringstream msg;
  msg.precision(12);
  msg << "phi=" << a[0] << " eps-case=" << b[1];
  report(ok, "weighted reweighting", msg.str());
}

void savitzky_golay() {
  const auto c = savgol_coefficients(5, 2);
  const auto oracle = testing::savgol_normal_equations(5, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::abs(c[i] - oracle[i]));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-5, 5);
  double poly_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double a0 = u(rng), a1 = u(rng), a2 = trial % 3 ? u(rng) : 0.0;
    auto f = [&](double x) { return a0 + a1 * x + a2 * x * x; };
    const double x0 = u(rng) * 20;
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += c[k] * f(x0 + k - 2);
    poly_err = std::max(poly_err, std::abs(s - f(x0)) / std::max(1.0, std::abs(f(x0))));
  }
  std::ostringstream msg;
  msg << "coefficient error " << worst << ", polynomial error " << poly_err;
  report(worst <= 1e-12 && poly_err <= 1e-9, "savitzky-golay", msg.str());
}

void planner_direction() {
  const auto t0 = Clock::now();
  Scenario sc = generate_scenario(8, 8, 1);
  sc.sim.seed = 1;
  sc.sim.planner = PlannerKind::SSP;
  const ScenarioResult ssp = run_scenario(sc.sim);
  sc.sim.planner = PlannerKind::POTMO;
  const ScenarioResult potmo = run_scenario(sc.sim);
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << "8x8 grid, centre target: POTMO TEC " << potmo.tec_wh << " Wh vs SSP " << ssp.tec_wh << " Wh; ARD "
      << potmo.ard << " vs " << ssp.ard << "; " << secs << " s";
  report(potmo.tec_wh <= ssp.tec_wh && potmo.ard >= ssp.ard && secs < 300.0, "centre-route direction", msg.str());
}

void metrics_algebra() {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0, 10);
  std::bernoulli_distribution tie(0.5);
  std::size_t violations = 0;
  for (int pair = 0; pair < 50; ++pair) {
    const std::size_t n = 1 + pair % 30;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = tie(rng) ? a[i] : u(rng);
    }
    if (pair % 7 == 0) b = a;
    const std::vector<std::vector<double>> runs{a, b};
    const auto floor = pareto_min_series(runs);
    for (const auto& r : runs) {
      for (std::size_t i = 0; i < n; ++i) violations += floor[i] > r[i];
      violations += (pmd(r, floor) == 0.0) != (fraction_on_front(r, floor) == 1.0);
    }
  }
  report(violations == 0, "metrics algebra", "50 pairs, " + std::to_string(violations) + " violations");
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POTMO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void compare_determinism() {
  const fs::path root = fs::temp_directory_path() / ("potmo_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  ScenarioOptions opts;
  opts.background_trips = 300;
  opts.fleet_size = 10;
  Scenario sc = generate_scenario(6, 6, 3, opts);
  sc.sim.horizon_s = 2400;
  save_scenario(sc, root / "bundle");
  const std::string base = "compare --scenario " + (root / "bundle").string() + " --seed 11 --out ";
  const int a = run_cli(base + (root / "a").string());
  const int b = run_cli(base + (root / "b").string());
  bool same = a == 0 && b == 0;
  std::size_t files = 0;
  if (same) {
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
      if (!entry.is_regular_file()) continue;
      const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
      same &= fs::exists(other) && read_text(entry.path()) == read_text(other);
      ++files;
    }
  }
  fs::remove_all(root);
  report(same && files > 0, "compare determinism", std::to_string(files) + " files compared byte for byte");
}

void energy_conservation() {
  double worst = 0.0;
  const PlannerKind kinds[] = {PlannerKind::SSP, PlannerKind::WSP, PlannerKind::POTMO};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioOptions opts;
    opts.background_trips = 200;
    opts.fleet_size = 8;
    opts.planner = kinds[seed % 3];
    Scenario sc = generate_scenario(5, 6, seed, opts);
    sc.sim.horizon_s = 1800;
    const ScenarioResult r = run_scenario(sc.sim);
    const double again = recompute_tec(sc.sim, r);
    worst = std::max(worst, std::abs(again - r.tec_wh) / std::max(std::abs(r.tec_wh), 1e-12));
  }
  std::ostringstream msg;
  msg << "10 scenarios, worst relative gap " << worst;
  report(worst <= 1e-6, "energy conservation", msg.str());
}

}  // namespace

int main() {
  oracle_equivalence();
  baseline_collapse();
  path_count_law();
  wsp_evaluation();
  savitzky_golay();
  planner_direction();
  metrics_algebra();
  compare_determinism();
  energy_conservation();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
