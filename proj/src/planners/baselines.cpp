#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "potmo/error.hpp"
#include "potmo/planners.hpp"

namespace potmo {

namespace {

constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

// Label-setting scalar search. `step(e, key_at_src)` returns the key increment
// for entering e; must be nonnegative and FIFO for correctness.
std::vector<EdgeId> scalar_search(const TemporalGraph& g, VertexId source, VertexId target, double start_key,
                                  const std::function<double(EdgeId, double)>& step, std::size_t& expanded) {
  g.vertex(source);
  g.vertex(target);
  const std::size_t n = g.vertex_count();
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<EdgeId> parent(n, kNoEdge);
  std::vector<bool> settled(n, false);
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  key[source] = start_key;
  queue.emplace(start_key, source);
  while (!queue.empty()) {
    auto [k, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = true;
    ++expanded;
    if (u == target) break;
    for (EdgeId e : g.out_edges(u)) {
      const Edge& edge = g.edge(e);
      if (settled[edge.dst]) continue;
      double candidate = k + step(e, k);
      if (candidate < key[edge.dst]) {
        key[edge.dst] = candidate;
        parent[edge.dst] = e;
        queue.emplace(candidate, edge.dst);
      }
    }
  }
  if (!settled[target]) {
    throw NoPathError("no path from " + std::to_string(source) + " to " + std::to_string(target));
  }
  std::vector<EdgeId> path;
  for (VertexId v = target; v != source;) {
    EdgeId e = parent[v];
    path.push_back(e);
    v = g.edge(e).src;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

PlanResult single_route(Label chosen, std::size_t expanded, std::chrono::steady_clock::time_point started) {
  PlanResult r;
  r.front = {chosen};
  r.chosen = std::move(chosen);
  r.expanded = expanded;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace

const Label& choose_final(std::span<const Label> front) {
  if (front.empty()) throw std::invalid_argument("choose_final on an empty front");
  const Label* best = &front[0];
  for (const Label& l : front.subspan(1)) {
    switch (lex_compare(l.cost, best->cost)) {
      case Ordering::Less:
        best = &l;
        break;
      case Ordering::Equal:
        if (l.edges.size() < best->edges.size() ||
            (l.edges.size() == best->edges.size() && l.arrival_s < best->arrival_s)) {
          best = &l;
        }
        break;
      case Ordering::Greater:
        break;
    }
  }
  return *best;
}

PlanResult dijkstra_ssp(const TemporalGraph& g, VertexId source, VertexId target, std::size_t dim) {
  auto started = std::chrono::steady_clock::now();
  if (dim >= g.dims()) throw std::invalid_argument("dimension " + std::to_string(dim) + " out of range");
  std::size_t expanded = 0;
  auto path = scalar_search(
      g, source, target, 0.0, [&](EdgeId e, double) { return g.cost_bins(e)[0][dim]; }, expanded);
  return single_route(evaluate_path(g, source, path, 0.0, /*static_costs=*/true), expanded, started);
}

PlanResult tdd(const TemporalGraph& g, VertexId source, double start_s, VertexId target) {
  auto started = std::chrono::steady_clock::now();
  if (!(start_s >= 0.0)) throw std::invalid_argument("start time must be nonnegative");
  const std::size_t td = g.time_dim();
  std::size_t expanded = 0;
  auto path = scalar_search(
      g, source, target, start_s, [&](EdgeId e, double at) { return g.edge_cost_at(e, at)[td]; }, expanded);
  PlanResult r = single_route(evaluate_path(g, source, path, start_s), expanded, started);
  r.exact = g.is_fifo();
  return r;
}

PlanResult shortest_by_weight(const TemporalGraph& g, VertexId source, VertexId target,
                              std::span<const double> weights) {
  auto started = std::chrono::steady_clock::now();
  if (weights.size() != g.edge_count()) throw std::invalid_argument("one weight per edge required");
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("edge weights must be nonnegative");
  }
  std::size_t expanded = 0;
  auto path = scalar_search(
      g, source, target, 0.0, [&](EdgeId e, double) { return weights[e]; }, expanded);
  Label chosen;
  if (g.has_costs()) {
    chosen = evaluate_path(g, source, path, 0.0, /*static_costs=*/true);
  } else {
    double total = 0.0;
    chosen = root_label(source, 0.0, 1);
    for (EdgeId e : path) {
      total += weights[e];
      chosen.edges.push_back(e);
      chosen.vertices.push_back(g.edge(e).dst);
      chosen.departures.push_back(0.0);
    }
    chosen.cost = CostVec{total};
  }
  return single_route(std::move(chosen), expanded, started);
}

}  // namespace potmo
