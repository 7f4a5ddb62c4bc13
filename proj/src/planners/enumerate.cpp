#include <chrono>
#include <stdexcept>
#include <string>

#include "potmo/error.hpp"
#include "potmo/planners.hpp"

namespace potmo {

namespace {

void extend_paths(const TemporalGraph& g, VertexId at, VertexId target, std::vector<bool>& on_path,
                  std::vector<EdgeId>& path, std::vector<std::vector<EdgeId>>& out) {
  if (at == target) {
    out.push_back(path);
    return;
  }
  for (EdgeId e : g.out_edges(at)) {
    VertexId next = g.edge(e).dst;
    if (on_path[next]) continue;
    on_path[next] = true;
    path.push_back(e);
    extend_paths(g, next, target, on_path, path, out);
    path.pop_back();
    on_path[next] = false;
  }
}

}  // namespace

std::vector<std::vector<EdgeId>> enumerate_simple_paths(const TemporalGraph& g, VertexId source, VertexId target) {
  if (g.vertex_count() > kMaxEnumerationVertices) {
    throw std::invalid_argument("refusing to enumerate paths on " + std::to_string(g.vertex_count()) +
                                " vertices (limit " + std::to_string(kMaxEnumerationVertices) + ")");
  }
  g.vertex(source);
  g.vertex(target);
  std::vector<std::vector<EdgeId>> paths;
  std::vector<bool> on_path(g.vertex_count(), false);
  std::vector<EdgeId> path;
  on_path[source] = true;
  extend_paths(g, source, target, on_path, path, paths);
  return paths;
}

PlanResult brute_force_optimum(const TemporalGraph& g, VertexId source, double start_s, VertexId target) {
  auto started = std::chrono::steady_clock::now();
  auto paths = enumerate_simple_paths(g, source, target);
  if (paths.empty()) {
    throw NoPathError("no path from " + std::to_string(source) + " to " + std::to_string(target));
  }
  std::vector<Label> evaluated;
  evaluated.reserve(paths.size());
  std::vector<CostVec> costs;
  for (const auto& p : paths) {
    evaluated.push_back(evaluate_path(g, source, p, start_s));
    costs.push_back(evaluated.back().cost);
  }
  auto front_costs = pareto_front(costs);

  // Keep every label whose cost is on the front; choose_final then applies the
  // same tie-break a search would.
  PlanResult r;
  std::vector<Label> on_front;
  for (Label& l : evaluated) {
    for (const CostVec& c : front_costs) {
      if (l.cost == c) {
        on_front.push_back(std::move(l));
        break;
      }
    }
  }
  r.chosen = choose_final(on_front);
  // One representative per distinct front cost, matching the collapsed front.
  for (const CostVec& c : front_costs) {
    std::vector<Label> same;
    for (const Label& l : on_front) {
      if (l.cost == c) same.push_back(l);
    }
    r.front.push_back(choose_final(same));
  }
  r.expanded = paths.size();
  r.exact = g.is_fifo();
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace potmo
