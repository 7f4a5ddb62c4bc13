#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

#include "potmo/error.hpp"
#include "potmo/planners.hpp"

namespace potmo {

double wsp_weight(double edge_to_target, double agent_to_target, double waiting_s, double active_count) {
  return edge_to_target / std::max(agent_to_target, kWspEpsilon) * (edge_to_target + waiting_s) * std::max(active_count, 1.0);
}

std::vector<double> wsp_reweight(const TemporalGraph& g, const AgentState& agent, std::span<const double> active_counts,
                                 VertexId target, const std::vector<bool>& rsu_vertices) {
  if (active_counts.size() != g.edge_count()) throw std::invalid_argument("one count per edge required");
  if (rsu_vertices.size() != g.vertex_count()) throw std::invalid_argument("one RSU flag per vertex required");
  const Point target_pos = g.vertex(target).position();
  const double agent_to_target = distance(agent.position, target_pos);
  std::vector<double> weights(g.edge_count());
  for (const Edge& e : g.edges()) {
    VertexId anchor;
    if (rsu_vertices[e.dst]) {
      anchor = e.dst;
    } else if (rsu_vertices[e.src]) {
      anchor = e.src;
    } else {
      weights[e.id] = e.length_m;
      continue;
    }
    const double edge_to_target = distance(g.vertex(anchor).position(), target_pos);
    weights[e.id] = wsp_weight(edge_to_target, agent_to_target, agent.waiting_s, active_counts[e.id]);
  }
  return weights;
}

PlanResult wsp_plan(const TemporalGraph& g, const PlanRequest& request, const CountFeed& feed,
                    const std::vector<bool>& rsu_vertices, double tick_s, double horizon_s) {
  auto started = std::chrono::steady_clock::now();
  if (!(tick_s > 0.0)) throw std::invalid_argument("tick must be positive");
  g.vertex(request.source);
  g.vertex(request.target);

  std::vector<EdgeId> realised;
  std::vector<EdgeId> plan;
  VertexId junction = request.source;  // valid while not on an edge
  bool on_edge = false;
  EdgeId edge = 0;
  double offset = 0.0;  // metres along `edge`
  std::size_t replans = 0;
  bool arrived = request.source == request.target;

  for (double now = request.start_s; !arrived && now < request.start_s + horizon_s; now += tick_s) {
    Point position;
    VertexId next_junction;
    if (on_edge) {
      const Edge& e = g.edge(edge);
      const Vertex& a = g.vertex(e.src);
      const Vertex& b = g.vertex(e.dst);
      const double f = offset / e.length_m;
      position = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
      next_junction = e.dst;
    } else {
      position = g.vertex(junction).position();
      next_junction = junction;
    }
    if (next_junction != request.target) {
      auto weights = wsp_reweight(g, {position, 0.0}, feed(now), request.target, rsu_vertices);
      plan = shortest_by_weight(g, next_junction, request.target, weights).chosen.edges;
      ++replans;
    }

    double budget = tick_s;
    while (budget > 0.0 && !arrived) {
      if (!on_edge) {
        edge = plan.front();
        plan.erase(plan.begin());
        realised.push_back(edge);
        on_edge = true;
        offset = 0.0;
      }
      const Edge& e = g.edge(edge);
      const double to_end = (e.length_m - offset) / e.vmax_ms;
      if (to_end <= budget) {
        budget -= to_end;
        on_edge = false;
        junction = e.dst;
        arrived = junction == request.target;
      } else {
        offset += e.vmax_ms * budget;
        budget = 0.0;
      }
    }
  }
  if (!arrived) throw NoPathError("agent " + std::to_string(request.agent) + " did not reach its target");

  PlanResult r;
  if (g.has_costs()) {
    r.chosen = evaluate_path(g, request.source, realised, request.start_s);
  } else {
    r.chosen = root_label(request.source, request.start_s, 1);
    double length = 0.0;
    for (EdgeId e : realised) {
      length += g.edge(e).length_m;
      r.chosen.departures.push_back(r.chosen.arrival_s);
      r.chosen.arrival_s += g.edge(e).length_m / g.edge(e).vmax_ms;
      r.chosen.edges.push_back(e);
      r.chosen.vertices.push_back(g.edge(e).dst);
    }
    r.chosen.cost = CostVec{length};
  }
  r.front = {r.chosen};
  r.expanded = replans;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace potmo
