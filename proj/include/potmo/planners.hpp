#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "potmo/label.hpp"
#include "potmo/temporal_graph.hpp"

namespace potmo {

struct PlanRequest {
  VertexId source = 0;
  VertexId target = 0;
  double start_s = 0.0;
  std::uint32_t agent = 0;
};

struct PlanResult {
  Label chosen;
  std::vector<Label> front;  // labels reaching the target
  std::size_t expanded = 0;
  double wall_ms = 0.0;
  // False when optimality guarantees do not apply (non-FIFO inputs).
  bool exact = true;
};

/// Lexicographic minimum; ties go to the shorter path, then the earlier
/// arrival. Throws on an empty front.
const Label& choose_final(std::span<const Label> front);

/// Static single-objective Dijkstra over dimension `dim`, bin-0 costs.
PlanResult dijkstra_ssp(const TemporalGraph& g, VertexId source, VertexId target, std::size_t dim);

/// Time-dependent Dijkstra minimising arrival time; departure time of each
/// edge is the start plus the accumulated traversal times.
PlanResult tdd(const TemporalGraph& g, VertexId source, double start_s, VertexId target);

inline constexpr std::size_t kMaxEnumerationVertices = 12;

/// Every simple s-t path as an edge sequence. Refuses graphs with more than
/// kMaxEnumerationVertices vertices.
std::vector<std::vector<EdgeId>> enumerate_simple_paths(const TemporalGraph& g, VertexId source, VertexId target);

/// Exhaustive evaluation of every simple path; front is the Pareto front of
/// path costs, chosen is its lexicographic minimum.
PlanResult brute_force_optimum(const TemporalGraph& g, VertexId source, double start_s, VertexId target);

struct PotmoOptions {
  // Adds the last edge's traversal time to the time slot of the queue key a
  // second time, as the published pseudocode does.
  bool paper_literal_priority = false;
  // Re-verify every merged front (no dominated member, simple paths).
  bool check_invariants = false;
};

/// Priority-ordered, timed, multi-objective A*. `heuristic` may be empty
/// (zero estimate); when given it must not overestimate any dimension.
PlanResult potmo_astar(const TemporalGraph& g, VertexId source, double start_s, VertexId target,
                       const Heuristic& heuristic = {}, PotmoOptions options = {});

/// Static Dijkstra over caller-provided nonnegative per-edge weights. The
/// result's cost vector is the path evaluated against the graph's bin-0
/// costs when present.
PlanResult shortest_by_weight(const TemporalGraph& g, VertexId source, VertexId target,
                              std::span<const double> weights);

// --- Weighted shortest path ------------------------------------------------

inline constexpr double kWspEpsilon = 1e-6;

struct AgentState {
  Point position;         // current position
  double waiting_s = 0;   // time spent stationary in a jam
};

/// Per-edge weight for an edge whose junction lies `edge_to_target` metres
/// from the target, for an agent `agent_to_target` metres away. Counts below
/// one are treated as one.
double wsp_weight(double edge_to_target, double agent_to_target, double waiting_s, double active_count);

/// Reweights edges touching a roadside-unit junction by wsp_weight (anchor:
/// the edge's RSU-side junction, preferring the head); every other edge keeps
/// its length.
std::vector<double> wsp_reweight(const TemporalGraph& g, const AgentState& agent, std::span<const double> active_counts,
                                 VertexId target, const std::vector<bool>& rsu_vertices);

/// Live per-edge communication counts at a simulation time.
using CountFeed = std::function<std::vector<double>(double time_s)>;

/// Drives a single free-flowing agent tick by tick, reweighting and
/// replanning from its current position against the live feed; returns the
/// realised route. Throws NoPathError when a replan finds no route.
PlanResult wsp_plan(const TemporalGraph& g, const PlanRequest& request, const CountFeed& feed,
                    const std::vector<bool>& rsu_vertices, double tick_s = 1.0, double horizon_s = 86400.0);

}  // namespace potmo
