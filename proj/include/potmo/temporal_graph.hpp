#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "potmo/cost_vec.hpp"

namespace potmo {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct Vertex {
  VertexId id = 0;
  double x = 0.0;  // m
  double y = 0.0;  // m
  double z = 0.0;  // elevation, m

  Point position() const { return {x, y}; }
};

struct Edge {
  EdgeId id = 0;
  VertexId src = 0;
  VertexId dst = 0;
  double length_m = 0.0;
  double vmax_ms = 0.0;
  double slope_rad = 0.0;
};

/// Remaining-cost estimate for reaching the search target from a vertex at a
/// given time.
using Heuristic = std::function<CostVec(VertexId vertex, double time_s)>;

/// Directed multigraph whose edges carry piecewise-constant cost vectors over
/// fixed-width time bins. Vertex and edge ids are dense: id == index.
///
/// A graph constructed without cost bins is a bare topology; cost lookups on
/// it throw. Immutable after construction.
class TemporalGraph {
 public:
  TemporalGraph() = default;
  TemporalGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::vector<std::vector<CostVec>> cost_bins,
                std::size_t dims = kDefaultDims, std::size_t time_dim = kDimTime, double bin_width_s = 60.0);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Vertex& vertex(VertexId v) const;
  const Edge& edge(EdgeId e) const;
  std::span<const EdgeId> out_edges(VertexId v) const;
  std::span<const EdgeId> in_edges(VertexId v) const;

  std::size_t dims() const noexcept { return dims_; }
  std::size_t time_dim() const noexcept { return time_dim_; }
  double bin_width() const noexcept { return bin_width_; }
  bool has_costs() const noexcept { return !cost_bins_.empty(); }
  std::span<const CostVec> cost_bins(EdgeId e) const;

  /// Bin floor(t / bin_width); throws for negative t.
  std::size_t bin_index(double t) const;

  /// Cost of entering `e` at time `t`, clamped to the edge's last bin.
  const CostVec& edge_cost_at(EdgeId e, double t) const;

  /// Every edge's traversal time is non-decreasing across consecutive bins,
  /// which is the non-overtaking condition for piecewise-constant costs.
  bool is_fifo() const;

  /// Same topology with a fresh set of cost bins.
  TemporalGraph with_costs(std::vector<std::vector<CostVec>> cost_bins, std::size_t dims, std::size_t time_dim) const;

  double planar_distance(VertexId a, VertexId b) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<CostVec>> cost_bins_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::size_t dims_ = kDefaultDims;
  std::size_t time_dim_ = kDimTime;
  double bin_width_ = 60.0;
};

}  // namespace potmo
