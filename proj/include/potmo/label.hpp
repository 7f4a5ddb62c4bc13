#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "potmo/cost_vec.hpp"
#include "potmo/temporal_graph.hpp"

namespace potmo {

/// A partial route: accumulated cost, the simple path taken, and the time the
/// route reaches its last vertex.
struct Label {
  CostVec cost;
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;   // origin first; size() == edges.size() + 1
  std::vector<double> departures;   // entry time of each edge
  double start_s = 0.0;
  double arrival_s = 0.0;

  VertexId head() const { return vertices.back(); }
  bool visits(VertexId v) const;
};

/// Zero-cost, empty-path label at `origin`.
Label root_label(VertexId origin, double start_s, std::size_t dims);

/// The extension operator: adds `w` component-wise, appends `e`, and advances
/// the arrival time by w[time_dim]. Throws if `e` does not start at the
/// label's head or would revisit a vertex.
Label label_extend(const TemporalGraph& g, const Label& label, const CostVec& w, EdgeId e);

/// Walks `edges` from `origin`, looking up each edge's cost at its departure
/// time. With `static_costs` every lookup uses bin 0.
Label evaluate_path(const TemporalGraph& g, VertexId origin, std::span<const EdgeId> edges, double start_s,
                    bool static_costs = false);

/// Pareto front of labels held at one vertex during a search.
class LabelSet {
 public:
  /// Inserts `label` unless an existing label dominates or equals its cost;
  /// evicts labels it dominates. Returns whether the front changed.
  bool merge(Label label);

  std::span<const Label> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  /// No member dominated by another, no duplicate costs, all paths simple.
  bool is_consistent() const;

  // Search bookkeeping: labels at index >= expanded_ have not yet been
  // extended along out-edges.
  std::size_t expanded() const noexcept { return expanded_; }
  void mark_expanded() noexcept { expanded_ = labels_.size(); }

 private:
  std::vector<Label> labels_;
  std::size_t expanded_ = 0;
};

bool is_simple(const Label& label);

}  // namespace potmo
