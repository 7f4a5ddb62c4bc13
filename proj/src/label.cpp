#include "potmo/label.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace potmo {

bool Label::visits(VertexId v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }

Label root_label(VertexId origin, double start_s, std::size_t dims) {
  if (!(start_s >= 0.0)) throw std::invalid_argument("start time must be nonnegative");
  Label l;
  l.cost = CostVec(dims);
  l.vertices = {origin};
  l.start_s = start_s;
  l.arrival_s = start_s;
  return l;
}

Label label_extend(const TemporalGraph& g, const Label& label, const CostVec& w, EdgeId e) {
  const Edge& edge = g.edge(e);
  if (edge.src != label.head()) {
    throw std::invalid_argument("edge " + std::to_string(e) + " does not leave vertex " + std::to_string(label.head()));
  }
  if (label.visits(edge.dst)) {
    throw std::invalid_argument("edge " + std::to_string(e) + " revisits vertex " + std::to_string(edge.dst));
  }
  Label next = label;
  next.cost += w;
  next.edges.push_back(e);
  next.vertices.push_back(edge.dst);
  next.departures.push_back(label.arrival_s);
  next.arrival_s = label.arrival_s + w[g.time_dim()];
  return next;
}

Label evaluate_path(const TemporalGraph& g, VertexId origin, std::span<const EdgeId> edges, double start_s,
                    bool static_costs) {
  Label l = root_label(origin, start_s, g.dims());
  for (EdgeId e : edges) {
    const CostVec& w = g.edge_cost_at(e, static_costs ? 0.0 : l.arrival_s);
    l = label_extend(g, l, w, e);
  }
  return l;
}

bool LabelSet::merge(Label label) {
  for (const Label& l : labels_) {
    if (l.cost == label.cost || dominates(l.cost, label.cost)) return false;
  }
  // Evict dominated labels while keeping the expanded prefix contiguous.
  std::vector<Label> kept;
  kept.reserve(labels_.size() + 1);
  std::size_t kept_expanded = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (dominates(label.cost, labels_[i].cost)) continue;
    if (i < expanded_) ++kept_expanded;
    kept.push_back(std::move(labels_[i]));
  }
  kept.push_back(std::move(label));
  labels_ = std::move(kept);
  expanded_ = kept_expanded;
  return true;
}

bool LabelSet::is_consistent() const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!is_simple(labels_[i])) return false;
    for (std::size_t j = 0; j < labels_.size(); ++j) {
      if (i == j) continue;
      if (dominates(labels_[j].cost, labels_[i].cost) || labels_[j].cost == labels_[i].cost) return false;
    }
  }
  return true;
}

bool is_simple(const Label& label) {
  std::unordered_set<VertexId> seen;
  for (VertexId v : label.vertices) {
    if (!seen.insert(v).second) return false;
  }
  return label.vertices.size() == label.edges.size() + 1;
}

}  // namespace potmo
