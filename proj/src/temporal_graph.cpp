#include "potmo/temporal_graph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace potmo {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

TemporalGraph::TemporalGraph(std::vector<Vertex> vertices, std::vector<Edge> edges,
                             std::vector<std::vector<CostVec>> cost_bins, std::size_t dims, std::size_t time_dim,
                             double bin_width_s)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      cost_bins_(std::move(cost_bins)),
      dims_(dims),
      time_dim_(time_dim),
      bin_width_(bin_width_s) {
  if (dims_ == 0) throw std::invalid_argument("graph needs at least one cost dimension");
  if (time_dim_ >= dims_) throw std::invalid_argument("time dimension index out of range");
  if (!(bin_width_ > 0.0)) throw std::invalid_argument("bin width must be positive");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id != i) throw std::invalid_argument("vertex ids must be dense: expected " + std::to_string(i));
  }
  out_.resize(vertices_.size());
  in_.resize(vertices_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != i) throw std::invalid_argument("edge ids must be dense: expected " + std::to_string(i));
    if (e.src >= vertices_.size() || e.dst >= vertices_.size()) {
      throw std::invalid_argument("edge " + std::to_string(e.id) + " references an unknown vertex");
    }
    if (!(e.length_m > 0.0) || !(e.vmax_ms > 0.0)) {
      throw std::invalid_argument("edge " + std::to_string(e.id) + " needs positive length and speed");
    }
    out_[e.src].push_back(e.id);
    in_[e.dst].push_back(e.id);
  }
  if (!cost_bins_.empty()) {
    if (cost_bins_.size() != edges_.size()) throw std::invalid_argument("cost bins must cover every edge");
    for (std::size_t i = 0; i < cost_bins_.size(); ++i) {
      if (cost_bins_[i].empty()) throw std::invalid_argument("edge " + std::to_string(i) + " has no cost bins");
      for (const CostVec& c : cost_bins_[i]) {
        if (c.size() != dims_) throw std::invalid_argument("edge " + std::to_string(i) + " cost arity mismatch");
        if (!(c[time_dim_] > 0.0)) {
          throw std::invalid_argument("edge " + std::to_string(i) + " has non-positive traversal time");
        }
      }
    }
  }
}

const Vertex& TemporalGraph::vertex(VertexId v) const {
  if (v >= vertices_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return vertices_[v];
}

const Edge& TemporalGraph::edge(EdgeId e) const {
  if (e >= edges_.size()) throw std::out_of_range("unknown edge " + std::to_string(e));
  return edges_[e];
}

std::span<const EdgeId> TemporalGraph::out_edges(VertexId v) const {
  if (v >= out_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return out_[v];
}

std::span<const EdgeId> TemporalGraph::in_edges(VertexId v) const {
  if (v >= in_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return in_[v];
}

std::span<const CostVec> TemporalGraph::cost_bins(EdgeId e) const {
  if (cost_bins_.empty()) throw std::logic_error("graph carries no cost bins");
  if (e >= cost_bins_.size()) throw std::out_of_range("unknown edge " + std::to_string(e));
  return cost_bins_[e];
}

std::size_t TemporalGraph::bin_index(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative, got " + std::to_string(t));
  return static_cast<std::size_t>(std::floor(t / bin_width_));
}

const CostVec& TemporalGraph::edge_cost_at(EdgeId e, double t) const {
  auto bins = cost_bins(e);
  std::size_t k = bin_index(t);
  return bins[std::min(k, bins.size() - 1)];
}

bool TemporalGraph::is_fifo() const {
  for (const auto& bins : cost_bins_) {
    for (std::size_t k = 0; k + 1 < bins.size(); ++k) {
      if (bins[k][time_dim_] > bins[k + 1][time_dim_]) return false;
    }
  }
  return true;
}

TemporalGraph TemporalGraph::with_costs(std::vector<std::vector<CostVec>> cost_bins, std::size_t dims,
                                        std::size_t time_dim) const {
  return TemporalGraph(vertices_, edges_, std::move(cost_bins), dims, time_dim, bin_width_);
}

double TemporalGraph::planar_distance(VertexId a, VertexId b) const {
  return distance(vertex(a).position(), vertex(b).position());
}

}  // namespace potmo
