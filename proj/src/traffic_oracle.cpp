#include "potmo/traffic_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace potmo {

ForecastTable::ForecastTable(std::size_t vertices, std::size_t bins, double bin_width_s)
    : vertices_(vertices),
      bins_(bins),
      bin_width_(bin_width_s),
      values_(vertices * bins, 0.0),
      tags_(vertices * bins, CellTag::Empty) {
  if (!(bin_width_s > 0.0)) throw std::invalid_argument("bin width must be positive");
}

std::size_t ForecastTable::index(VertexId v, std::size_t bin) const {
  if (v >= vertices_ || bin >= bins_) {
    throw std::out_of_range("forecast cell (" + std::to_string(v) + ", " + std::to_string(bin) + ") out of range");
  }
  return static_cast<std::size_t>(v) * bins_ + bin;
}

double ForecastTable::value(VertexId v, std::size_t bin) const { return values_[index(v, bin)]; }

CellTag ForecastTable::tag(VertexId v, std::size_t bin) const { return tags_[index(v, bin)]; }

void ForecastTable::set(VertexId v, std::size_t bin, double count, CellTag tag) {
  if (!(count >= 0.0)) throw std::invalid_argument("forecast counts must be nonnegative");
  const std::size_t i = index(v, bin);
  values_[i] = tag == CellTag::Empty ? 0.0 : count;
  tags_[i] = tag;
}

std::size_t ForecastTable::bin_at(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (bins_ == 0) return 0;
  return std::min(static_cast<std::size_t>(std::floor(t / bin_width_)), bins_ - 1);
}

double ForecastTable::count_at(VertexId v, double t) const {
  if (bins_ == 0) return 0.0;
  return value(v, bin_at(t));
}

ForecastTable ingest_observations(std::span<const Observation> records, std::size_t vertices, double bin_width_s,
                                  std::size_t bins) {
  if (!(bin_width_s > 0.0)) throw std::invalid_argument("bin width must be positive");
  std::size_t needed = 0;
  for (const Observation& r : records) {
    if (!(r.time_s >= 0.0)) throw std::invalid_argument("observation time must be nonnegative");
    if (!(r.count >= 0.0)) throw std::invalid_argument("observation count must be nonnegative");
    if (r.vertex >= vertices) throw std::invalid_argument("observation for unknown vertex " + std::to_string(r.vertex));
    needed = std::max(needed, static_cast<std::size_t>(std::floor(r.time_s / bin_width_s)) + 1);
  }
  if (bins == 0) bins = std::max<std::size_t>(needed, 1);

  std::vector<double> sum(vertices * bins, 0.0);
  std::vector<std::size_t> n(vertices * bins, 0);
  std::vector<bool> reporting(vertices, false);
  for (const Observation& r : records) {
    const std::size_t bin = static_cast<std::size_t>(std::floor(r.time_s / bin_width_s));
    reporting[r.vertex] = true;
    if (bin >= bins) continue;
    sum[r.vertex * bins + bin] += r.count;
    ++n[r.vertex * bins + bin];
  }
  ForecastTable table(vertices, bins, bin_width_s);
  for (VertexId v = 0; v < vertices; ++v) {
    if (!reporting[v]) continue;
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t i = v * bins + b;
      table.set(v, b, n[i] ? sum[i] / static_cast<double>(n[i]) : 0.0, CellTag::Observed);
    }
  }
  return table;
}

std::vector<double> savgol_coefficients(int window, int order) {
  if (window < 1 || window % 2 == 0) throw std::invalid_argument("window must be a positive odd integer");
  if (order < 0 || order >= window) throw std::invalid_argument("polynomial order must be in [0, window)");
  const int half = window / 2;
  Eigen::MatrixXd vandermonde(window, order + 1);
  for (int i = 0; i < window; ++i) {
    double x = i - half;
    double p = 1.0;
    for (int j = 0; j <= order; ++j, p *= x) vandermonde(i, j) = p;
  }
  // Row 0 of the pseudo-inverse evaluates the fitted polynomial at x = 0.
  Eigen::MatrixXd pinv = vandermonde.completeOrthogonalDecomposition().pseudoInverse();
  std::vector<double> coeffs(window);
  for (int i = 0; i < window; ++i) coeffs[i] = pinv(0, i);
  return coeffs;
}

namespace {

std::vector<std::size_t> weak_components(const TemporalGraph& g) {
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    auto a = find(e.src), b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> comp(g.vertex_count());
  for (std::size_t v = 0; v < comp.size(); ++v) comp[v] = find(v);
  return comp;
}

struct Catchment {
  std::vector<VertexId> nearest;
  std::vector<std::vector<VertexId>> sequences;  // one per component
};

// Multi-source Dijkstra over undirected road lengths from every observed
// vertex; ties go to the lower source id.
Catchment build_catchment(const TemporalGraph& g, const std::vector<bool>& observed,
                          const std::vector<std::size_t>& comp) {
  const std::size_t n = g.vertex_count();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<VertexId> nearest(n, std::numeric_limits<VertexId>::max());
  using Entry = std::tuple<double, VertexId, VertexId>;  // dist, source, vertex
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (VertexId v = 0; v < n; ++v) {
    if (observed[v]) {
      dist[v] = 0.0;
      nearest[v] = v;
      queue.emplace(0.0, v, v);
    }
  }
  std::vector<bool> done(n, false);
  auto relax = [&](VertexId to, double d, VertexId src) {
    if (d < dist[to] || (d == dist[to] && src < nearest[to])) {
      dist[to] = d;
      nearest[to] = src;
      queue.emplace(d, src, to);
    }
  };
  while (!queue.empty()) {
    auto [d, src, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = true;
    for (EdgeId e : g.out_edges(v)) relax(g.edge(e).dst, d + g.edge(e).length_m, src);
    for (EdgeId e : g.in_edges(v)) relax(g.edge(e).src, d + g.edge(e).length_m, src);
  }

  std::vector<std::size_t> roots;
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] == v) roots.push_back(v);
  }
  Catchment c;
  c.sequences.resize(roots.size());
  for (VertexId v = 0; v < n; ++v) {
    auto k = std::lower_bound(roots.begin(), roots.end(), comp[v]) - roots.begin();
    c.sequences[k].push_back(v);
  }
  for (auto& seq : c.sequences) {
    std::sort(seq.begin(), seq.end(), [&](VertexId a, VertexId b) {
      return std::tie(nearest[a], dist[a], a) < std::tie(nearest[b], dist[b], b);
    });
  }
  c.nearest = std::move(nearest);
  return c;
}

}  // namespace

ForecastTable smooth_spatial(const ForecastTable& table, const TemporalGraph& g, int window, int order) {
  if (table.vertex_count() != g.vertex_count()) throw std::invalid_argument("forecast and graph disagree on vertices");
  const auto coeffs = savgol_coefficients(window, order);
  const int half = window / 2;
  const auto comp = weak_components(g);
  ForecastTable out = table;

  std::vector<bool> previous_mask;
  Catchment catchment;
  for (std::size_t b = 0; b < table.bin_count(); ++b) {
    std::vector<bool> observed(g.vertex_count());
    bool any_empty = false;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      observed[v] = !table.empty_cell(v, b);
      any_empty |= !observed[v];
    }
    if (!any_empty) continue;
    if (observed != previous_mask) {
      catchment = build_catchment(g, observed, comp);
      previous_mask = observed;
      for (const auto& seq : catchment.sequences) {
        if (catchment.nearest[seq.front()] == std::numeric_limits<VertexId>::max()) {
          std::string members;
          for (std::size_t i = 0; i < seq.size() && i < 8; ++i) members += (i ? "," : "") + std::to_string(seq[i]);
          if (seq.size() > 8) members += ",...";
          throw std::invalid_argument("component containing vertex " + std::to_string(seq.front()) + " {" + members +
                                      "} has no observations in bin " + std::to_string(b));
        }
      }
    }
    for (const auto& seq : catchment.sequences) {
      std::vector<double> provisional(seq.size());
      for (std::size_t i = 0; i < seq.size(); ++i) provisional[i] = table.value(catchment.nearest[seq[i]], b);
      const auto last = static_cast<std::ptrdiff_t>(seq.size()) - 1;
      for (std::ptrdiff_t p = 0; p <= last; ++p) {
        if (observed[seq[p]]) continue;
        double acc = 0.0;
        for (int k = 0; k < window; ++k) {
          acc += coeffs[k] * provisional[std::clamp<std::ptrdiff_t>(p + k - half, 0, last)];
        }
        out.set(seq[p], b, std::max(acc, 0.0), CellTag::Smoothed);
      }
    }
  }
  return out;
}

ForecastTable commit_plan_load(ForecastTable table, const Label& plan) {
  if (table.bin_count() == 0) return table;
  if (plan.departures.size() != plan.edges.size()) throw std::invalid_argument("plan lacks departure times");
  for (std::size_t i = 0; i < plan.edges.size(); ++i) {
    const VertexId covering = plan.vertices[i + 1];
    const std::size_t bin = table.bin_at(plan.departures[i]);
    table.set(covering, bin, table.value(covering, bin) + 1.0, CellTag::Committed);
  }
  return table;
}

}  // namespace potmo
