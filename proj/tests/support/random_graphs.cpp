#include "random_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace potmo::testing {

TemporalGraph random_graph(std::uint64_t seed, const RandomGraphSpec& spec) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
  const std::size_t n = spec.vertices;
  const std::size_t time_dim = spec.dims >= 4 ? kDimTime : spec.dims - 1;

  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < n; ++i) {
    vertices.push_back({static_cast<VertexId>(i), static_cast<double>(uniform_int(0, 1000)),
                        static_cast<double>(uniform_int(0, 1000)), 0.0});
  }
  std::vector<Edge> edges;
  std::vector<std::vector<CostVec>> costs;
  auto add_edge = [&](VertexId a, VertexId b) {
    const double planar = std::hypot(vertices[a].x - vertices[b].x, vertices[a].y - vertices[b].y);
    edges.push_back({static_cast<EdgeId>(edges.size()), a, b, planar + 1.0, 13.89, 0.0});
    std::vector<double> base(spec.dims);
    for (std::size_t d = 0; d < spec.dims; ++d) base[d] = uniform_int(d == time_dim ? 1 : 0, 9);
    std::vector<CostVec> bins;
    for (std::size_t k = 0; k < spec.bins; ++k) {
      std::vector<double> v = base;
      if (k > 0) {
        v[time_dim] = bins.back()[time_dim] + uniform_int(0, 3);  // non-decreasing: FIFO
        if (!spec.time_only_varies) {
          for (std::size_t d = 0; d < spec.dims; ++d) {
            if (d != time_dim) v[d] = uniform_int(0, 9);
          }
        }
      }
      bins.emplace_back(std::move(v));
    }
    costs.push_back(std::move(bins));
  };
  for (std::size_t i = 0; i + 1 < n; ++i) add_edge(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !coin(spec.edge_probability)) continue;
      add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b));
      if (coin(spec.parallel_probability)) add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
  }
  return TemporalGraph(std::move(vertices), std::move(edges), std::move(costs), spec.dims, time_dim, 10.0);
}

Heuristic exact_lower_bound(const TemporalGraph& g, VertexId target) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<double>> dist(g.dims(), std::vector<double>(n, std::numeric_limits<double>::infinity()));
  for (std::size_t d = 0; d < g.dims(); ++d) {
    auto& best = dist[d];
    using Entry = std::pair<double, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> q;
    best[target] = 0.0;
    q.emplace(0.0, target);
    while (!q.empty()) {
      auto [k, v] = q.top();
      q.pop();
      if (k > best[v]) continue;
      for (EdgeId e : g.in_edges(v)) {
        double w = std::numeric_limits<double>::infinity();
        for (const CostVec& c : g.cost_bins(e)) w = std::min(w, c[d]);
        const VertexId u = g.edge(e).src;
        if (k + w < best[u]) {
          best[u] = k + w;
          q.emplace(best[u], u);
        }
      }
    }
  }
  return [dist](VertexId v, double) {
    std::vector<double> h;
    for (const auto& d : dist) h.push_back(std::isfinite(d[v]) ? d[v] : 0.0);
    return CostVec(std::move(h));
  };
}

TemporalGraph complete_graph(std::size_t n) {
  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < n; ++i) vertices.push_back({static_cast<VertexId>(i), static_cast<double>(i), 0.0, 0.0});
  std::vector<Edge> edges;
  std::vector<std::vector<CostVec>> costs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      edges.push_back({static_cast<EdgeId>(edges.size()), static_cast<VertexId>(a), static_cast<VertexId>(b), 1.0,
                       1.0, 0.0});
      costs.push_back({CostVec{1.0}});
    }
  }
  return TemporalGraph(std::move(vertices), std::move(edges), std::move(costs), 1, 0, 60.0);
}

std::size_t count_simple_paths(const TemporalGraph& g, VertexId source, VertexId target) {
  std::vector<bool> on_path(g.vertex_count(), false);
  std::function<std::size_t(VertexId)> walk = [&](VertexId v) -> std::size_t {
    if (v == target) return 1;
    on_path[v] = true;
    std::size_t total = 0;
    for (EdgeId e : g.out_edges(v)) {
      const VertexId w = g.edge(e).dst;
      if (!on_path[w]) total += walk(w);
    }
    on_path[v] = false;
    return total;
  };
  return walk(source);
}

std::vector<double> savgol_normal_equations(int window, int order) {
  const int half = window / 2;
  const int m = order + 1;
  // A^T A (m x m) augmented with the identity; invert by Gauss-Jordan.
  std::vector<std::vector<double>> ata(m, std::vector<double>(2 * m, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int x = -half; x <= half; ++x) ata[i][j] += std::pow(x, i + j);
    }
    ata[i][m + i] = 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(ata[r][col]) > std::abs(ata[pivot][col])) pivot = r;
    }
    std::swap(ata[col], ata[pivot]);
    const double p = ata[col][col];
    if (p == 0.0) throw std::runtime_error("singular normal equations");
    for (double& x : ata[col]) x /= p;
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = ata[r][col];
      for (int c = 0; c < 2 * m; ++c) ata[r][c] -= f * ata[col][c];
    }
  }
  // Smoothed centre value = row 0 of (A^T A)^{-1} A^T applied to the window.
  std::vector<double> weights;
  for (int x = -half; x <= half; ++x) {
    double w = 0.0;
    for (int j = 0; j < m; ++j) w += ata[0][m + j] * std::pow(x, j);
    weights.push_back(w);
  }
  return weights;
}

}  // namespace potmo::testing
