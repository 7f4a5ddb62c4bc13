#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "potmo/planners.hpp"
#include "potmo/temporal_graph.hpp"

namespace potmo::testing {

struct RandomGraphSpec {
  std::size_t vertices = 8;
  std::size_t dims = 3;
  std::size_t bins = 1;           // >1 gives time-dependent, FIFO costs
  double edge_probability = 0.35;
  double parallel_probability = 0.1;
  bool time_only_varies = true;   // other dims identical across bins
};

/// Random directed multigraph with small integer costs. A Hamiltonian chain
/// 0 -> ... -> n-1 guarantees a path from 0 to n-1. With dims < 4 the time
/// slot is the last one.
TemporalGraph random_graph(std::uint64_t seed, const RandomGraphSpec& spec);

/// Per-dimension exact remaining cost on the cheapest bin of every edge,
/// from reverse Dijkstra. A lower bound on every path's remaining cost.
Heuristic exact_lower_bound(const TemporalGraph& g, VertexId target);

/// Complete directed graph K_n with unit costs.
TemporalGraph complete_graph(std::size_t n);

/// Plain recursive enumeration of simple paths, for cross-checking.
std::size_t count_simple_paths(const TemporalGraph& g, VertexId source, VertexId target);

/// Savitzky–Golay centre weights by Gaussian elimination on the normal
/// equations of the least-squares polynomial fit.
std::vector<double> savgol_normal_equations(int window, int order);


}  // namespace potmo::testing
