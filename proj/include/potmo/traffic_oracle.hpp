#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "potmo/label.hpp"
#include "potmo/temporal_graph.hpp"

namespace potmo {

enum class CellTag : std::uint8_t { Empty, Observed, Predicted, Smoothed, Committed };

/// Predicted communicating-vehicle counts per vertex and time bin.
class ForecastTable {
 public:
  ForecastTable() = default;
  ForecastTable(std::size_t vertices, std::size_t bins, double bin_width_s);

  std::size_t vertex_count() const noexcept { return vertices_; }
  std::size_t bin_count() const noexcept { return bins_; }
  double bin_width() const noexcept { return bin_width_; }

  double value(VertexId v, std::size_t bin) const;
  CellTag tag(VertexId v, std::size_t bin) const;
  bool empty_cell(VertexId v, std::size_t bin) const { return tag(v, bin) == CellTag::Empty; }
  void set(VertexId v, std::size_t bin, double count, CellTag tag);

  /// Bin for time t, clamped to the last bin.
  std::size_t bin_at(double t) const;
  /// Count at vertex v for time t (clamped); empty cells read as zero.
  double count_at(VertexId v, double t) const;

  friend bool operator==(const ForecastTable&, const ForecastTable&) = default;

 private:
  std::size_t index(VertexId v, std::size_t bin) const;

  std::size_t vertices_ = 0;
  std::size_t bins_ = 0;
  double bin_width_ = 60.0;
  std::vector<double> values_;
  std::vector<CellTag> tags_;
};

struct Observation {
  VertexId vertex = 0;
  double time_s = 0.0;
  double count = 0.0;
};

/// Averages observations per (vertex, bin). Vertices that report at least
/// once are roadside units: their bins without a record read as an observed
/// zero. All other cells stay empty. `bins == 0` sizes the table to the last
/// observed bin.
ForecastTable ingest_observations(std::span<const Observation> records, std::size_t vertices, double bin_width_s,
                                  std::size_t bins = 0);

/// Least-squares polynomial smoothing weights for the window's centre sample.
std::vector<double> savgol_coefficients(int window, int order);

/// Fills empty cells bin by bin. Within each weakly connected component every
/// vertex is first given the value of its nearest (by road length) observed
/// vertex; vertices are then sequenced by (nearest observed vertex, distance
/// to it, id) and each empty cell becomes the Savitzky–Golay convolution of
/// that sequence at its position, clamped at zero. Observed cells are never
/// overwritten.
ForecastTable smooth_spatial(const ForecastTable& table, const TemporalGraph& g, int window = 5, int order = 2);

/// Adds one vehicle to the head vertex of every edge on the plan, in the bin
/// of the edge's departure time.
ForecastTable commit_plan_load(ForecastTable table, const Label& plan);

}  // namespace potmo
