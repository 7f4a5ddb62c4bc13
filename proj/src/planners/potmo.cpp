#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "potmo/error.hpp"
#include "potmo/planners.hpp"

namespace potmo {

namespace {

struct QueueEntry {
  CostVec key;
  double time_s;
  VertexId node;
  std::uint64_t stamp;
};

// std::priority_queue pops the "largest"; order so the lexicographically
// smallest key comes out first, then the earliest time, then the lowest id.
struct PopsLater {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    switch (lex_compare(a.key, b.key)) {
      case Ordering::Less:
        return false;
      case Ordering::Greater:
        return true;
      case Ordering::Equal:
        break;
    }
    if (a.time_s != b.time_s) return a.time_s > b.time_s;
    return a.node > b.node;
  }
};

class Search {
 public:
  Search(const TemporalGraph& g, VertexId target, const Heuristic& h, PotmoOptions opts)
      : g_(g), target_(target), h_(h), opts_(opts), fronts_(g.vertex_count()), stamps_(g.vertex_count(), 0) {}

  PlanResult run(VertexId source, double start_s) {
    fronts_[source].merge(root_label(source, start_s, g_.dims()));
    schedule(source);

    std::size_t expanded = 0;
    bool reached = false;
    while (!queue_.empty()) {
      QueueEntry top = queue_.top();
      queue_.pop();
      if (top.stamp != stamps_[top.node]) continue;  // superseded key
      const VertexId curr = top.node;
      if (curr == target_) {
        reached = true;
        break;
      }
      ++expanded;
      expand(curr);
    }
    if (!reached) {
      throw NoPathError("no path from " + std::to_string(source) + " to " + std::to_string(target_));
    }
    PlanResult r;
    auto labels = fronts_[target_].labels();
    r.front.assign(labels.begin(), labels.end());
    r.chosen = choose_final(r.front);
    r.expanded = expanded;
    r.exact = g_.is_fifo() && !opts_.paper_literal_priority;
    return r;
  }

 private:
  void expand(VertexId curr) {
    LabelSet& here = fronts_[curr];
    // Only labels not yet propagated need extending; dst != curr below, so
    // `here` is not modified inside the loop.
    const std::size_t from = here.expanded();
    auto pending = here.labels().subspan(from);
    for (EdgeId e : g_.out_edges(curr)) {
      const VertexId dst = g_.edge(e).dst;
      if (dst == curr) continue;
      bool changed = false;
      for (const Label& label : pending) {
        if (label.visits(dst)) continue;  // simple paths only
        const CostVec& w = g_.edge_cost_at(e, label.arrival_s);
        changed |= fronts_[dst].merge(label_extend(g_, label, w, e));
      }
      if (!changed) continue;
      if (opts_.check_invariants && !fronts_[dst].is_consistent()) {
        throw std::logic_error("front at vertex " + std::to_string(dst) + " lost the Pareto property");
      }
      schedule(dst);
    }
    here.mark_expanded();
  }

  // (Re)queue `v` keyed by the lexicographic minimum of cost + heuristic over
  // its unpropagated labels; older entries for v become stale.
  void schedule(VertexId v) {
    const LabelSet& front = fronts_[v];
    const std::size_t from = v == target_ ? 0 : front.expanded();
    std::optional<CostVec> best;
    double best_time = 0.0;
    for (const Label& l : front.labels().subspan(from)) {
      CostVec f = l.cost;
      if (h_) f += h_(v, l.arrival_s);
      if (opts_.paper_literal_priority && !l.departures.empty()) {
        std::vector<double> bump(g_.dims(), 0.0);
        bump[g_.time_dim()] = l.arrival_s - l.departures.back();
        f += CostVec(std::move(bump));
      }
      if (!best || lex_less(f, *best)) {
        best = std::move(f);
        best_time = l.arrival_s;
      }
    }
    if (!best) return;
    queue_.push({std::move(*best), best_time, v, ++stamps_[v]});
  }

  const TemporalGraph& g_;
  VertexId target_;
  const Heuristic& h_;
  PotmoOptions opts_;
  std::vector<LabelSet> fronts_;
  std::vector<std::uint64_t> stamps_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, PopsLater> queue_;
};

}  // namespace

PlanResult potmo_astar(const TemporalGraph& g, VertexId source, double start_s, VertexId target,
                       const Heuristic& heuristic, PotmoOptions options) {
  auto started = std::chrono::steady_clock::now();
  g.vertex(source);
  g.vertex(target);
  if (!(start_s >= 0.0)) throw std::invalid_argument("start time must be nonnegative");
  PlanResult r;
  if (source == target) {
    r.chosen = root_label(source, start_s, g.dims());
    r.front = {r.chosen};
  } else {
    r = Search(g, target, heuristic, options).run(source, start_s);
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace potmo
