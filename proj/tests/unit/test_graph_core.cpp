#include <gtest/gtest.h>

#include <random>

#include "potmo/cost_vec.hpp"
#include "potmo/label.hpp"
#include "potmo/temporal_graph.hpp"

using namespace potmo;

TEST(CostVec, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(CostVec({1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(CostVec({std::nan("")}), std::invalid_argument);
  EXPECT_THROW(CostVec({1.0}) + CostVec({1.0, 2.0}), std::invalid_argument);
}

TEST(LexCompare, Examples) {
  EXPECT_EQ(lex_compare({1, 2, 0, 0, 0}, {1, 3, 0, 0, 0}), Ordering::Less);
  EXPECT_EQ(lex_compare({2, 0, 0, 0, 0}, {1, 9, 9, 9, 9}), Ordering::Greater);
  EXPECT_EQ(lex_compare({1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}), Ordering::Equal);
  EXPECT_THROW(lex_compare({1}, {1, 2}), std::invalid_argument);
}

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates({1, 1}, {2, 2}));
  EXPECT_FALSE(dominates({1, 3}, {2, 1}));
  EXPECT_FALSE(dominates({1, 1}, {1, 1}));
  EXPECT_THROW(dominates({1}, {1, 2}), std::invalid_argument);
}

TEST(ParetoFront, Examples) {
  std::vector<CostVec> s1{{1, 2}, {2, 1}, {2, 2}};
  EXPECT_EQ(pareto_front(s1), (std::vector<CostVec>{{1, 2}, {2, 1}}));
  std::vector<CostVec> s2{{5, 5}};
  EXPECT_EQ(pareto_front(s2), s2);
  std::vector<CostVec> s3{{1, 1}, {1, 1}, {3, 0}};
  EXPECT_EQ(pareto_front(s3), (std::vector<CostVec>{{1, 1}, {3, 0}}));
  EXPECT_THROW(pareto_front(std::vector<CostVec>{}), std::invalid_argument);
}

namespace {

std::vector<CostVec> random_set(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_int_distribution<int> v(0, 4);
  std::vector<CostVec> s;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(d);
    for (auto& c : x) c = v(rng);
    s.emplace_back(std::move(x));
  }
  return s;
}

}  // namespace

TEST(ParetoFront, Properties) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_set(rng, 1 + trial % 12, 1 + trial % 4);
    const auto front = pareto_front(s);
    EXPECT_EQ(pareto_front(front), front);
    for (const auto& x : s) {
      bool covered = false;
      for (const auto& y : front) covered |= (y == x || dominates(y, x));
      EXPECT_TRUE(covered);
    }
    for (const auto& a : front) {
      for (const auto& b : front) EXPECT_FALSE(dominates(a, b));
    }
    const CostVec* lexmin = &s[0];
    for (const auto& x : s) {
      if (lex_less(x, *lexmin)) lexmin = &x;
    }
    EXPECT_NE(std::find(front.begin(), front.end(), *lexmin), front.end());
  }
}

TEST(LexCompare, TotalOrderOnRandomTriples) {
  std::mt19937_64 rng(5);
  auto flip = [](Ordering o) {
    return o == Ordering::Less ? Ordering::Greater : o == Ordering::Greater ? Ordering::Less : Ordering::Equal;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_set(rng, 3, 3);
    const auto &a = s[0], &b = s[1], &c = s[2];
    EXPECT_EQ(lex_compare(a, b), flip(lex_compare(b, a)));
    EXPECT_EQ(lex_compare(a, b) == Ordering::Equal, a == b);
    if (!lex_less(b, a) && !lex_less(c, b)) EXPECT_FALSE(lex_less(c, a));
  }
}

namespace {

TemporalGraph two_bin_edge() {
  return TemporalGraph({{0, 0, 0, 0}, {1, 100, 0, 0}}, {{0, 0, 1, 100, 10, 0}},
                       {{CostVec{1.0, 10.0}, CostVec{2.0, 50.0}}}, 2, 1, 60.0);
}

}  // namespace

TEST(TemporalGraph, EdgeCostAtBins) {
  const auto g = two_bin_edge();
  EXPECT_EQ(g.edge_cost_at(0, 59), (CostVec{1.0, 10.0}));
  EXPECT_EQ(g.edge_cost_at(0, 60), (CostVec{2.0, 50.0}));
  EXPECT_EQ(g.edge_cost_at(0, 1e6), (CostVec{2.0, 50.0}));
  EXPECT_THROW(g.edge_cost_at(0, -1), std::invalid_argument);
  EXPECT_THROW(g.edge_cost_at(7, 0), std::out_of_range);
}

TEST(TemporalGraph, ValidatesConstruction) {
  // Time slot must be strictly positive.
  EXPECT_THROW(TemporalGraph({{0, 0, 0, 0}, {1, 1, 0, 0}}, {{0, 0, 1, 1, 1, 0}}, {{CostVec{1.0, 0.0}}}, 2, 1),
               std::invalid_argument);
  // Unknown endpoint.
  EXPECT_THROW(TemporalGraph({{0, 0, 0, 0}}, {{0, 0, 3, 1, 1, 0}}, {{CostVec{1.0}}}, 1, 0), std::invalid_argument);
  // Arity mismatch.
  EXPECT_THROW(TemporalGraph({{0, 0, 0, 0}, {1, 1, 0, 0}}, {{0, 0, 1, 1, 1, 0}}, {{CostVec{1.0}}}, 2, 1),
               std::invalid_argument);
}

TEST(TemporalGraph, FifoDetection) {
  EXPECT_TRUE(two_bin_edge().is_fifo());
  TemporalGraph faster_later({{0, 0, 0, 0}, {1, 1, 0, 0}}, {{0, 0, 1, 1, 1, 0}}, {{CostVec{50.0}, CostVec{10.0}}}, 1,
                             0);
  EXPECT_FALSE(faster_later.is_fifo());
}

TEST(LabelExtend, Examples) {
  const auto g = TemporalGraph({{0, 0, 0, 0}, {1, 1, 0, 0}, {2, 2, 0, 0}},
                               {{0, 0, 1, 1, 1, 0}, {1, 1, 2, 1, 1, 0}, {2, 1, 0, 1, 1, 0}},
                               {{CostVec{1, 10}}, {CostVec{2, 5}}, {CostVec{1, 1}}}, 2, 1);
  const Label zero = root_label(0, 100.0, 2);
  const Label one = label_extend(g, zero, CostVec{1, 10}, 0);
  EXPECT_EQ(one.cost, (CostVec{1, 10}));
  EXPECT_EQ(one.edges, std::vector<EdgeId>{0});
  EXPECT_DOUBLE_EQ(one.arrival_s, 110.0);
  const Label two = label_extend(g, one, CostVec{2, 5}, 1);
  EXPECT_EQ(two.cost, (CostVec{3, 15}));
  EXPECT_EQ(two.edges, (std::vector<EdgeId>{0, 1}));
  EXPECT_DOUBLE_EQ(two.arrival_s, 115.0);
  EXPECT_THROW(label_extend(g, one, CostVec{1, 1}, 2), std::invalid_argument);  // back to the source
  EXPECT_THROW(label_extend(g, zero, CostVec{1, 1}, 1), std::invalid_argument);  // wrong tail
}

TEST(EvaluatePath, AccumulatesDepartureTimes) {
  // Second edge departs at 50 and falls into bin 0; at 70 it would be bin 1.
  TemporalGraph g({{0, 0, 0, 0}, {1, 1, 0, 0}, {2, 2, 0, 0}}, {{0, 0, 1, 1, 1, 0}, {1, 1, 2, 1, 1, 0}},
                  {{CostVec{50.0}, CostVec{70.0}}, {CostVec{5.0}, CostVec{100.0}}}, 1, 0, 60.0);
  std::vector<EdgeId> path{0, 1};
  Label at0 = evaluate_path(g, 0, path, 0.0);
  EXPECT_DOUBLE_EQ(at0.arrival_s, 55.0);
  EXPECT_EQ(at0.departures, (std::vector<double>{0.0, 50.0}));
  Label at10 = evaluate_path(g, 0, path, 10.0);  // second edge at 60: bin 1
  EXPECT_DOUBLE_EQ(at10.arrival_s, 160.0);
  Label at60 = evaluate_path(g, 0, path, 60.0);
  EXPECT_DOUBLE_EQ(at60.arrival_s, 230.0);
  EXPECT_DOUBLE_EQ(evaluate_path(g, 0, path, 60.0, true).arrival_s, 115.0);
}

TEST(LabelSet, MergeKeepsParetoFront) {
  LabelSet set;
  auto label = [](CostVec c) {
    Label l = root_label(0, 0, c.size());
    l.cost = std::move(c);
    return l;
  };
  EXPECT_TRUE(set.merge(label({2, 2})));
  EXPECT_FALSE(set.merge(label({2, 2})));  // duplicate
  EXPECT_FALSE(set.merge(label({3, 3})));  // dominated
  EXPECT_TRUE(set.merge(label({1, 3})));
  EXPECT_TRUE(set.merge(label({1, 1})));  // evicts both
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.labels()[0].cost, (CostVec{1, 1}));
  EXPECT_TRUE(set.is_consistent());
}
