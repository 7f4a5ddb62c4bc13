#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace potmo {

// Default dimension layout, in priority order.
inline constexpr std::size_t kDimCars = 0;
inline constexpr std::size_t kDimEnergy = 1;
inline constexpr std::size_t kDimDesirability = 2;
inline constexpr std::size_t kDimTime = 3;
inline constexpr std::size_t kDimLength = 4;
inline constexpr std::size_t kDefaultDims = 5;

/// Fixed-arity vector of nonnegative costs. Slot 0 has the highest priority
/// in lexicographic comparisons.
class CostVec {
 public:
  CostVec() = default;
  explicit CostVec(std::size_t dims) : values_(dims, 0.0) {}
  CostVec(std::initializer_list<double> values);
  explicit CostVec(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Component-wise sum; both operands must share arity.
  CostVec& operator+=(const CostVec& rhs);
  friend CostVec operator+(CostVec lhs, const CostVec& rhs) { return lhs += rhs; }

  friend bool operator==(const CostVec&, const CostVec&) = default;

 private:
  std::vector<double> values_;
};

enum class Ordering { Less, Equal, Greater };

Ordering lex_compare(const CostVec& a, const CostVec& b);
inline bool lex_less(const CostVec& a, const CostVec& b) { return lex_compare(a, b) == Ordering::Less; }

/// True iff a <= b component-wise and a != b.
bool dominates(const CostVec& a, const CostVec& b);

/// Non-dominated subset of `set`, in first-occurrence order. Exact duplicates
/// collapse to their first occurrence.
std::vector<CostVec> pareto_front(std::span<const CostVec> set);

}  // namespace potmo
