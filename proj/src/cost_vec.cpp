#include "potmo/cost_vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "potmo/error.hpp"

namespace potmo {

namespace {

void check_values(const std::vector<double>& values) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("CostVec component must be finite and nonnegative, got " + std::to_string(v));
    }
  }
}

void check_arity(const CostVec& a, const CostVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("CostVec arity mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> failures)
    : std::runtime_error([&] {
        std::string msg = "validation failed:";
        for (const auto& f : failures) msg += "\n  - " + f;
        return msg;
      }()),
      failures_(std::move(failures)) {}

CostVec::CostVec(std::initializer_list<double> values) : values_(values) { check_values(values_); }

CostVec::CostVec(std::vector<double> values) : values_(std::move(values)) { check_values(values_); }

CostVec& CostVec::operator+=(const CostVec& rhs) {
  check_arity(*this, rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

Ordering lex_compare(const CostVec& a, const CostVec& b) {
  check_arity(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return Ordering::Less;
    if (a[i] > b[i]) return Ordering::Greater;
  }
  return Ordering::Equal;
}

bool dominates(const CostVec& a, const CostVec& b) {
  check_arity(a, b);
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

std::vector<CostVec> pareto_front(std::span<const CostVec> set) {
  if (set.empty()) throw std::invalid_argument("pareto_front of an empty set");
  std::vector<CostVec> front;
  for (std::size_t i = 0; i < set.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < set.size() && keep; ++j) {
      if (j == i) continue;
      if (dominates(set[j], set[i])) keep = false;
      // Duplicates: only the first occurrence survives.
      else if (j < i && set[j] == set[i]) keep = false;
    }
    if (keep) front.push_back(set[i]);
  }
  return front;
}

}  // namespace potmo
