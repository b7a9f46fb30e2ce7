// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "mcstream/matroid.hpp"
#include "mcstream/metric.hpp"

namespace mcstream {

// Centers must satisfy sum of weights <= budget.
class Knapsack {
 public:
  Knapsack(std::vector<double> weights, double budget)
      : weights_(std::move(weights)), budget_(budget) {
    if (budget_ < 0.0) throw InputError("knapsack budget must be >= 0");
    for (double w : weights_) {
      if (!(w >= 0.0)) throw InputError("knapsack weights must be >= 0");
    }
  }

  double weight(ElementId e) const {
    if (index_of(e) >= weights_.size()) throw UnknownElementError(e);
    return weights_[index_of(e)];
  }
  double budget() const { return budget_; }
  const std::vector<double>& weights() const { return weights_; }

  bool feasible(std::span<const ElementId> set) const {
    double total = 0.0;
    for (ElementId e : set) total += weight(e);
    return total <= budget_;
  }

  // Size of a largest feasible set: take the lightest points greedily.
  std::size_t largest_feasible_size() const {
    std::vector<double> sorted = weights_;
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    std::size_t count = 0;
    for (double w : sorted) {
      if (total + w > budget_) break;
      total += w;
      ++count;
    }
    return count;
  }

 private:
  std::vector<double> weights_;
  double budget_;
};

// The two ways a pivot keeps its nearby points. Matroid mode grows an
// independent set; knapsack mode keeps one lightest representative. Both
// expose the same surface so the streaming state machines are written once.
class MatroidRule {
 public:
  explicit MatroidRule(const Matroid& matroid) : matroid_(&matroid) {}

  // Most pivots a guess may hold before it aborts.
  std::size_t pivot_limit() const { return matroid_->rank_upper(); }
  std::size_t per_pivot_limit() const { return matroid_->rank_upper(); }

  ElementSet seed(ElementId e) const {
    return is_loop(*matroid_, e) ? ElementSet{} : ElementSet{e};
  }

  // Adds e when the set stays independent.
  bool absorb(ElementSet& set, ElementId e) const {
    if (contains(set, e)) return false;
    set.push_back(e);
    if (matroid_->is_independent(set)) return true;
    set.pop_back();
    return false;
  }

  bool feasible(std::span<const ElementId> set) const {
    return matroid_->is_independent(set);
  }

  const Matroid& matroid() const { return *matroid_; }

 private:
  const Matroid* matroid_;
};

class KnapsackRule {
 public:
  explicit KnapsackRule(const Knapsack& knapsack)
      : knapsack_(&knapsack), limit_(knapsack.largest_feasible_size()) {}

  std::size_t pivot_limit() const { return limit_; }
  std::size_t per_pivot_limit() const { return 1; }

  // A point heavier than the budget can never be a center; it plays the role
  // of a loop.
  ElementSet seed(ElementId e) const {
    return admissible(e) ? ElementSet{e} : ElementSet{};
  }

  // Replaces the representative when e is strictly lighter.
  bool absorb(ElementSet& set, ElementId e) const {
    if (!admissible(e) || contains(set, e)) return false;
    if (set.empty()) {
      set.push_back(e);
      return true;
    }
    if (knapsack_->weight(set.front()) > knapsack_->weight(e)) {
      set.front() = e;
      return true;
    }
    return false;
  }

  bool feasible(std::span<const ElementId> set) const {
    return knapsack_->feasible(set);
  }

  const Knapsack& knapsack() const { return *knapsack_; }

 private:
  bool admissible(ElementId e) const {
    return knapsack_->weight(e) <= knapsack_->budget();
  }

  const Knapsack* knapsack_;
  std::size_t limit_;
};

}  // namespace mcstream
