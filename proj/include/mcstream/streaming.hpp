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
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "mcstream/constraint.hpp"
#include "mcstream/intersection.hpp"
#include "mcstream/matroid.hpp"
#include "mcstream/metric.hpp"
#include "mcstream/offline.hpp"

namespace mcstream {

// A stored pivot with the points kept on its behalf. `support` is only used
// by the outlier algorithms, where it holds the pivot and up to z points of
// its 2 tau ball.
struct PivotRecord {
  ElementId pivot{};
  ElementSet independent_set;
  ElementSet support;

  friend bool operator==(const PivotRecord&, const PivotRecord&) = default;
};

// Summary handed from a replaced instance to its child: old pivots with their
// sets, the old free points (outlier modes), and points the parent received
// but did not absorb because it aborted on them.
struct ChildSeed {
  std::vector<PivotRecord> pivots;
  ElementSet free;
  ElementSet pending;
};

// Observer of where points end up: called with (point, pivot) whenever a live
// point or an old pivot is attached to a pivot (itself when it becomes one).
using AssignmentSink = std::function<void(ElementId, ElementId)>;

namespace internal {

inline ElementSet pivot_ids(const std::vector<PivotRecord>& pivots) {
  ElementSet out;
  for (const auto& p : pivots) out.push_back(p.pivot);
  return out;
}

inline ElementSet union_of_sets(const std::vector<PivotRecord>& pivots) {
  ElementSet out;
  for (const auto& p : pivots) out = sorted_union(std::move(out), p.independent_set);
  return out;
}

inline ElementSet support_of(const PivotRecord& p) {
  return p.support.empty() ? ElementSet{p.pivot} : p.support;
}

template <class Rule>
FeasibleFn feasible_fn(const Rule& rule) {
  return [&rule](std::span<const ElementId> s) { return rule.feasible(s); };
}

}  // namespace internal

// One guess tau of the one-pass matroid center summary, or of its knapsack
// variant when Rule is KnapsackRule.
//
// Each arriving point joins the earliest pivot within 2 tau (growing that
// pivot's set under Rule), otherwise becomes a new pivot. A pivot beyond the
// rule's limit aborts the guess. After every step the instance checks its own
// space bound: |C| + sum |I_c| <= r^2 + r for matroids and <= 2r for knapsack.
template <class Rule>
class OnePassInstance {
 public:
  OnePassInstance(const Metric& metric, Rule rule, double tau)
      : metric_(&metric), rule_(std::move(rule)), tau_(tau) {
    if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  }

  double tau() const { return tau_; }
  bool aborted() const { return aborted_; }
  const std::vector<PivotRecord>& pivots() const { return pivots_; }
  std::optional<ElementId> abort_witness() const { return abort_witness_; }
  const Rule& rule() const { return rule_; }

  // Folds the old summary in before any live point: an old pivot within
  // 2 tau of an existing pivot hands its set over one element at a time,
  // otherwise it is adopted together with its set.
  void set_assignment_sink(AssignmentSink sink) { sink_ = std::move(sink); }

  // Pending points of the seed are then processed as live points.
  void seed(const ChildSeed& seed) {
    for (const auto& old : seed.pivots) {
      if (auto host = nearest_pivot(old.pivot, 2.0 * tau_)) {
        for (ElementId e : old.independent_set) {
          rule_.absorb(pivots_[*host].independent_set, e);
        }
        notify(old.pivot, pivots_[*host].pivot);
      } else {
        pivots_.push_back({old.pivot, old.independent_set, {}});
        notify(old.pivot, old.pivot);
      }
    }
    after_step();
    for (ElementId e : seed.pending) {
      if (aborted_) break;
      process(e);
    }
  }

  void process(ElementId e) {
    if (aborted_) throw PreconditionError("process() after abort");
    if (auto host = nearest_pivot(e, 2.0 * tau_)) {
      rule_.absorb(pivots_[*host].independent_set, e);
      notify(e, pivots_[*host].pivot);
    } else if (pivots_.size() == rule_.pivot_limit()) {
      aborted_ = true;
      abort_witness_ = e;
    } else {
      pivots_.push_back({e, rule_.seed(e), {}});
      notify(e, e);
    }
    after_step();
  }

  ChildSeed child_seed() const {
    ChildSeed out{pivots_, {}, {}};
    if (abort_witness_) out.pending.push_back(*abort_witness_);
    return out;
  }

  // The union of the pivots' sets, where every finisher looks for centers.
  ElementSet summary() const { return internal::union_of_sets(pivots_); }

  std::size_t stored_points() const {
    std::size_t total = pivots_.size();
    for (const auto& p : pivots_) total += p.independent_set.size();
    return total;
  }
  std::size_t peak_stored() const { return peak_stored_; }
  std::size_t space_bound() const {
    const std::size_t r = rule_.pivot_limit();
    return r * rule_.per_pivot_limit() + r;
  }

  // Exhaustive search of the summary for a feasible set within slack * tau of
  // every pivot.
  std::optional<ElementSet> finish_brute(double slack,
                                         std::size_t cap = kDefaultBruteCap) {
    auto found = brute_independent_cover(
        *metric_, summary(), internal::feasible_fn(rule_),
        {{internal::pivot_ids(pivots_), slack * tau_, 0}}, cap);
    if (!found) aborted_ = true;
    return found;
  }

  // Offline 3-approximation on the summary with alpha = slack * tau.
  std::optional<ElementSet> finish_efficient(double slack) {
    const double alpha = slack * tau_;
    PromiseResult result;
    if constexpr (std::is_same_v<Rule, KnapsackRule>) {
      result = knapsack_3approx(*metric_, rule_.knapsack(), alpha,
                                internal::pivot_ids(pivots_), summary());
    } else {
      result = efficient_matroid_center(*metric_, rule_.matroid(), alpha,
                                        internal::pivot_ids(pivots_),
                                        summary());
    }
    if (!result.centers) aborted_ = true;
    return result.centers;
  }

 private:
  std::optional<std::size_t> nearest_pivot(ElementId e, double radius) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      if (metric_->distance(e, pivots_[i].pivot) <= radius) return i;
    }
    return std::nullopt;
  }

  void after_step() {
    const std::size_t stored = stored_points();
    peak_stored_ = std::max(peak_stored_, stored);
    if (stored > space_bound() || pivots_.size() > rule_.pivot_limit()) {
      throw InvariantError("one-pass summary exceeds its space bound");
    }
  }

  void notify(ElementId e, ElementId host) const {
    if (sink_) sink_(e, host);
  }

  const Metric* metric_;
  Rule rule_;
  double tau_;
  std::vector<PivotRecord> pivots_;
  bool aborted_ = false;
  std::optional<ElementId> abort_witness_;
  std::size_t peak_stored_ = 0;
  AssignmentSink sink_;
};

using MatroidCenterInstance = OnePassInstance<MatroidRule>;
using KnapsackCenterInstance = OnePassInstance<KnapsackRule>;

// One guess of matroid (or knapsack) center with z outliers.
//
// A point within 4 tau of a pivot is offered to the earliest such pivot's set;
// any other point becomes free. When the free set reaches (r - l + 1) z + 1
// points, the first free point with at least z + 1 free points in its 2 tau
// ball is promoted: every free point within 4 tau of it moves into its set
// and its support collects z of them from the 2 tau ball.
template <class Rule>
class OutlierInstance {
 public:
  OutlierInstance(const Metric& metric, Rule rule, double tau, std::size_t z)
      : metric_(&metric), rule_(std::move(rule)), tau_(tau), z_(z) {
    if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  }

  double tau() const { return tau_; }
  std::size_t z() const { return z_; }
  bool aborted() const { return aborted_; }
  const std::vector<PivotRecord>& pivots() const { return pivots_; }
  const ElementSet& free_points() const { return free_; }
  const Rule& rule() const { return rule_; }

  // Old pivots fold into a pivot within 4 tau or are adopted; the old free
  // points are then replayed as live points.
  void seed(const ChildSeed& seed) {
    for (const auto& old : seed.pivots) {
      if (auto host = nearest_pivot(old.pivot, 4.0 * tau_)) {
        for (ElementId e : old.independent_set) {
          rule_.absorb(pivots_[*host].independent_set, e);
        }
      } else {
        pivots_.push_back({old.pivot, old.independent_set, internal::support_of(old)});
      }
    }
    after_step();
    replay(seed);
  }

  void process(ElementId e) {
    if (aborted_) throw PreconditionError("process() after abort");
    if (auto host = nearest_pivot(e, 4.0 * tau_)) {
      rule_.absorb(pivots_[*host].independent_set, e);
    } else {
      free_.push_back(e);
    }
    if (free_.size() >= free_threshold()) promote();
    after_step();
  }

  // Old free points this instance never got to replay stay free for the next
  // generation.
  ChildSeed child_seed() const {
    ElementSet free = free_;
    free.insert(free.end(), unreplayed_.begin(), unreplayed_.end());
    return {pivots_, std::move(free), {}};
  }

  ElementSet summary() const {
    return sorted_union(internal::union_of_sets(pivots_), free_);
  }

  std::size_t stored_points() const {
    std::size_t total = free_.size();
    for (const auto& p : pivots_) {
      total += p.independent_set.size() + p.support.size();
    }
    return total;
  }
  std::size_t peak_stored() const { return peak_stored_; }
  std::size_t free_bound() const {
    return (rule_.pivot_limit() + 1) * z_ + 1;
  }
  std::size_t space_bound() const {
    const std::size_t r = rule_.pivot_limit();
    return r * rule_.per_pivot_limit() + free_bound() + (z_ + 1) * r;
  }

  // Feasible subset of F and the pivots' sets within pivot_slack * tau of
  // every pivot and free_slack * tau of all but z free points.
  std::optional<ElementSet> finish_brute(double pivot_slack = 11.0,
                                         double free_slack = 9.0,
                                         std::size_t cap = kDefaultBruteCap) {
    auto found = brute_independent_cover(
        *metric_, summary(), internal::feasible_fn(rule_),
        {{internal::pivot_ids(pivots_), pivot_slack * tau_, 0},
         {free_, free_slack * tau_, z_}},
        cap);
    if (!found) aborted_ = true;
    return found;
  }

 private:
  std::size_t free_threshold() const {
    return (rule_.pivot_limit() - pivots_.size() + 1) * z_ + 1;
  }

  void replay(const ChildSeed& seed) {
    ElementSet points = seed.free;
    points.insert(points.end(), seed.pending.begin(), seed.pending.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (aborted_) {
        unreplayed_.assign(points.begin() + i, points.end());
        return;
      }
      process(points[i]);
    }
  }

  std::optional<std::size_t> nearest_pivot(ElementId e, double radius) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      if (metric_->distance(e, pivots_[i].pivot) <= radius) return i;
    }
    return std::nullopt;
  }

  void promote() {
    std::optional<ElementId> chosen;
    for (ElementId c : free_) {
      std::size_t near = 0;
      for (ElementId x : free_) {
        if (metric_->distance(c, x) <= 2.0 * tau_) ++near;
      }
      if (near >= z_ + 1) {
        chosen = c;
        break;
      }
    }
    if (!chosen || pivots_.size() == rule_.pivot_limit()) {
      aborted_ = true;
      return;
    }
    const ElementId c = *chosen;
    PivotRecord record{c, rule_.seed(c), {c}};
    ElementSet remaining;
    for (ElementId x : free_) {
      const double d = metric_->distance(c, x);
      if (d > 4.0 * tau_) {
        remaining.push_back(x);
        continue;
      }
      if (x == c) continue;
      rule_.absorb(record.independent_set, x);
      if (record.support.size() <= z_ && d <= 2.0 * tau_) {
        record.support.push_back(x);
      }
    }
    free_ = std::move(remaining);
    pivots_.push_back(std::move(record));
  }

  void after_step() {
    const std::size_t stored = stored_points();
    peak_stored_ = std::max(peak_stored_, stored);
    if (free_.size() > free_bound() || stored > space_bound() ||
        pivots_.size() > rule_.pivot_limit()) {
      throw InvariantError("outlier summary exceeds its space bound");
    }
  }

  const Metric* metric_;
  Rule rule_;
  double tau_;
  std::size_t z_;
  std::vector<PivotRecord> pivots_;
  ElementSet free_;
  ElementSet unreplayed_;
  bool aborted_ = false;
  std::size_t peak_stored_ = 0;
};

using MatroidOutlierInstance = OutlierInstance<MatroidRule>;
using KnapsackOutlierInstance = OutlierInstance<KnapsackRule>;

// One guess of k-center with z outliers. Points within 4 tau of a pivot are
// forgotten; the rest collect in F and are promoted as in OutlierInstance.
class KCenterOutlierInstance {
 public:
  KCenterOutlierInstance(const Metric& metric, std::size_t k, double tau,
                         std::size_t z)
      : metric_(&metric), k_(k), tau_(tau), z_(z) {
    if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  }

  double tau() const { return tau_; }
  std::size_t z() const { return z_; }
  bool aborted() const { return aborted_; }
  const std::vector<PivotRecord>& pivots() const { return pivots_; }
  const ElementSet& free_points() const { return free_; }

  void seed(const ChildSeed& seed) {
    for (const auto& old : seed.pivots) {
      if (!within(old.pivot, 4.0 * tau_)) {
        pivots_.push_back({old.pivot, {}, internal::support_of(old)});
      }
    }
    after_step();
    ElementSet points = seed.free;
    points.insert(points.end(), seed.pending.begin(), seed.pending.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (aborted_) {
        unreplayed_.assign(points.begin() + i, points.end());
        break;
      }
      process(points[i]);
    }
  }

  void process(ElementId e) {
    if (aborted_) throw PreconditionError("process() after abort");
    if (!within(e, 4.0 * tau_)) free_.push_back(e);
    if (free_.size() >= (k_ - pivots_.size() + 1) * z_ + 1) promote();
    after_step();
  }

  ChildSeed child_seed() const {
    ElementSet free = free_;
    free.insert(free.end(), unreplayed_.begin(), unreplayed_.end());
    return {pivots_, std::move(free), {}};
  }

  std::size_t stored_points() const {
    std::size_t total = free_.size();
    for (const auto& p : pivots_) total += p.support.size();
    return total;
  }
  std::size_t peak_stored() const { return peak_stored_; }
  std::size_t free_bound() const { return (k_ + 1) * z_ + 1; }
  std::size_t space_bound() const { return free_bound() + (z_ + 1) * k_; }

  // At most k - l free points covering all but z of F within 2 tau, plus the
  // pivots.
  std::optional<ElementSet> finish_brute(std::size_t cap = kDefaultBruteCap) {
    const std::size_t budget = k_ - pivots_.size();
    auto found = brute_independent_cover(
        *metric_, free_,
        [budget](std::span<const ElementId> s) { return s.size() <= budget; },
        {{free_, 2.0 * tau_, z_}}, cap);
    if (!found) {
      aborted_ = true;
      return found;
    }
    ElementSet centers = internal::pivot_ids(pivots_);
    centers.insert(centers.end(), found->begin(), found->end());
    return centers;
  }

 private:
  bool within(ElementId e, double radius) const {
    for (const auto& p : pivots_) {
      if (metric_->distance(e, p.pivot) <= radius) return true;
    }
    return false;
  }

  void promote() {
    std::optional<ElementId> chosen;
    for (ElementId c : free_) {
      std::size_t near = 0;
      for (ElementId x : free_) {
        if (metric_->distance(c, x) <= 2.0 * tau_) ++near;
      }
      if (near >= z_ + 1) {
        chosen = c;
        break;
      }
    }
    if (!chosen || pivots_.size() == k_) {
      aborted_ = true;
      return;
    }
    const ElementId c = *chosen;
    PivotRecord record{c, {}, {c}};
    ElementSet remaining;
    for (ElementId x : free_) {
      const double d = metric_->distance(c, x);
      if (x != c && d <= 2.0 * tau_ && record.support.size() <= z_) {
        record.support.push_back(x);
      }
      if (d > 4.0 * tau_) remaining.push_back(x);
    }
    free_ = std::move(remaining);
    pivots_.push_back(std::move(record));
  }

  void after_step() {
    peak_stored_ = std::max(peak_stored_, stored_points());
    if (free_.size() > free_bound() || pivots_.size() > k_) {
      throw InvariantError("k-center outlier summary exceeds its space bound");
    }
  }

  const Metric* metric_;
  std::size_t k_;
  double tau_;
  std::size_t z_;
  std::vector<PivotRecord> pivots_;
  ElementSet free_;
  ElementSet unreplayed_;
  bool aborted_ = false;
  std::size_t peak_stored_ = 0;
};

// One guess of the two-pass algorithm. The first pass keeps pivots more than
// 2 tau apart; the second grows, for each point, the set of the unique pivot
// within tau. The answer is a maximum common independent set of the matroid
// and the one-per-pivot partition matroid over those sets, and the guess
// fails when it cannot take one center per pivot.
class TwoPassInstance {
 public:
  TwoPassInstance(const Metric& metric, const Matroid& matroid, double tau)
      : metric_(&metric), rule_(matroid), tau_(tau) {
    if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  }

  // Starts the second pass from pivots found elsewhere; they must be more
  // than 2 tau apart.
  static TwoPassInstance from_pivots(const Metric& metric,
                                     const Matroid& matroid, double tau,
                                     const ElementSet& pivots) {
    TwoPassInstance inst(metric, matroid, tau);
    for (ElementId c : pivots) inst.pivots_.push_back({c, inst.rule_.seed(c), {}});
    return inst;
  }

  double tau() const { return tau_; }
  bool failed() const { return failed_; }
  const std::vector<PivotRecord>& pivots() const { return pivots_; }

  // The certificate carried by a failure: the pivot set (plus the point that
  // overflowed it, when the first pass overflowed).
  const ElementSet& certificate() const { return certificate_; }

  void first_pass(ElementId e) {
    if (failed_) return;
    for (const auto& p : pivots_) {
      if (metric_->distance(e, p.pivot) <= 2.0 * tau_) return;
    }
    if (pivots_.size() == rule_.pivot_limit()) {
      fail();
      certificate_.push_back(e);
      return;
    }
    pivots_.push_back({e, rule_.seed(e), {}});
    peak_stored_ = std::max(peak_stored_, stored_points());
  }

  void second_pass(ElementId e) {
    if (failed_) return;
    for (auto& p : pivots_) {
      if (metric_->distance(e, p.pivot) <= tau_) {
        rule_.absorb(p.independent_set, e);
        break;
      }
    }
    peak_stored_ = std::max(peak_stored_, stored_points());
    if (stored_points() > space_bound()) {
      throw InvariantError("two-pass summary exceeds its space bound");
    }
  }

  std::optional<ElementSet> finish() {
    if (failed_) return std::nullopt;
    if (pivots_.empty()) return ElementSet{};
    std::vector<ElementSet> blocks;
    ElementSet ground;
    for (const auto& p : pivots_) {
      blocks.push_back(p.independent_set);
      ground.insert(ground.end(), p.independent_set.begin(),
                    p.independent_set.end());
    }
    if (std::any_of(blocks.begin(), blocks.end(),
                    [](const ElementSet& b) { return b.empty(); })) {
      fail();
      return std::nullopt;
    }
    const PartitionMatroid one_per_pivot = PartitionMatroid::unit_blocks(blocks);
    ElementSet common =
        matroid_intersection({ground, &one_per_pivot, &rule_.matroid()});
    if (common.size() < pivots_.size()) {
      fail();
      return std::nullopt;
    }
    return common;
  }

  std::size_t stored_points() const {
    std::size_t total = pivots_.size();
    for (const auto& p : pivots_) total += p.independent_set.size();
    return total;
  }
  std::size_t peak_stored() const { return peak_stored_; }
  std::size_t space_bound() const {
    const std::size_t r = rule_.pivot_limit();
    return r * r + r;
  }

 private:
  void fail() {
    failed_ = true;
    certificate_ = internal::pivot_ids(pivots_);
  }

  const Metric* metric_;
  MatroidRule rule_;
  double tau_;
  std::vector<PivotRecord> pivots_;
  bool failed_ = false;
  ElementSet certificate_;
  std::size_t peak_stored_ = 0;
};

}  // namespace mcstream
