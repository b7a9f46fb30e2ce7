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
#include <span>
#include <string>
#include <vector>

#include "mcstream/constraint.hpp"
#include "mcstream/intersection.hpp"
#include "mcstream/matroid.hpp"
#include "mcstream/metric.hpp"

namespace mcstream {

inline constexpr std::size_t kDefaultBruteCap = 24;
inline constexpr std::size_t kDefaultExactCap = 64;

using FeasibleFn = std::function<bool(std::span<const ElementId>)>;

// "All but `allowed_outliers` of `targets` lie within `radius` of the set."
struct CoverageCheck {
  ElementSet targets;
  double radius = 0.0;
  std::size_t allowed_outliers = 0;
};

// Depth-first search over feasible subsets of `candidates` (index order,
// pruned on every extension) returning the first subset, in pre-order, that
// passes every check. Throws ResourceCapError when there are more candidates
// than `cap`.
inline std::optional<ElementSet> brute_independent_cover(
    const Metric& metric, ElementSet candidates, const FeasibleFn& feasible,
    const std::vector<CoverageCheck>& checks,
    std::size_t cap = kDefaultBruteCap) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  if (candidates.size() > cap) {
    throw ResourceCapError("brute-force search over " +
                           std::to_string(candidates.size()) +
                           " candidates exceeds the cap of " +
                           std::to_string(cap));
  }
  const std::size_t n = candidates.size();

  // dist[k][t][c]: target t of check k to candidate c.
  std::vector<std::vector<std::vector<double>>> dist(checks.size());
  std::vector<std::vector<double>> nearest(checks.size());
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto& targets = checks[k].targets;
    dist[k].assign(targets.size(), std::vector<double>(n));
    for (std::size_t t = 0; t < targets.size(); ++t) {
      for (std::size_t c = 0; c < n; ++c) {
        dist[k][t][c] = metric.distance(targets[t], candidates[c]);
      }
    }
    nearest[k].assign(targets.size(), kInfinity);
  }

  auto passes = [&]() {
    for (std::size_t k = 0; k < checks.size(); ++k) {
      std::size_t misses = 0;
      for (double d : nearest[k]) {
        if (d > checks[k].radius && ++misses > checks[k].allowed_outliers) {
          return false;
        }
      }
    }
    return true;
  };

  ElementSet chosen;
  std::optional<ElementSet> found;
  std::function<bool(std::size_t)> search = [&](std::size_t start) {
    if (passes()) {
      found = chosen;
      return true;
    }
    for (std::size_t c = start; c < n; ++c) {
      chosen.push_back(candidates[c]);
      if (feasible(chosen)) {
        std::vector<std::vector<double>> saved = nearest;
        for (std::size_t k = 0; k < checks.size(); ++k) {
          for (std::size_t t = 0; t < nearest[k].size(); ++t) {
            nearest[k][t] = std::min(nearest[k][t], dist[k][t][c]);
          }
        }
        if (search(c + 1)) return true;
        nearest = std::move(saved);
      }
      chosen.pop_back();
    }
    return false;
  };
  search(0);
  return found;
}

// Cost of a center set with z outliers: the smallest radius leaving at most z
// of `points` uncovered. +infinity when centers is empty and points are not
// all excused.
inline double clustering_cost(const Metric& metric, const ElementSet& points,
                              const ElementSet& centers, std::size_t z = 0) {
  if (z >= points.size()) return 0.0;
  std::vector<double> d;
  d.reserve(points.size());
  for (ElementId p : points) d.push_back(dist_to_set(metric, p, centers));
  auto kth = d.end() - static_cast<std::ptrdiff_t>(z) - 1;
  std::nth_element(d.begin(), kth, d.end());
  return *kth;
}

struct ExactOptimum {
  double cost = kInfinity;
  ElementSet witness;
};

// Optimum over every feasible center set by enumeration. Feasibility must be
// downward closed. Throws ResourceCapError when |points| exceeds `cap`.
inline ExactOptimum exact_opt(const Metric& metric, const ElementSet& points,
                              const FeasibleFn& feasible, std::size_t z = 0,
                              std::size_t cap = kDefaultExactCap) {
  if (points.size() > cap) {
    throw ResourceCapError("exact optimum over " +
                           std::to_string(points.size()) +
                           " points exceeds the cap of " + std::to_string(cap));
  }
  const std::size_t n = points.size();
  ExactOptimum best;
  if (n == 0 || z >= n) {
    best.cost = 0.0;
    return best;
  }
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i][j] = metric.distance(points[i], points[j]);
    }
  }
  std::vector<double> nearest(n, kInfinity);
  std::vector<double> scratch(n);
  ElementSet chosen;

  auto evaluate = [&] {
    scratch = nearest;
    auto kth = scratch.end() - static_cast<std::ptrdiff_t>(z) - 1;
    std::nth_element(scratch.begin(), kth, scratch.end());
    if (*kth < best.cost) {
      best.cost = *kth;
      best.witness = chosen;
    }
  };

  std::function<void(std::size_t)> search = [&](std::size_t start) {
    evaluate();
    for (std::size_t c = start; c < n; ++c) {
      chosen.push_back(points[c]);
      if (feasible(chosen)) {
        std::vector<double> saved = nearest;
        for (std::size_t i = 0; i < n; ++i) {
          nearest[i] = std::min(nearest[i], dist[i][c]);
        }
        search(c + 1);
        nearest = std::move(saved);
      }
      chosen.pop_back();
    }
  };
  search(0);
  return best;
}

inline ExactOptimum exact_opt(const Metric& metric, const ElementSet& points,
                              const Matroid& matroid, std::size_t z = 0,
                              std::size_t cap = kDefaultExactCap) {
  return exact_opt(
      metric, points,
      [&](std::span<const ElementId> s) { return matroid.is_independent(s); },
      z, cap);
}

inline ExactOptimum exact_opt(const Metric& metric, const ElementSet& points,
                              const Knapsack& knapsack, std::size_t z = 0,
                              std::size_t cap = kDefaultExactCap) {
  return exact_opt(
      metric, points,
      [&](std::span<const ElementId> s) { return knapsack.feasible(s); }, z,
      cap);
}

// Pivots scanned in order; each unmarked one becomes a marker and marks every
// pivot within 2 alpha of it. Markers are pairwise more than 2 alpha apart.
inline ElementSet mark_pivots(const Metric& metric, double alpha,
                              const ElementSet& pivots) {
  ElementSet markers;
  std::vector<bool> marked(pivots.size(), false);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (marked[i]) continue;
    markers.push_back(pivots[i]);
    for (std::size_t j = i; j < pivots.size(); ++j) {
      if (!marked[j] && metric.distance(pivots[i], pivots[j]) <= 2.0 * alpha) {
        marked[j] = true;
      }
    }
  }
  return markers;
}

struct PromiseResult {
  ElementSet markers;
  std::optional<ElementSet> centers;  // empty on failure
};

// Offline finisher under the promise that some independent B within
// `candidates` has d(c, B) <= alpha for every pivot c. On success every pivot
// is within 3 alpha of the returned centers; under the promise it never fails.
inline PromiseResult efficient_matroid_center(const Metric& metric,
                                              const Matroid& matroid,
                                              double alpha,
                                              const ElementSet& pivots,
                                              const ElementSet& candidates) {
  PromiseResult result;
  result.markers = mark_pivots(metric, alpha, pivots);

  // A candidate lying in several balls goes to the earliest marker's ball.
  std::vector<ElementSet> blocks(result.markers.size());
  ElementSet ground;
  for (ElementId x : candidates) {
    if (contains(ground, x)) continue;
    for (std::size_t b = 0; b < result.markers.size(); ++b) {
      if (metric.distance(result.markers[b], x) <= alpha) {
        blocks[b].push_back(x);
        ground.push_back(x);
        break;
      }
    }
  }
  for (const auto& block : blocks) {
    if (block.empty()) return result;
  }
  if (result.markers.empty()) {
    result.centers = ElementSet{};
    return result;
  }
  const PartitionMatroid one_per_ball = PartitionMatroid::unit_blocks(blocks);
  ElementSet common =
      matroid_intersection({ground, &one_per_ball, &matroid});
  if (common.size() < result.markers.size()) return result;
  result.centers = std::move(common);
  return result;
}

// Knapsack analogue: the same marking, then the lightest candidate within
// alpha of each marker. Fails when a ball is empty or the picks overrun the
// budget.
inline PromiseResult knapsack_3approx(const Metric& metric,
                                      const Knapsack& knapsack, double alpha,
                                      const ElementSet& pivots,
                                      ElementSet candidates) {
  PromiseResult result;
  result.markers = mark_pivots(metric, alpha, pivots);
  std::sort(candidates.begin(), candidates.end());
  ElementSet picks;
  for (ElementId marker : result.markers) {
    std::optional<ElementId> best;
    for (ElementId x : candidates) {
      if (metric.distance(marker, x) > alpha) continue;
      if (!best || knapsack.weight(x) < knapsack.weight(*best)) best = x;
    }
    if (!best) return result;
    picks.push_back(*best);
  }
  if (!knapsack.feasible(picks)) return result;
  result.centers = std::move(picks);
  return result;
}

struct OfflineSolution {
  double alpha = 0.0;
  ElementSet centers;
};

// Offline 3-approximation: try every pairwise distance as alpha, smallest
// first, with every point both a pivot and a candidate.
inline std::optional<OfflineSolution> offline_3approx_all_guesses(
    const Metric& metric, const Matroid& matroid, const ElementSet& points) {
  std::vector<double> alphas{0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      alphas.push_back(metric.distance(points[i], points[j]));
    }
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  for (double alpha : alphas) {
    auto result =
        efficient_matroid_center(metric, matroid, alpha, points, points);
    if (result.centers) return OfflineSolution{alpha, *result.centers};
  }
  return std::nullopt;
}

}  // namespace mcstream
