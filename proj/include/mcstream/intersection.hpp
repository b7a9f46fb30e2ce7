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
#include <deque>
#include <vector>

#include "mcstream/matroid.hpp"

namespace mcstream {

struct IntersectionProblem {
  ElementSet ground;
  const Matroid* m1 = nullptr;
  const Matroid* m2 = nullptr;
};

// Maximum-cardinality common independent set by repeated shortest augmenting
// paths in the exchange graph. Sources, sinks and neighbours are visited in
// element-index order, so the result is a deterministic function of the input.
inline ElementSet matroid_intersection(const IntersectionProblem& problem) {
  const Matroid& m1 = *problem.m1;
  const Matroid& m2 = *problem.m2;
  ElementSet ground = problem.ground;
  std::sort(ground.begin(), ground.end());
  ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
  for (ElementId e : ground) {
    if (!m1.in_ground(e)) throw UnknownElementError(e);
    if (!m2.in_ground(e)) throw UnknownElementError(e);
  }

  const std::size_t n = ground.size();
  std::vector<bool> in_current(n, false);

  auto current_set = [&] {
    ElementSet out;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_current[i]) out.push_back(ground[i]);
    }
    return out;
  };

  while (true) {
    const ElementSet current = current_set();
    // I - x + y for x in I (or none), y outside I.
    auto swapped = [&](std::ptrdiff_t x, std::size_t y) {
      ElementSet s;
      for (std::size_t i = 0; i < n; ++i) {
        if (in_current[i] && static_cast<std::ptrdiff_t>(i) != x) {
          s.push_back(ground[i]);
        }
      }
      s.push_back(ground[y]);
      return s;
    };

    std::vector<bool> source(n, false), sink(n, false);
    for (std::size_t y = 0; y < n; ++y) {
      if (in_current[y]) continue;
      const ElementSet grown = swapped(-1, y);
      source[y] = m1.is_independent(grown);
      sink[y] = m2.is_independent(grown);
    }

    // Arcs: x in I -> y outside I when I - x + y is independent in m1;
    //       y outside I -> x in I when I - x + y is independent in m2.
    std::vector<std::ptrdiff_t> parent(n, -2);
    std::deque<std::size_t> queue;
    for (std::size_t y = 0; y < n; ++y) {
      if (source[y]) {
        parent[y] = -1;
        queue.push_back(y);
      }
    }
    std::ptrdiff_t end = -1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      if (!in_current[v] && sink[v]) {
        end = static_cast<std::ptrdiff_t>(v);
        break;
      }
      for (std::size_t w = 0; w < n; ++w) {
        if (parent[w] != -2 || in_current[w] == in_current[v]) continue;
        bool arc = false;
        if (in_current[v]) {
          arc = m1.is_independent(swapped(static_cast<std::ptrdiff_t>(v), w));
        } else {
          arc = m2.is_independent(swapped(static_cast<std::ptrdiff_t>(w), v));
        }
        if (arc) {
          parent[w] = static_cast<std::ptrdiff_t>(v);
          queue.push_back(w);
        }
      }
    }
    if (end < 0) return current;
    for (std::ptrdiff_t v = end; v >= 0; v = parent[v]) {
      in_current[v] = !in_current[v];
    }
  }
}

}  // namespace mcstream
