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

// Feeds points one at a time into a single guess with outliers and reports
// what the summary keeps.

#include <iostream>

#include "mcstream.hpp"

using namespace mcstream;

int main() {
  EuclideanMetric metric({{0.0, 0.0}, {0.5, 0.2}, {0.3, 0.9}, {20.0, 20.0},
                          {20.4, 19.7}, {19.6, 20.3}, {90.0, -40.0}});
  PartitionMatroid parts({0, 1, 0, 1, 0, 1, 0}, {1, 1});
  const double tau = 1.0;
  const std::size_t z = 1;

  OutlierInstance<MatroidRule> guess(metric, MatroidRule(parts), tau, z);
  for (std::size_t i = 0; i < metric.size() && !guess.aborted(); ++i) {
    guess.process(element(i));
    std::cout << "after point " << i << ": " << guess.pivots().size() << " pivots, "
              << guess.free_points().size() << " free\n";
  }
  if (auto centers = guess.finish_brute()) {
    std::cout << "centers:";
    for (ElementId c : *centers) std::cout << ' ' << index_of(c);
    std::cout << "\ncost with one outlier: "
              << clustering_cost(metric, all_elements(metric.size()), *centers, z) << '\n';
  } else {
    std::cout << "guess " << tau << " is too small\n";
  }
}
