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
#include <random>
#include <string>
#include <vector>

#include "mcstream/instance.hpp"
#include "mcstream/offline.hpp"

namespace mcstream {

// Partition-matroid center instances built from an INDEX input: a q x q bit
// string held by the first party and a 1-based position held by the second.
//
// Vertices: centers-side sets CA (q) and CB (q - 1), part-side sets VA (q) and
// VB (q - 1). Position l names the pair (CA[(l-1)/q], VA[(l-1)%q]). Every edge
// becomes a point in the cluster of its centers-side end and the part of its
// part-side end; every VA/VB vertex is a capacity-1 part. Each CA vertex also
// gets a placeholder point in a shared capacity-0 part.
struct LowerBoundParams {
  std::size_t q = 1;
  std::vector<bool> bits;  // q * q entries, position l stored at bits[l - 1]
  std::size_t index = 1;
  double delta = 10.0;
  bool permute = false;
  std::uint64_t seed = 0;
};

struct LowerBoundInstance {
  Instance instance;
  std::vector<std::size_t> cluster_of;  // per point, in stream order
  std::size_t first_party_points = 0;
  bool indexed_bit = false;
};

inline LowerBoundInstance gen_index_instance(const LowerBoundParams& params) {
  const std::size_t q = params.q;
  if (q == 0) throw InputError("lower bound: q must be positive");
  if (params.bits.size() != q * q) {
    throw InputError("lower bound: expected " + std::to_string(q * q) + " bits");
  }
  if (params.index < 1 || params.index > q * q) {
    throw InputError("lower bound: index must lie in [1, " + std::to_string(q * q) + "]");
  }
  if (!(params.delta > 1.0)) throw InputError("lower bound: delta must exceed 1");

  const std::size_t u_star = (params.index - 1) / q;
  const std::size_t v_star = (params.index - 1) % q;
  auto va = [](std::size_t j) { return "VA" + std::to_string(j); };
  auto vb = [](std::size_t k) { return "VB" + std::to_string(k); };
  const std::size_t cb_base = q;  // cluster ids: CA are 0..q-1, CB follow

  LowerBoundInstance out;
  out.indexed_bit = params.bits[params.index - 1];
  Instance& inst = out.instance;
  inst.metric = MetricKind::matrix;
  inst.matroid.kind = MatroidKind::partition;
  for (std::size_t j = 0; j < q; ++j) inst.matroid.parts.emplace_back(va(j), 1);
  for (std::size_t k = 0; k + 1 < q; ++k) inst.matroid.parts.emplace_back(vb(k), 1);
  inst.matroid.parts.emplace_back("P0", 0);

  struct Pending {
    PointRecord record;
    std::size_t cluster;
  };
  std::vector<Pending> first, second;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (!params.bits[i * q + j]) continue;
      first.push_back({{"a" + std::to_string(i) + "_" + std::to_string(j), {}, va(j), {}, {}, {}}, i});
    }
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < q; ++i) {
    if (i == u_star) continue;
    second.push_back({{"m" + std::to_string(i) + "_" + std::to_string(k), {}, vb(k), {}, {}, {}}, i});
    ++k;
  }
  k = 0;
  for (std::size_t j = 0; j < q; ++j) {
    if (j == v_star) continue;
    second.push_back({{"n" + std::to_string(j) + "_" + std::to_string(k), {}, va(j), {}, {}, {}}, cb_base + k});
    ++k;
  }
  for (std::size_t i = 0; i < q; ++i) {
    second.push_back({{"p" + std::to_string(i), {}, "P0", {}, {}, {}}, i});
  }

  out.first_party_points = first.size();
  std::vector<Pending> all = std::move(first);
  all.insert(all.end(), second.begin(), second.end());
  if (params.permute) {
    std::mt19937_64 rng(params.seed);
    std::shuffle(all.begin(), all.end(), rng);
  }
  for (const auto& p : all) {
    inst.points.push_back(p.record);
    out.cluster_of.push_back(p.cluster);
  }
  const std::size_t n = all.size();
  inst.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      inst.matrix[a][b] = out.cluster_of[a] == out.cluster_of[b] ? 1.0 : params.delta;
    }
  }
  return out;
}

struct DichotomyCheck {
  bool holds = false;
  double opt = 0.0;
  double expected = 0.0;
};

// Exact optimum of the generated instance against the indexed bit: 1 when the
// bit is set, delta otherwise. With q = 1 and a zero bit the only point is a
// placeholder that may not be a center, so no center set exists at all and
// the optimum is infinite; that case holds when the optimum is at least delta.
inline DichotomyCheck verify_dichotomy(const LowerBoundParams& params,
                                       std::size_t cap = kDefaultExactCap) {
  const LowerBoundInstance lb = gen_index_instance(params);
  const MetricPtr metric = make_metric(lb.instance);
  const MatroidPtr matroid = make_matroid(lb.instance);
  const ExactOptimum best =
      exact_opt(*metric, all_elements(lb.instance.size()), *matroid, 0, cap);
  DichotomyCheck check;
  check.opt = best.cost;
  check.expected = lb.indexed_bit ? 1.0 : params.delta;
  if (lb.indexed_bit) {
    check.holds = best.cost == 1.0;
  } else if (params.q == 1) {
    check.holds = best.cost >= params.delta;
  } else {
    check.holds = best.cost == params.delta;
  }
  return check;
}

}  // namespace mcstream
