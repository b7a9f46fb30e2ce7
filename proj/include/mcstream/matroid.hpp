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
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mcstream/element.hpp"

namespace mcstream {

// Independence oracle over a finite ground set of ElementIds.
//
// Implementations are immutable after construction, so a single oracle can be
// queried from several threads. Queries naming an element outside the ground
// set throw UnknownElementError. A query containing the same element twice is
// answered as dependent.
class Matroid {
 public:
  virtual ~Matroid() = default;

  virtual bool in_ground(ElementId e) const = 0;

  // Upper bound r on the rank of the whole ground set.
  virtual std::size_t rank_upper() const = 0;

  bool is_independent(std::span<const ElementId> set) const {
    for (ElementId e : set) {
      if (!in_ground(e)) throw UnknownElementError(e);
    }
    if (set.size() > 1) {
      ElementSet sorted(set.begin(), set.end());
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return false;
      }
    }
    return independent(set);
  }

  bool is_independent(std::initializer_list<ElementId> set) const {
    return is_independent(std::span<const ElementId>(set.begin(), set.size()));
  }

 protected:
  // `set` holds distinct ground elements.
  virtual bool independent(std::span<const ElementId> set) const = 0;
};

using MatroidPtr = std::shared_ptr<const Matroid>;

class UniformMatroid final : public Matroid {
 public:
  UniformMatroid(std::size_t ground_size, std::size_t k)
      : ground_size_(ground_size), k_(k) {}

  bool in_ground(ElementId e) const override {
    return index_of(e) < ground_size_;
  }
  std::size_t rank_upper() const override { return k_; }
  std::size_t k() const { return k_; }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    return set.size() <= k_;
  }

 private:
  std::size_t ground_size_;
  std::size_t k_;
};

// |A ∩ E_i| <= capacity_i for every part E_i.
class PartitionMatroid final : public Matroid {
 public:
  static constexpr std::ptrdiff_t kNoPart = -1;

  // part_of[i] is the part of element i, or kNoPart when i is outside the
  // ground set.
  PartitionMatroid(std::vector<std::ptrdiff_t> part_of,
                   std::vector<std::size_t> capacities)
      : part_of_(std::move(part_of)), capacities_(std::move(capacities)) {
    for (std::ptrdiff_t p : part_of_) {
      if (p != kNoPart &&
          (p < 0 || static_cast<std::size_t>(p) >= capacities_.size())) {
        throw InputError("partition matroid: part index out of range");
      }
    }
    rank_upper_ =
        std::accumulate(capacities_.begin(), capacities_.end(), std::size_t{0});
  }

  // Partition matroid whose parts are the given disjoint blocks, each with
  // capacity 1.
  static PartitionMatroid unit_blocks(const std::vector<ElementSet>& blocks) {
    std::size_t max_index = 0;
    for (const auto& block : blocks) {
      for (ElementId e : block) max_index = std::max(max_index, index_of(e) + 1);
    }
    std::vector<std::ptrdiff_t> part_of(max_index, kNoPart);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (ElementId e : blocks[b]) {
        if (part_of[index_of(e)] != kNoPart) {
          throw PreconditionError("partition blocks must be disjoint");
        }
        part_of[index_of(e)] = static_cast<std::ptrdiff_t>(b);
      }
    }
    return PartitionMatroid(std::move(part_of),
                            std::vector<std::size_t>(blocks.size(), 1));
  }

  bool in_ground(ElementId e) const override {
    return index_of(e) < part_of_.size() && part_of_[index_of(e)] != kNoPart;
  }
  std::size_t rank_upper() const override { return rank_upper_; }

  std::ptrdiff_t part(ElementId e) const { return part_of_.at(index_of(e)); }
  const std::vector<std::size_t>& capacities() const { return capacities_; }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    std::vector<std::size_t> used(capacities_.size(), 0);
    for (ElementId e : set) {
      auto p = static_cast<std::size_t>(part_of_[index_of(e)]);
      if (++used[p] > capacities_[p]) return false;
    }
    return true;
  }

 private:
  std::vector<std::ptrdiff_t> part_of_;
  std::vector<std::size_t> capacities_;
  std::size_t rank_upper_ = 0;
};

// Column vectors over the rationals (exact, fraction-free elimination) or over
// GF(p) when a prime modulus is given.
class LinearMatroid final : public Matroid {
 public:
  LinearMatroid(std::vector<std::vector<std::int64_t>> vectors,
                std::optional<std::uint64_t> modulus = std::nullopt)
      : vectors_(std::move(vectors)), modulus_(modulus) {
    dim_ = vectors_.empty() ? 0 : vectors_.front().size();
    for (const auto& v : vectors_) {
      if (v.size() != dim_) {
        throw InputError("linear matroid: vectors must share one dimension");
      }
    }
    if (modulus_ && *modulus_ < 2) {
      throw InputError("linear matroid: modulus must be a prime >= 2");
    }
  }

  bool in_ground(ElementId e) const override {
    return index_of(e) < vectors_.size();
  }
  std::size_t rank_upper() const override { return dim_; }
  std::size_t dimension() const { return dim_; }
  std::optional<std::uint64_t> modulus() const { return modulus_; }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    if (set.size() > dim_) return false;
    return modulus_ ? rank_mod_p(set) == set.size()
                    : rank_rational(set) == set.size();
  }

 private:
  std::size_t rank_rational(std::span<const ElementId> set) const {
    using boost::multiprecision::cpp_int;
    std::vector<std::vector<cpp_int>> rows;
    rows.reserve(set.size());
    for (ElementId e : set) {
      const auto& v = vectors_[index_of(e)];
      rows.emplace_back(v.begin(), v.end());
    }
    // Bareiss elimination keeps every entry integral.
    std::size_t rank = 0;
    cpp_int prev_pivot = 1;
    for (std::size_t col = 0; col < dim_ && rank < rows.size(); ++col) {
      std::size_t pivot = rank;
      while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[pivot], rows[rank]);
      for (std::size_t r = rank + 1; r < rows.size(); ++r) {
        for (std::size_t c = col + 1; c < dim_; ++c) {
          rows[r][c] = (rows[rank][col] * rows[r][c] -
                        rows[r][col] * rows[rank][c]) /
                       prev_pivot;
        }
        rows[r][col] = 0;
      }
      prev_pivot = rows[rank][col];
      ++rank;
    }
    return rank;
  }

  std::size_t rank_mod_p(std::span<const ElementId> set) const {
    const std::uint64_t p = *modulus_;
    auto mulmod = [p](std::uint64_t a, std::uint64_t b) {
      return static_cast<std::uint64_t>(
          static_cast<boost::multiprecision::uint128_t>(a) * b % p);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t n) {
      std::uint64_t r = 1;
      for (; n; n >>= 1, a = mulmod(a, a)) {
        if (n & 1) r = mulmod(r, a);
      }
      return r;
    };
    std::vector<std::vector<std::uint64_t>> rows;
    for (ElementId e : set) {
      std::vector<std::uint64_t> row;
      for (std::int64_t x : vectors_[index_of(e)]) {
        std::int64_t m = x % static_cast<std::int64_t>(p);
        row.push_back(static_cast<std::uint64_t>(
            m < 0 ? m + static_cast<std::int64_t>(p) : m));
      }
      rows.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < dim_ && rank < rows.size(); ++col) {
      std::size_t pivot = rank;
      while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[pivot], rows[rank]);
      const std::uint64_t inv = powmod(rows[rank][col], p - 2);
      for (std::size_t r = rank + 1; r < rows.size(); ++r) {
        const std::uint64_t factor = mulmod(rows[r][col], inv);
        if (factor == 0) continue;
        for (std::size_t c = col; c < dim_; ++c) {
          rows[r][c] = (rows[r][c] + p - mulmod(factor, rows[rank][c])) % p;
        }
      }
      ++rank;
    }
    return rank;
  }

  std::vector<std::vector<std::int64_t>> vectors_;
  std::optional<std::uint64_t> modulus_;
  std::size_t dim_ = 0;
};

// Edges of a multigraph; a set is independent iff it is a forest.
class GraphicMatroid final : public Matroid {
 public:
  GraphicMatroid(std::size_t num_vertices,
                 std::vector<std::pair<std::size_t, std::size_t>> edges)
      : num_vertices_(num_vertices), edges_(std::move(edges)) {
    for (auto [u, v] : edges_) {
      if (u >= num_vertices_ || v >= num_vertices_) {
        throw InputError("graphic matroid: edge endpoint out of range");
      }
    }
  }

  bool in_ground(ElementId e) const override {
    return index_of(e) < edges_.size();
  }
  std::size_t rank_upper() const override {
    return num_vertices_ == 0 ? 0 : num_vertices_ - 1;
  }
  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    std::vector<std::size_t> parent(num_vertices_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (ElementId e : set) {
      auto [u, v] = edges_[index_of(e)];
      std::size_t ru = find(u), rv = find(v);
      if (ru == rv) return false;
      parent[ru] = rv;
    }
    return true;
  }

 private:
  std::size_t num_vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

// Independent sets given explicitly; the family is the downward closure of the
// listed sets. The exchange axiom is not checked here (see the test oracles).
class ExplicitMatroid final : public Matroid {
 public:
  ExplicitMatroid(std::size_t ground_size, std::vector<ElementSet> sets)
      : ground_size_(ground_size), sets_(std::move(sets)) {
    for (auto& s : sets_) {
      std::sort(s.begin(), s.end());
      for (ElementId e : s) {
        if (index_of(e) >= ground_size_) {
          throw InputError("explicit matroid: set member out of range");
        }
      }
      rank_upper_ = std::max(rank_upper_, s.size());
    }
  }

  bool in_ground(ElementId e) const override {
    return index_of(e) < ground_size_;
  }
  std::size_t rank_upper() const override { return rank_upper_; }
  const std::vector<ElementSet>& sets() const { return sets_; }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    if (set.empty()) return true;
    ElementSet sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    return std::any_of(sets_.begin(), sets_.end(), [&](const ElementSet& s) {
      return std::includes(s.begin(), s.end(), sorted.begin(), sorted.end());
    });
  }

 private:
  std::size_t ground_size_;
  std::vector<ElementSet> sets_;
  std::size_t rank_upper_ = 0;
};

// The base matroid with its ground set cut down to `keep`.
class RestrictedMatroid final : public Matroid {
 public:
  RestrictedMatroid(MatroidPtr base, const ElementSet& keep)
      : base_(std::move(base)), keep_(keep.begin(), keep.end()) {
    for (ElementId e : keep) {
      if (!base_->in_ground(e)) throw UnknownElementError(e);
    }
  }

  bool in_ground(ElementId e) const override { return keep_.contains(e); }
  std::size_t rank_upper() const override {
    return std::min(base_->rank_upper(), keep_.size());
  }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    return base_->is_independent(set);
  }

 private:
  MatroidPtr base_;
  std::unordered_set<ElementId> keep_;
};

// Greedy rank: scan `set` in index order, keep what stays independent.
inline std::size_t rank(const Matroid& m, const ElementSet& set) {
  ElementSet order = set;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  ElementSet kept;
  for (ElementId e : order) {
    kept.push_back(e);
    if (!m.is_independent(kept)) kept.pop_back();
  }
  return kept.size();
}

// Whether independent set `basis` spans e, i.e. rank(basis + e) == |basis|.
inline bool spans(const Matroid& m, const ElementSet& basis, ElementId e) {
  if (!m.in_ground(e)) throw UnknownElementError(e);
  if (contains(basis, e)) {
    for (ElementId x : basis) {
      if (!m.in_ground(x)) throw UnknownElementError(x);
    }
    return true;
  }
  ElementSet extended = basis;
  extended.push_back(e);
  return !m.is_independent(extended);
}

inline bool is_loop(const Matroid& m, ElementId e) {
  return !m.is_independent({e});
}

inline MatroidPtr restrict(MatroidPtr m, const ElementSet& keep) {
  return std::make_shared<RestrictedMatroid>(std::move(m), keep);
}

// Given independent sets I_1..I_t and an independent S whose member s_i is
// spanned by I_{f(i)} (f onto), returns an independent B with |B| = |S| that
// meets every I_j. Each s_i not already in its I_{f(i)} is exchanged for the
// first element of I_{f(i)}, in index order, that keeps the set independent.
inline ElementSet build_transversal(const Matroid& m,
                                    const std::vector<ElementSet>& sets,
                                    const ElementSet& s,
                                    const std::vector<std::size_t>& f) {
  if (f.size() != s.size()) {
    throw PreconditionError("build_transversal: f must map every member of S");
  }
  std::vector<bool> hit(sets.size(), false);
  for (std::size_t j : f) {
    if (j >= sets.size()) {
      throw PreconditionError("build_transversal: f maps outside [t]");
    }
    hit[j] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
    throw PreconditionError("build_transversal: f is not onto");
  }
  if (!m.is_independent(s)) {
    throw PreconditionError("build_transversal: S is not independent");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!m.is_independent(sets[f[i]])) {
      throw PreconditionError("build_transversal: some I_j is dependent");
    }
    if (!spans(m, sets[f[i]], s[i])) {
      throw PreconditionError("build_transversal: s_" + std::to_string(i) +
                              " is not spanned by its assigned set");
    }
  }

  ElementSet current = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const ElementSet& target = sets[f[i]];
    if (contains(target, s[i])) continue;
    ElementSet rest;
    for (ElementId x : current) {
      if (x != s[i]) rest.push_back(x);
    }
    ElementSet candidates = target;
    std::sort(candidates.begin(), candidates.end());
    bool exchanged = false;
    for (ElementId a : candidates) {
      if (contains(rest, a)) continue;
      rest.push_back(a);
      if (m.is_independent(rest)) {
        exchanged = true;
        break;
      }
      rest.pop_back();
    }
    if (!exchanged) {
      throw PreconditionError("build_transversal: no exchange element found");
    }
    current = std::move(rest);
  }
  return current;
}

}  // namespace mcstream
