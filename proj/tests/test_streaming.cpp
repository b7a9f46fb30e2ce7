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

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "mcstream.hpp"
#include "oracles.hpp"

namespace {

using namespace mcstream;

EuclideanMetric line(std::vector<double> xs) {
  std::vector<std::vector<double>> pts;
  for (double x : xs) pts.push_back({x});
  return EuclideanMetric(std::move(pts));
}

template <class Inst>
void feed(Inst& inst, std::size_t n) {
  for (std::size_t i = 0; i < n && !inst.aborted(); ++i) inst.process(element(i));
}

double random_tau(std::mt19937_64& rng) {
  return 0.2 + static_cast<double>(rng() % 60) / 10.0;
}

// --- one pass, matroid rule ---

TEST(MatroidCenterInstance, FirstPointBecomesPivot) {
  auto m = line({0.0, 10.0});
  UniformMatroid u(2, 1);
  MatroidCenterInstance inst(m, MatroidRule(u), 1.0);
  inst.process(element(0));
  ASSERT_EQ(inst.pivots().size(), 1u);
  EXPECT_EQ(inst.pivots()[0].pivot, element(0));
  EXPECT_EQ(inst.pivots()[0].independent_set, ElementSet{element(0)});
}

TEST(MatroidCenterInstance, LoopPivotHasEmptySet) {
  auto m = line({0.0});
  PartitionMatroid p({0}, {0});
  MatroidCenterInstance inst(m, MatroidRule(p), 1.0);
  EXPECT_TRUE(inst.pivots().empty());
  // rank_upper is 0 here, so the very first point already aborts.
  inst.process(element(0));
  EXPECT_TRUE(inst.aborted());
  PartitionMatroid q({0, 1}, {0, 1});
  auto m2 = line({0.0, 10.0});
  MatroidCenterInstance loops(m2, MatroidRule(q), 1.0);
  loops.process(element(0));
  ASSERT_EQ(loops.pivots().size(), 1u);
  EXPECT_TRUE(loops.pivots()[0].independent_set.empty());
}

TEST(MatroidCenterInstance, AbortsOnExtraFarPivot) {
  auto m = line({0.0, 10.0, 20.0});
  UniformMatroid u(3, 2);
  MatroidCenterInstance inst(m, MatroidRule(u), 1.0);
  inst.process(element(0));
  inst.process(element(1));
  EXPECT_FALSE(inst.aborted());
  inst.process(element(2));
  EXPECT_TRUE(inst.aborted());
  EXPECT_EQ(inst.abort_witness(), element(2));
  EXPECT_EQ(inst.child_seed().pending, ElementSet{element(2)});
  EXPECT_THROW(inst.process(element(2)), PreconditionError);
}

TEST(MatroidCenterInstance, SpannedPointIsForgotten) {
  auto m = line({0.0, 0.5, 1.0});
  UniformMatroid u(3, 1);
  MatroidCenterInstance inst(m, MatroidRule(u), 1.0);
  feed(inst, 3);
  ASSERT_EQ(inst.pivots().size(), 1u);
  EXPECT_EQ(inst.pivots()[0].independent_set, ElementSet{element(0)});
  EXPECT_EQ(inst.summary(), ElementSet{element(0)});
}

TEST(MatroidCenterInstance, JoinsEarliestPivot) {
  // Point 2 is within 2 tau of both pivots.
  auto m = line({0.0, 2.5, 1.5});
  UniformMatroid u(3, 3);
  MatroidCenterInstance inst(m, MatroidRule(u), 1.0);
  std::map<ElementId, ElementId> host;
  inst.set_assignment_sink([&](ElementId e, ElementId c) { host[e] = c; });
  feed(inst, 3);
  ASSERT_EQ(inst.pivots().size(), 2u);
  EXPECT_EQ(host[element(2)], element(0));
  EXPECT_EQ(inst.pivots()[0].independent_set, (ElementSet{element(0), element(2)}));
}

TEST(MatroidCenterInstance, BruteFinisherExamples) {
  auto m = line({0.0});
  UniformMatroid u(1, 1);
  MatroidCenterInstance one(m, MatroidRule(u), 1.0);
  one.process(element(0));
  EXPECT_EQ(one.finish_brute(5.0), ElementSet{element(0)});

  // Two pivots 0 and 10 each in part A; only the partner point 5 (part B)
  // may be opened, and it serves both within 5.
  auto m2 = line({0.0, 10.0, 5.0});
  PartitionMatroid p({0, 0, 1}, {0, 3});
  MatroidCenterInstance pick(m2, MatroidRule(p), 3.0);
  feed(pick, 3);
  ASSERT_FALSE(pick.aborted());
  const auto centers = pick.finish_brute(5.0);
  ASSERT_TRUE(centers);
  EXPECT_EQ(*centers, ElementSet{element(2)});

  MatroidCenterInstance low(m2, MatroidRule(p), 0.9);
  feed(low, 3);
  ASSERT_FALSE(low.aborted());
  EXPECT_FALSE(low.finish_brute(5.0));
  EXPECT_TRUE(low.aborted());
}

TEST(MatroidCenterInstance, EfficientFinisherSinglePivot) {
  auto m = line({0.0});
  UniformMatroid u(1, 1);
  MatroidCenterInstance inst(m, MatroidRule(u), 1.0);
  inst.process(element(0));
  EXPECT_EQ(inst.finish_efficient(5.0), ElementSet{element(0)});
}

TEST(MatroidCenterInstance, RandomStreamInvariants) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 14;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[rng() % ms.size()];
    const double tau = random_tau(rng);
    const std::size_t r = mat.rank_upper();
    MatroidCenterInstance inst(m, MatroidRule(mat), tau);
    std::map<ElementId, ElementId> host;
    inst.set_assignment_sink([&](ElementId e, ElementId c) { host[e] = c; });
    std::size_t processed = 0;
    for (; processed < n && !inst.aborted(); ++processed) {
      inst.process(element(processed));
      const auto& pv = inst.pivots();
      ASSERT_LE(pv.size(), r);
      ASSERT_LE(inst.stored_points(), r * r + r);
      for (std::size_t i = 0; i < pv.size(); ++i) {
        ASSERT_TRUE(mat.is_independent(pv[i].independent_set));
        for (std::size_t j = i + 1; j < pv.size(); ++j) {
          ASSERT_GT(m.distance(pv[i].pivot, pv[j].pivot), 2 * tau);
        }
      }
    }
    if (inst.aborted()) --processed;
    // Every processed point sits within 2 tau of its pivot and is spanned by
    // that pivot's set.
    for (std::size_t i = 0; i < processed; ++i) {
      const ElementId e = element(i);
      ASSERT_TRUE(host.count(e));
      const ElementId c = host[e];
      EXPECT_LE(m.distance(e, c), 2 * tau);
      const auto it = std::find_if(inst.pivots().begin(), inst.pivots().end(),
                                   [&](const PivotRecord& p) { return p.pivot == c; });
      ASSERT_NE(it, inst.pivots().end());
      EXPECT_TRUE(spans(mat, it->independent_set, e));
    }
  }
}

TEST(MatroidCenterInstance, PromiseGivesCertifiedCost) {
  std::mt19937_64 rng(102);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[rng() % ms.size()];
    const ElementSet all = all_elements(n);
    const double opt = oracle::optimum(m, all, mat);
    if (!std::isfinite(opt) || opt == 0.0) continue;
    const double tau = opt * (1.0 + static_cast<double>(rng() % 10) / 10.0);
    MatroidCenterInstance brute(m, MatroidRule(mat), tau);
    feed(brute, n);
    ASSERT_FALSE(brute.aborted()) << "trial " << trial;
    MatroidCenterInstance efficient = brute;
    const auto b = brute.finish_brute(5.0);
    ASSERT_TRUE(b);
    EXPECT_TRUE(mat.is_independent(*b));
    EXPECT_LE(oracle::cost(m, all, *b, 0), 7 * tau);
    const auto e = efficient.finish_efficient(5.0);
    ASSERT_TRUE(e);
    EXPECT_TRUE(mat.is_independent(*e));
    EXPECT_LE(oracle::cost(m, all, *e, 0), 17 * tau);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(MatroidCenterInstance, SeedFoldsAndAdopts) {
  auto m = line({0.0, 1.5, 10.0, 0.2});
  UniformMatroid u(4, 4);
  MatroidCenterInstance inst(m, MatroidRule(u), 1.0);
  ChildSeed seed;
  seed.pivots = {{element(0), {element(0), element(3)}, {}},
                 {element(1), {element(1)}, {}},
                 {element(2), {element(2)}, {}}};
  inst.seed(seed);
  ASSERT_EQ(inst.pivots().size(), 2u);
  EXPECT_EQ(inst.pivots()[0].pivot, element(0));
  EXPECT_EQ(inst.pivots()[0].independent_set,
            (ElementSet{element(0), element(3), element(1)}));
  EXPECT_EQ(inst.pivots()[1].pivot, element(2));
}

TEST(MatroidCenterInstance, SeedPreservesSpans) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 4 + rng() % 10;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[rng() % ms.size()];
    const double tau = random_tau(rng);
    MatroidCenterInstance parent(m, MatroidRule(mat), tau);
    feed(parent, n);
    const auto seed = parent.child_seed();
    MatroidCenterInstance child(m, MatroidRule(mat), tau * 2.5);
    child.seed(seed);
    for (const auto& old : seed.pivots) {
      for (ElementId e = element(0); index_of(e) < n; e = element(index_of(e) + 1)) {
        if (!spans(mat, old.independent_set, e)) continue;
        const bool covered = std::any_of(
            child.pivots().begin(), child.pivots().end(),
            [&](const PivotRecord& p) { return spans(mat, p.independent_set, e); });
        if (!child.aborted()) {
          EXPECT_TRUE(covered) << "trial " << trial;
        }
      }
    }
  }
}

// --- one pass, knapsack rule ---

TEST(KnapsackCenterInstance, RepresentativeRule) {
  auto m = line({0.0, 0.5});
  Knapsack lighter({5.0, 3.0}, 10.0);
  KnapsackCenterInstance a(m, KnapsackRule(lighter), 1.0);
  feed(a, 2);
  EXPECT_EQ(a.pivots()[0].independent_set, ElementSet{element(1)});

  Knapsack heavier({3.0, 5.0}, 10.0);
  KnapsackCenterInstance b(m, KnapsackRule(heavier), 1.0);
  feed(b, 2);
  EXPECT_EQ(b.pivots()[0].independent_set, ElementSet{element(0)});

  Knapsack equal({4.0, 4.0}, 10.0);
  KnapsackCenterInstance c(m, KnapsackRule(equal), 1.0);
  feed(c, 2);
  EXPECT_EQ(c.pivots()[0].independent_set, ElementSet{element(0)});
}

TEST(KnapsackCenterInstance, FinisherExamples) {
  auto m = line({0.0, 0.5, 10.0, 10.5});
  Knapsack roomy({1.0, 2.0, 3.0, 4.0}, 100.0);
  KnapsackCenterInstance vacuous(m, KnapsackRule(roomy), 1.0);
  feed(vacuous, 4);
  const auto all = vacuous.finish_brute(5.0);
  ASSERT_TRUE(all);
  EXPECT_LE(clustering_cost(m, all_elements(4), *all), 7.0);

  // Only {0, 2} fits a budget of 4 among the representatives.
  Knapsack exact({1.0, 2.0, 3.0, 4.0}, 4.0);
  KnapsackCenterInstance one(m, KnapsackRule(exact), 1.0);
  feed(one, 4);
  EXPECT_EQ(one.finish_brute(5.0), (ElementSet{element(0), element(2)}));

  Knapsack tight({1.0, 2.0, 3.0, 4.0}, 3.0);
  KnapsackCenterInstance low(m, KnapsackRule(tight), 1.0);
  feed(low, 4);
  EXPECT_TRUE(low.aborted() || !low.finish_brute(5.0));
}

TEST(KnapsackCenterInstance, SpaceAndPromise) {
  std::mt19937_64 rng(104);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    std::vector<double> w(n);
    for (double& x : w) x = 1.0 + static_cast<double>(rng() % 6);
    Knapsack k(w, 2.0 + static_cast<double>(rng() % 10));
    const std::size_t r = k.largest_feasible_size();
    const ElementSet all = all_elements(n);
    const double opt = oracle::optimum(m, all, [&](const ElementSet& s) { return k.feasible(s); });
    const double tau = std::isfinite(opt) && opt > 0 ? opt * 1.05 : random_tau(rng);
    KnapsackCenterInstance inst(m, KnapsackRule(k), tau);
    for (std::size_t i = 0; i < n && !inst.aborted(); ++i) {
      inst.process(element(i));
      ASSERT_LE(inst.stored_points(), 2 * r);
    }
    if (!std::isfinite(opt) || opt == 0) continue;
    ASSERT_FALSE(inst.aborted());
    KnapsackCenterInstance efficient = inst;
    const auto b = inst.finish_brute(5.0);
    ASSERT_TRUE(b);
    EXPECT_TRUE(k.feasible(*b));
    EXPECT_LE(oracle::cost(m, all, *b, 0), 7 * tau);
    const auto e = efficient.finish_efficient(5.0);
    ASSERT_TRUE(e);
    EXPECT_TRUE(k.feasible(*e));
    EXPECT_LE(oracle::cost(m, all, *e, 0), 17 * tau);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

// --- matroid center with outliers ---

TEST(OutlierInstance, ZeroOutliersMatchesOnePassAtDoubleRadius) {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng() % 14;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[rng() % ms.size()];
    const double tau = random_tau(rng);
    OutlierInstance<MatroidRule> outlier(m, MatroidRule(mat), tau, 0);
    MatroidCenterInstance plain(m, MatroidRule(mat), 2 * tau);
    for (std::size_t i = 0; i < n; ++i) {
      if (!outlier.aborted()) outlier.process(element(i));
      if (!plain.aborted()) plain.process(element(i));
      ASSERT_EQ(outlier.aborted(), plain.aborted());
      if (plain.aborted()) break;
      ASSERT_EQ(outlier.pivots().size(), plain.pivots().size());
      for (std::size_t j = 0; j < plain.pivots().size(); ++j) {
        EXPECT_EQ(outlier.pivots()[j].pivot, plain.pivots()[j].pivot);
        EXPECT_EQ(outlier.pivots()[j].independent_set, plain.pivots()[j].independent_set);
      }
      EXPECT_TRUE(outlier.free_points().empty());
    }
  }
}

TEST(OutlierInstance, AbortsWithoutDenseFreePoint) {
  // z = 1, r = 1: threshold 3 free points, all far apart.
  auto m = line({0.0, 100.0, 200.0});
  UniformMatroid u(3, 1);
  OutlierInstance<MatroidRule> inst(m, MatroidRule(u), 1.0, 1);
  feed(inst, 2);
  EXPECT_FALSE(inst.aborted());
  inst.process(element(2));
  EXPECT_TRUE(inst.aborted());
}

TEST(OutlierInstance, PromotionBuildsSupport) {
  auto m = line({0.0, 1.0, 3.5, 50.0});
  UniformMatroid u(4, 2);
  OutlierInstance<MatroidRule> inst(m, MatroidRule(u), 1.0, 1);
  feed(inst, 3);
  // Threshold (2 - 0 + 1) * 1 + 1 = 4 is not reached yet.
  EXPECT_TRUE(inst.pivots().empty());
  EXPECT_EQ(inst.free_points().size(), 3u);
  inst.process(element(3));
  ASSERT_EQ(inst.pivots().size(), 1u);
  const auto& p = inst.pivots()[0];
  EXPECT_EQ(p.pivot, element(0));
  EXPECT_EQ(p.support, (ElementSet{element(0), element(1)}));
  EXPECT_EQ(p.independent_set, (ElementSet{element(0), element(1)}));
  EXPECT_EQ(inst.free_points(), ElementSet{element(3)});
}

TEST(OutlierInstance, RandomStreamInvariants) {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 16;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[rng() % ms.size()];
    const std::size_t z = rng() % 4;
    const double tau = random_tau(rng) / 2;
    const std::size_t r = mat.rank_upper();
    OutlierInstance<MatroidRule> inst(m, MatroidRule(mat), tau, z);
    std::size_t processed = 0;
    for (; processed < n && !inst.aborted(); ++processed) {
      inst.process(element(processed));
      ASSERT_LE(inst.free_points().size(), (r + 1) * z + 1);
      ASSERT_LE(inst.stored_points(), r * r + (r + 1) * z + 1 + (z + 1) * r);
      const auto& pv = inst.pivots();
      for (const auto& p : pv) {
        ASSERT_TRUE(mat.is_independent(p.independent_set));
        ASSERT_GE(p.support.size(), 1u);
        ASSERT_LE(p.support.size(), z + 1);
        ASSERT_TRUE(contains(p.support, p.pivot));
        for (ElementId x : p.support) ASSERT_LE(m.distance(p.pivot, x), 2 * tau);
      }
      for (std::size_t i = 0; i < pv.size(); ++i) {
        for (std::size_t j = i + 1; j < pv.size(); ++j) {
          for (ElementId x : pv[i].support) {
            for (ElementId y : pv[j].support) ASSERT_GT(m.distance(x, y), 2 * tau);
          }
        }
      }
    }
    if (inst.aborted()) continue;
    // Forgetting radius.
    const ElementSet kept = inst.summary();
    for (std::size_t i = 0; i < n; ++i) {
      const ElementId e = element(i);
      if (contains(kept, e)) continue;
      EXPECT_LE(dist_to_set(m, e, internal::pivot_ids(inst.pivots())), 4 * tau);
    }
  }
}

TEST(OutlierInstance, PromiseGivesFifteenTau) {
  std::mt19937_64 rng(107);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    const std::size_t n = 5 + rng() % 6;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[1 + rng() % 2];
    const std::size_t z = 1 + rng() % 2;
    const ElementSet all = all_elements(n);
    const double opt = oracle::optimum(m, all, mat, z);
    if (!std::isfinite(opt) || opt == 0.0) continue;
    const double tau = opt * (1.0 + static_cast<double>(rng() % 10) / 10.0);
    OutlierInstance<MatroidRule> inst(m, MatroidRule(mat), tau, z);
    feed(inst, n);
    ASSERT_FALSE(inst.aborted()) << "trial " << trial;
    const auto centers = inst.finish_brute();
    ASSERT_TRUE(centers) << "trial " << trial;
    EXPECT_TRUE(mat.is_independent(*centers));
    EXPECT_LE(oracle::cost(m, all, *centers, z), 15 * tau);
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(OutlierInstance, PartitionEightPointExample) {
  // r = 2 partition, z = 1: two groups and one stray point.
  auto m = line({0.0, 0.5, 1.0, 20.0, 20.5, 21.0, 21.2, 90.0});
  PartitionMatroid p({0, 1, 0, 1, 0, 1, 0, 1}, {1, 1});
  const ElementSet all = all_elements(8);
  const double opt = oracle::optimum(m, all, p, 1);
  OutlierInstance<MatroidRule> inst(m, MatroidRule(p), opt, 1);
  feed(inst, 8);
  ASSERT_FALSE(inst.aborted());
  const auto centers = inst.finish_brute();
  ASSERT_TRUE(centers);
  EXPECT_LE(oracle::cost(m, all, *centers, 1), 15 * opt);
}

TEST(OutlierInstance, SeedReplaysFreePoints) {
  auto m = line({0.0, 1.0, 3.5, 50.0});
  UniformMatroid u(4, 2);
  OutlierInstance<MatroidRule> parent(m, MatroidRule(u), 1.0, 1);
  feed(parent, 3);
  OutlierInstance<MatroidRule> child(m, MatroidRule(u), 1.0, 1);
  child.seed(parent.child_seed());
  child.process(element(3));
  OutlierInstance<MatroidRule> direct(m, MatroidRule(u), 1.0, 1);
  feed(direct, 4);
  EXPECT_EQ(child.pivots(), direct.pivots());
  EXPECT_EQ(child.free_points(), direct.free_points());
}

// --- k-center with outliers ---

TEST(KCenterOutlierInstance, ZeroOutliersPromotesImmediately) {
  auto m = line({0.0, 10.0, 0.5});
  KCenterOutlierInstance inst(m, 2, 1.0, 0);
  inst.process(element(0));
  EXPECT_EQ(inst.pivots().size(), 1u);
  EXPECT_TRUE(inst.free_points().empty());
  inst.process(element(1));
  EXPECT_EQ(inst.pivots().size(), 2u);
  inst.process(element(2));
  EXPECT_EQ(inst.pivots().size(), 2u);
  EXPECT_EQ(inst.stored_points(), 2u);
}

TEST(KCenterOutlierInstance, AbortsPastK) {
  auto m = line({0.0, 10.0, 20.0});
  KCenterOutlierInstance inst(m, 2, 1.0, 0);
  feed(inst, 3);
  EXPECT_TRUE(inst.aborted());
}

TEST(KCenterOutlierInstance, FiveColinearPoints) {
  auto m = line({0.0, 1.0, 2.0, 3.0, 40.0});
  const ElementSet all = all_elements(5);
  UniformMatroid one(5, 1);
  const double opt = oracle::optimum(m, all, one, 1);
  EXPECT_EQ(opt, 2.0);
  KCenterOutlierInstance inst(m, 1, opt, 1);
  feed(inst, 5);
  ASSERT_FALSE(inst.aborted());
  const auto centers = inst.finish_brute();
  ASSERT_TRUE(centers);
  EXPECT_LE(centers->size(), 1u);
  EXPECT_LE(oracle::cost(m, all, *centers, 1), 4 * opt);
}

TEST(KCenterOutlierInstance, PromiseGivesFourTau) {
  std::mt19937_64 rng(108);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng() % 8;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    const std::size_t k = 1 + rng() % 3;
    const std::size_t z = rng() % 3;
    UniformMatroid uk(n, k);
    const ElementSet all = all_elements(n);
    const double opt = oracle::optimum(m, all, uk, z);
    if (opt == 0.0) continue;
    const double tau = opt * (1.0 + static_cast<double>(rng() % 10) / 10.0);
    KCenterOutlierInstance inst(m, k, tau, z);
    for (std::size_t i = 0; i < n && !inst.aborted(); ++i) {
      inst.process(element(i));
      ASSERT_LE(inst.free_points().size(), (k + 1) * z + 1);
      ASSERT_LE(inst.stored_points(), inst.space_bound());
    }
    ASSERT_FALSE(inst.aborted()) << "trial " << trial;
    const auto centers = inst.finish_brute();
    ASSERT_TRUE(centers);
    EXPECT_LE(centers->size(), k);
    EXPECT_LE(oracle::cost(m, all, *centers, z), 4 * tau);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

// --- two passes ---

TEST(TwoPassInstance, SingleCluster) {
  auto m = line({0.0, 0.3, 0.9, 0.6});
  UniformMatroid u(4, 1);
  TwoPassInstance inst(m, u, 1.0);
  for (std::size_t i = 0; i < 4; ++i) inst.first_pass(element(i));
  for (std::size_t i = 0; i < 4; ++i) inst.second_pass(element(i));
  const auto centers = inst.finish();
  ASSERT_TRUE(centers);
  EXPECT_EQ(centers->size(), 1u);
  EXPECT_LE(clustering_cost(m, all_elements(4), *centers), 3.0);
}

TEST(TwoPassInstance, ShortfallReturnsCertificate) {
  // Two far pivots, both points in the same part of capacity 1.
  auto m = line({0.0, 10.0});
  PartitionMatroid p({0, 0}, {1, 1});
  TwoPassInstance inst(m, p, 1.0);
  inst.first_pass(element(0));
  inst.first_pass(element(1));
  ASSERT_FALSE(inst.failed());
  inst.second_pass(element(0));
  inst.second_pass(element(1));
  EXPECT_FALSE(inst.finish());
  EXPECT_TRUE(inst.failed());
  EXPECT_EQ(inst.certificate(), (ElementSet{element(0), element(1)}));
}

TEST(TwoPassInstance, PromiseGivesThreeTau) {
  std::mt19937_64 rng(109);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    EuclideanMetric m(oracle::random_points(n, 2, rng));
    auto ms = oracle::random_matroids(n, rng);
    const Matroid& mat = *ms[rng() % ms.size()];
    const ElementSet all = all_elements(n);
    const double opt = oracle::optimum(m, all, mat);
    if (!std::isfinite(opt) || opt == 0.0) continue;
    const double tau = opt * (1.0 + static_cast<double>(rng() % 10) / 10.0);
    TwoPassInstance inst(m, mat, tau);
    for (std::size_t i = 0; i < n; ++i) inst.first_pass(element(i));
    ASSERT_FALSE(inst.failed());
    for (std::size_t i = 0; i < inst.pivots().size(); ++i) {
      for (std::size_t j = i + 1; j < inst.pivots().size(); ++j) {
        EXPECT_GT(m.distance(inst.pivots()[i].pivot, inst.pivots()[j].pivot), 2 * tau);
      }
    }
    for (std::size_t i = 0; i < n; ++i) inst.second_pass(element(i));
    ASSERT_LE(inst.stored_points(), inst.space_bound());
    const auto centers = inst.finish();
    ASSERT_TRUE(centers) << "trial " << trial;
    EXPECT_TRUE(mat.is_independent(*centers));
    EXPECT_LE(oracle::cost(m, all, *centers, 0), 3 * tau);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
