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

#include <random>

#include "mcstream.hpp"

namespace {

using namespace mcstream;

std::string error_of(const std::string& text) {
  try {
    parse_instance_text(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

constexpr const char* kTwoPoints = R"([metric]
kind = euclidean
[matroid]
kind = uniform
k = 1
[points]
a x=0,0
b x=3,4
)";

TEST(ParseInstance, MinimalEuclideanFile) {
  const Instance inst = parse_instance_text(kTwoPoints);
  ASSERT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst.points[1].id, "b");
  const auto metric = make_metric(inst);
  EXPECT_EQ(metric->distance(element(0), element(1)), 5.0);
  EXPECT_EQ(compute_stats(*metric, all_elements(2)).aspect_ratio, 1.0);
  EXPECT_EQ(make_matroid(inst)->rank_upper(), 1u);
}

TEST(ParseInstance, CommentsAndBlankLines) {
  const std::string text = std::string("# header\n\n") + kTwoPoints + "# trailing\n";
  EXPECT_EQ(parse_instance_text(text).size(), 2u);
}

TEST(ParseInstance, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_of("[metric]\nkind = sphere\n"), "line 2: unknown metric kind 'sphere'");
  EXPECT_EQ(error_of("kind = euclidean\n"), "line 1: content before the first section");
  EXPECT_EQ(error_of("[metric]\n[bogus]\n"), "line 2: unknown section [bogus]");
  EXPECT_EQ(error_of("[points]\na x=1,zz\n"), "line 2: bad number 'zz'");
  EXPECT_EQ(error_of("[points]\na x=1\na x=2\n"), "line 3: duplicate point id 'a'");
  EXPECT_EQ(error_of("[points]\na color=red\n"), "line 2: unknown point field 'color'");
  EXPECT_EQ(error_of("[matroid]\nkind = uniform\nk = -1\n"), "line 3: expected a non-negative integer, got '-1'");
}

TEST(ParseInstance, UnknownPartLabel) {
  const std::string text = "[metric]\nkind = euclidean\n[matroid]\nkind = partition\n"
                           "part = A 1\n[points]\na x=0 part=A\nb x=1 part=B\n";
  EXPECT_EQ(error_of(text), "point 'b' references unknown part 'B'");
}

TEST(ParseInstance, MatrixErrorsNameTheEntry) {
  const std::string head = "[metric]\nkind = matrix\n[matroid]\nkind = uniform\nk = 1\n"
                           "[points]\na\nb\nc\n[matrix]\n";
  EXPECT_EQ(error_of(head + "0 1 2\n1 0 1\n2 1 0\n"), "");
  EXPECT_EQ(error_of(head + "0 1 2\n1 0 1\n3 1 0\n"),
            "distance matrix is not symmetric at (0,2)");
  const std::string triangle = error_of(head + "0 1 5\n1 0 1\n5 1 0\n");
  EXPECT_NE(triangle.find("triangle"), std::string::npos) << triangle;
  EXPECT_EQ(error_of(head + "0 1 2\n1 0\n2 1 0\n"),
            "line 12: matrix row has 2 entries, expected 3");
}

TEST(ParseInstance, EveryMatroidKindLoads) {
  const std::string text = R"([metric]
kind = euclidean
[matroid]
kind = linear
modulus = 2
[points]
a x=0 vector=1,0
b x=1 vector=0,1
c x=2 vector=1,1
)";
  const auto lin = make_matroid(parse_instance_text(text));
  EXPECT_FALSE(lin->is_independent({element(0), element(1), element(2)}));
  const std::string graphic = "[metric]\nkind = euclidean\n[matroid]\nkind = graphic\n"
                              "vertices = 3\n[points]\na x=0 edge=0-1\nb x=1 edge=1-2\n"
                              "c x=2 edge=0-2\n";
  const auto g = make_matroid(parse_instance_text(graphic));
  EXPECT_EQ(rank(*g, all_elements(3)), 2u);
  const std::string sets = "[metric]\nkind = euclidean\n[matroid]\nkind = explicit\n"
                           "set = a b\nset = c\n[points]\na x=0\nb x=1\nc x=2\n";
  const auto e = make_matroid(parse_instance_text(sets));
  EXPECT_TRUE(e->is_independent({element(0), element(1)}));
  EXPECT_FALSE(e->is_independent({element(0), element(2)}));
}

TEST(EmitInstance, RandomInstancesRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomSpec spec;
    spec.n = 5 + seed;
    spec.seed = seed;
    spec.far_points = seed % 3;
    spec.matroid = seed % 2 ? "partition" : "uniform";
    if (seed % 4 == 0) spec.budget = 7.5;
    if (seed % 5 == 0) spec.z = 2;
    const Instance inst = generate_random(spec);
    const std::string text = emit_instance(inst);
    const Instance back = parse_instance_text(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(emit_instance(back), text);
  }
}

Report run_text(const std::string& text, RunConfig cfg) {
  return run(parse_instance_text(text), cfg);
}

TEST(RunReport, ByteIdenticalAcrossRuns) {
  RandomSpec spec;
  spec.n = 14;
  spec.seed = 77;
  const Instance inst = generate_random(spec);
  for (auto scheme : {GuessScheme::ladder, GuessScheme::strapped}) {
    RunConfig cfg;
    cfg.guesses = scheme;
    cfg.verify = true;
    EXPECT_EQ(report_text(run(inst, cfg)), report_text(run(inst, cfg)));
  }
}

TEST(RunReport, MatroidBruteLadderWithinBound) {
  RandomSpec spec;
  spec.n = 10;
  spec.seed = 5;
  RunConfig cfg;
  cfg.verify = true;
  const Report rep = run(generate_random(spec), cfg);
  ASSERT_TRUE(rep.feasible);
  ASSERT_TRUE(rep.ratio);
  EXPECT_LE(*rep.ratio, 7.0 + cfg.epsilon);
  EXPECT_LE(rep.peak_instance_stored, rep.instance_space_bound);
}

TEST(RunReport, KCenterOutliersWithinBound) {
  RandomSpec spec;
  spec.n = 12;
  spec.far_points = 1;
  spec.seed = 6;
  RunConfig cfg;
  cfg.mode = Mode::kcenter_outlier;
  cfg.k = 2;
  cfg.z = 1;
  cfg.verify = true;
  const Report rep = run(generate_random(spec), cfg);
  ASSERT_TRUE(rep.feasible);
  ASSERT_TRUE(rep.ratio);
  EXPECT_LE(*rep.ratio, 4.0 + cfg.epsilon);
}

TEST(RunReport, LowerBoundInstanceCostIsOne) {
  LowerBoundParams p;
  p.q = 2;
  p.bits = {true, true, true, true};
  p.index = 3;
  const Report rep = run(gen_index_instance(p).instance, RunConfig{});
  ASSERT_TRUE(rep.feasible);
  EXPECT_EQ(rep.cost, 1.0);
}

TEST(RunReport, RejectsInconsistentConfig) {
  const Instance inst = parse_instance_text(kTwoPoints);
  RunConfig cfg;
  cfg.mode = Mode::matroid_outlier;
  cfg.finisher = Finisher::efficient;
  EXPECT_THROW(run(inst, cfg), InputError);
  RunConfig passes;
  passes.mode = Mode::knapsack;
  passes.passes = 2;
  EXPECT_THROW(run(inst, passes), InputError);
}

TEST(RunReport, TrivialStreams) {
  const std::string one = "[metric]\nkind = euclidean\n[matroid]\nkind = uniform\nk = 1\n"
                          "[points]\na x=1,1\n";
  const Report rep = run_text(one, RunConfig{});
  EXPECT_TRUE(rep.feasible);
  EXPECT_EQ(rep.cost, 0.0);
  const std::string loops = "[metric]\nkind = euclidean\n[matroid]\nkind = partition\n"
                            "part = A 0\n[points]\na x=0 part=A\nb x=5 part=A\n";
  EXPECT_FALSE(run_text(loops, RunConfig{}).feasible);
}

TEST(RunReport, JsonCarriesFields) {
  RandomSpec spec;
  spec.n = 8;
  RunConfig cfg;
  cfg.verify = true;
  const auto json = to_json(run(generate_random(spec), cfg));
  for (const char* key : {"algorithm", "mode", "epsilon", "tau", "centers", "cost",
                          "exact_opt", "ratio", "space", "oracle_calls", "trace"}) {
    EXPECT_TRUE(json.contains(key)) << key;
  }
  EXPECT_FALSE(json.contains("wall_clock_ms"));
}

}  // namespace
