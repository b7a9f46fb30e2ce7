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

#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcstream/constraint.hpp"
#include "mcstream/counting.hpp"
#include "mcstream/guesses.hpp"
#include "mcstream/instance.hpp"
#include "mcstream/offline.hpp"
#include "mcstream/streaming.hpp"

namespace mcstream {

enum class Mode { matroid, knapsack, matroid_outlier, knapsack_outlier, kcenter_outlier };
enum class Finisher { brute, efficient };
enum class GuessScheme { ladder, strapped };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::matroid: return "matroid";
    case Mode::knapsack: return "knapsack";
    case Mode::matroid_outlier: return "matroid-outlier";
    case Mode::knapsack_outlier: return "knapsack-outlier";
    case Mode::kcenter_outlier: return "kcenter-outlier";
  }
  return "unknown";
}
inline const char* to_string(Finisher f) {
  return f == Finisher::brute ? "brute" : "efficient";
}
inline const char* to_string(GuessScheme g) {
  return g == GuessScheme::ladder ? "ladder" : "strapped";
}

inline bool is_outlier_mode(Mode m) {
  return m == Mode::matroid_outlier || m == Mode::knapsack_outlier ||
         m == Mode::kcenter_outlier;
}
inline bool is_knapsack_mode(Mode m) {
  return m == Mode::knapsack || m == Mode::knapsack_outlier;
}

struct RunConfig {
  Mode mode = Mode::matroid;
  Finisher finisher = Finisher::brute;
  GuessScheme guesses = GuessScheme::ladder;
  int passes = 1;
  double epsilon = 0.1;
  std::optional<std::size_t> z;       // overrides the instance's [outliers]
  std::optional<std::size_t> k;       // kcenter-outlier only
  std::optional<double> budget;       // overrides the instance's [knapsack]
  bool verify = false;
  std::size_t brute_cap = kDefaultBruteCap;
  std::size_t opt_cap = kDefaultExactCap;
  FinishOrder finish_order = FinishOrder::ascending;
  bool timing = false;
};

struct Report {
  std::string algorithm;
  RunConfig config;
  std::size_t n = 0;
  std::size_t rank_bound = 0;
  std::size_t z = 0;
  std::optional<double> budget;
  bool feasible = false;
  std::string note;
  double tau = 0.0;
  ElementSet centers;
  std::vector<std::string> center_ids;
  double cost = 0.0;
  std::optional<double> guarantee_factor;  // certified cost <= factor * tau
  std::optional<double> exact_opt;
  ElementSet opt_witness;
  std::optional<double> ratio;
  std::size_t peak_instance_stored = 0;
  std::size_t peak_total_stored = 0;
  std::size_t instance_space_bound = 0;
  std::size_t active_guess_bound = 0;
  OracleCounters calls;
  GuessTrace trace;
  std::optional<double> wall_ms;
};

namespace internal {

// Ratio between the user's epsilon and the guess step that keeps the end
// factor within epsilon: cost <= f * tau and tau <= (1 + eps / f) OPT.
inline double ladder_divisor(Mode mode, int passes) {
  if (passes == 2) return 3.0;
  switch (mode) {
    case Mode::matroid:
    case Mode::knapsack: return 17.0;
    case Mode::kcenter_outlier: return 4.0;
    case Mode::matroid_outlier:
    case Mode::knapsack_outlier: return 50.0;
  }
  return 17.0;
}

inline void check_certified(double cost, std::optional<double> factor, double tau) {
  if (factor && cost > *factor * tau * (1.0 + 1e-12)) {
    throw InvariantError("certified cost bound violated");
  }
}

struct Oracles {
  MetricPtr metric;           // counted
  MetricPtr raw_metric;
  MatroidPtr matroid;         // counted; uniform(k) in kcenter mode
  MatroidPtr raw_matroid;
  std::optional<Knapsack> knapsack;
};

template <class Rule>
Rule make_rule(const Oracles& o) {
  if constexpr (std::is_same_v<Rule, KnapsackRule>) {
    return KnapsackRule(*o.knapsack);
  } else {
    return MatroidRule(*o.matroid);
  }
}

}  // namespace internal

inline Report run(const Instance& inst, const RunConfig& cfg) {
  using internal::Oracles;
  const auto started = std::chrono::steady_clock::now();
  Report rep;
  rep.config = cfg;
  rep.n = inst.size();
  const Mode mode = cfg.mode;

  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (cfg.passes != 1 && cfg.passes != 2) throw InputError("passes must be 1 or 2");
  if (cfg.passes == 2 && mode != Mode::matroid) {
    throw InputError("two passes are only available in matroid mode");
  }
  if (is_outlier_mode(mode) && cfg.finisher == Finisher::efficient) {
    throw InputError("outlier modes only support the brute finisher");
  }
  if (!is_knapsack_mode(mode) && cfg.budget) {
    throw InputError("--budget only applies to knapsack modes");
  }
  if (mode != Mode::kcenter_outlier && cfg.k) {
    throw InputError("-k only applies to kcenter-outlier mode");
  }
  rep.algorithm = cfg.passes == 2 ? "two-pass" : "one-pass";
  if (is_outlier_mode(mode)) {
    const auto z = cfg.z ? cfg.z : inst.z;
    if (!z) throw InputError("outlier modes need z (--z or [outliers])");
    rep.z = *z;
  }

  OracleCounters& calls = rep.calls;
  Oracles o;
  o.raw_metric = make_metric(inst);
  o.metric = std::make_shared<CountingMetric>(o.raw_metric, calls);
  if (mode == Mode::kcenter_outlier) {
    if (!cfg.k || *cfg.k == 0) throw InputError("kcenter-outlier mode needs -k >= 1");
    o.raw_matroid = std::make_shared<UniformMatroid>(inst.size(), *cfg.k);
  } else if (!is_knapsack_mode(mode)) {
    o.raw_matroid = make_matroid(inst);
    if (!o.raw_matroid) throw InputError("matroid modes need a [matroid] section");
  } else {
    o.knapsack = make_knapsack(inst, cfg.budget);
    if (!o.knapsack) throw InputError("knapsack modes need a budget");
    rep.budget = o.knapsack->budget();
  }
  if (o.raw_matroid) o.matroid = std::make_shared<CountingMatroid>(o.raw_matroid, calls);
  rep.rank_bound = o.knapsack ? o.knapsack->largest_feasible_size() : o.matroid->rank_upper();

  const std::size_t r = rep.rank_bound;
  const std::size_t z = rep.z;
  const double eps = cfg.epsilon;
  const bool strapped = cfg.guesses == GuessScheme::strapped;
  const Metric& metric = *o.metric;
  const ElementSet stream = all_elements(inst.size());
  auto feasible = [&](std::span<const ElementId> s) {
    return o.knapsack ? o.knapsack->feasible(s) : o.matroid->is_independent(s);
  };

  switch (mode) {
    case Mode::matroid: rep.instance_space_bound = r * r + r; break;
    case Mode::knapsack: rep.instance_space_bound = 2 * r; break;
    case Mode::matroid_outlier:
      rep.instance_space_bound = r * r + (r + 1) * z + 1 + (z + 1) * r;
      break;
    case Mode::knapsack_outlier:
      rep.instance_space_bound = r + (r + 1) * z + 1 + (z + 1) * r;
      break;
    case Mode::kcenter_outlier:
      rep.instance_space_bound = (r + 1) * z + 1 + (z + 1) * r;
      break;
  }

  auto finalize = [&](Report& out) {
    for (ElementId c : out.centers) out.center_ids.push_back(inst.points[index_of(c)].id);
    if (cfg.verify) {
      const ElementSet points = all_elements(inst.size());
      ExactOptimum best;
      if (o.knapsack) {
        best = exact_opt(*o.raw_metric, points, *o.knapsack, z, cfg.opt_cap);
      } else {
        best = exact_opt(*o.raw_metric, points, *o.raw_matroid, z, cfg.opt_cap);
      }
      out.exact_opt = best.cost;
      out.opt_witness = best.witness;
      if (out.feasible && best.cost > 0.0 && std::isfinite(best.cost)) {
        out.ratio = out.cost / best.cost;
      }
    }
    if (cfg.timing) {
      out.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    }
    return out;
  };

  // Without two distinct points every feasible singleton costs nothing.
  bool degenerate = true;
  for (std::size_t i = 1; i < stream.size() && degenerate; ++i) {
    degenerate = o.raw_metric->distance(stream.front(), stream[i]) == 0.0;
  }
  if (degenerate) {
    rep.note = "fewer than two distinct points";
    if (stream.size() <= z) {
      rep.feasible = true;
    } else {
      for (ElementId e : stream) {
        const ElementId single[] = {e};
        if (feasible(single)) {
          rep.centers = {e};
          rep.feasible = true;
          break;
        }
      }
    }
    if (!rep.feasible) rep.note = "no feasible center";
    return finalize(rep);
  }
  if (r == 0 && !is_outlier_mode(mode)) {
    rep.note = "no feasible center";
    return finalize(rep);
  }

  const MetricStats stats = compute_stats(*o.raw_metric, stream);
  const double delta = *first_distinct_distance(*o.raw_metric, stream);
  const std::vector<double> taus =
      ladder_taus(delta, stats.aspect_ratio, eps / internal::ladder_divisor(mode, cfg.passes));
  const double radius_factor = is_outlier_mode(mode) ? 4.0 : 2.0;
  StrapConfig strap;
  strap.epsilon = eps;
  strap.alpha = radius_factor + eps;
  if (strapped) {
    strap.base = *strap_base(*o.raw_metric, stream,
                             r + (is_outlier_mode(mode) ? z : 0) + 1);
  }
  const std::size_t beta = strap_beta(eps, strap.alpha);

  GuessOutcome outcome;
  std::optional<double> factor;

  auto drive = [&](auto make, auto finish) {
    using Inst = decltype(make(1.0));
    if (!strapped) {
      rep.active_guess_bound = taus.size();
      return run_ladder<Inst>(stream, taus, make, finish, cfg.finish_order);
    }
    rep.active_guess_bound = beta + 1;
    return run_strapped<Inst>(stream, strap, make, finish).outcome;
  };

  auto one_pass = [&](auto rule_tag) {
    using Rule = decltype(rule_tag);
    const double slack = strapped ? 5.0 + 2.0 * eps : 5.0;
    auto make = [&](double tau) {
      return OnePassInstance<Rule>(metric, internal::make_rule<Rule>(o), tau);
    };
    if (cfg.finisher == Finisher::brute) {
      factor = strapped ? 7.0 + 3.0 * eps : 7.0;
      return drive(make, [&](OnePassInstance<Rule>& i) { return i.finish_brute(slack, cfg.brute_cap); });
    }
    factor = strapped ? 17.0 + 7.0 * eps : 17.0;
    return drive(make, [&](OnePassInstance<Rule>& i) { return i.finish_efficient(slack); });
  };

  auto outliers = [&](auto rule_tag) {
    using Rule = decltype(rule_tag);
    const double pivot_slack = strapped ? 11.0 + 2.0 * eps : 11.0;
    const double free_slack = strapped ? 9.0 + 2.0 * eps : 9.0;
    if (!strapped) factor = 15.0;
    auto make = [&](double tau) {
      return OutlierInstance<Rule>(metric, internal::make_rule<Rule>(o), tau, z);
    };
    return drive(make, [&](OutlierInstance<Rule>& i) {
      return i.finish_brute(pivot_slack, free_slack, cfg.brute_cap);
    });
  };

  if (cfg.passes == 2) {
    factor = strapped ? 3.0 + eps : 3.0;
    if (strapped) {
      rep.active_guess_bound = 2 * (beta + 1);
      outcome = run_two_pass_strapped(metric, *o.matroid, stream, strap);
    } else {
      rep.active_guess_bound = taus.size();
      outcome = run_two_pass_ladder(metric, *o.matroid, stream, taus);
    }
  } else {
    switch (mode) {
      case Mode::matroid: outcome = one_pass(MatroidRule(*o.matroid)); break;
      case Mode::knapsack: outcome = one_pass(KnapsackRule(*o.knapsack)); break;
      case Mode::matroid_outlier: outcome = outliers(MatroidRule(*o.matroid)); break;
      case Mode::knapsack_outlier: outcome = outliers(KnapsackRule(*o.knapsack)); break;
      case Mode::kcenter_outlier: {
        if (!strapped) factor = 4.0;
        const std::size_t k = *cfg.k;
        auto make = [&](double tau) { return KCenterOutlierInstance(metric, k, tau, z); };
        outcome = drive(make, [&](KCenterOutlierInstance& i) { return i.finish_brute(cfg.brute_cap); });
        break;
      }
    }
  }

  rep.trace = std::move(outcome.trace);
  rep.peak_instance_stored = outcome.peak_instance_stored;
  rep.peak_total_stored = outcome.peak_total_stored;
  if (!outcome.centers) {
    rep.note = "every guess aborted";
    return finalize(rep);
  }
  rep.feasible = true;
  rep.tau = outcome.tau;
  rep.centers = std::move(*outcome.centers);
  std::sort(rep.centers.begin(), rep.centers.end());
  rep.cost = clustering_cost(*o.raw_metric, stream, rep.centers, z);
  rep.guarantee_factor = factor;
  internal::check_certified(rep.cost, factor, rep.tau);
  return finalize(rep);
}

inline nlohmann::ordered_json to_json(const Report& rep) {
  using nlohmann::ordered_json;
  auto number_or_null = [](std::optional<double> v) -> ordered_json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  const RunConfig& c = rep.config;
  ordered_json j;
  j["algorithm"] = rep.algorithm;
  j["mode"] = to_string(c.mode);
  j["finisher"] = c.passes == 2 ? "intersection" : to_string(c.finisher);
  j["guesses"] = to_string(c.guesses);
  j["passes"] = c.passes;
  j["epsilon"] = c.epsilon;
  j["z"] = rep.z;
  j["k"] = c.k ? ordered_json(*c.k) : ordered_json(nullptr);
  j["budget"] = number_or_null(rep.budget);
  j["n"] = rep.n;
  j["rank_bound"] = rep.rank_bound;
  j["status"] = rep.feasible ? "ok" : "infeasible";
  j["note"] = rep.note;
  j["tau"] = rep.tau;
  j["centers"] = rep.center_ids;
  ordered_json idx = ordered_json::array();
  for (ElementId e : rep.centers) idx.push_back(index_of(e));
  j["center_indices"] = idx;
  j["cost"] = rep.feasible ? number_or_null(rep.cost) : ordered_json(nullptr);
  j["guarantee"] = {{"factor", number_or_null(rep.guarantee_factor)},
                    {"certified", rep.guarantee_factor.has_value()},
                    {"bound", rep.guarantee_factor ? number_or_null(*rep.guarantee_factor * rep.tau)
                                                   : ordered_json(nullptr)}};
  if (rep.exact_opt) {
    ordered_json w = ordered_json::array();
    for (ElementId e : rep.opt_witness) w.push_back(index_of(e));
    j["exact_opt"] = {{"cost", number_or_null(rep.exact_opt)}, {"witness", w}};
    j["ratio"] = number_or_null(rep.ratio);
  } else {
    j["exact_opt"] = nullptr;
    j["ratio"] = nullptr;
  }
  j["space"] = {{"peak_instance_stored", rep.peak_instance_stored},
                {"peak_total_stored", rep.peak_total_stored},
                {"instance_bound", rep.instance_space_bound},
                {"max_active_guesses", rep.trace.max_active},
                {"active_guess_bound", rep.active_guess_bound}};
  j["oracle_calls"] = {{"distance", rep.calls.distance_calls},
                       {"independence", rep.calls.independence_calls}};
  ordered_json events = ordered_json::array();
  for (const auto& ev : rep.trace.events) {
    events.push_back({ev.step, ev.slot, ev.tau, to_string(ev.kind)});
  }
  j["trace"] = {{"guesses_created", rep.trace.guesses_created}, {"events", events}};
  if (rep.wall_ms) j["wall_clock_ms"] = *rep.wall_ms;
  return j;
}

inline std::string report_text(const Report& rep) { return to_json(rep).dump(2) + "\n"; }

// Seeded Euclidean instances with planted clusters, a few far-away points,
// and a partition (or uniform) matroid.
struct RandomSpec {
  std::size_t n = 20;
  std::size_t dim = 2;
  std::size_t clusters = 3;
  double spread = 1.0;
  double box = 100.0;
  std::size_t far_points = 0;
  std::string matroid = "partition";  // or "uniform"
  std::size_t parts = 2;
  std::size_t capacity = 1;
  std::size_t k = 2;
  std::optional<double> budget;
  std::optional<std::size_t> z;
  std::uint64_t seed = 1;
};

inline Instance generate_random(const RandomSpec& spec) {
  if (spec.n == 0 || spec.dim == 0 || spec.clusters == 0) {
    throw InputError("random instance needs n, dim, clusters >= 1");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> in_box(0.0, spec.box);
  std::normal_distribution<double> noise(0.0, spec.spread);
  std::uniform_int_distribution<std::size_t> pick_part(0, spec.parts == 0 ? 0 : spec.parts - 1);
  std::uniform_int_distribution<int> pick_weight(1, 10);

  std::vector<std::vector<double>> centers(spec.clusters, std::vector<double>(spec.dim));
  for (auto& c : centers) {
    for (double& x : c) x = in_box(rng);
  }
  Instance inst;
  inst.metric = MetricKind::euclidean;
  if (spec.matroid == "uniform") {
    inst.matroid.kind = MatroidKind::uniform;
    inst.matroid.k = spec.k;
  } else if (spec.matroid == "partition") {
    if (spec.parts == 0) throw InputError("partition matroid needs parts >= 1");
    inst.matroid.kind = MatroidKind::partition;
    for (std::size_t p = 0; p < spec.parts; ++p) {
      inst.matroid.parts.emplace_back("P" + std::to_string(p), spec.capacity);
    }
  } else if (spec.matroid != "none") {
    throw InputError("unknown random matroid '" + spec.matroid + "'");
  }
  inst.budget = spec.budget;
  inst.z = spec.z;
  for (std::size_t i = 0; i < spec.n; ++i) {
    PointRecord p;
    p.id = "e" + std::to_string(i);
    if (i < spec.n - std::min(spec.far_points, spec.n)) {
      const auto& c = centers[i % spec.clusters];
      for (double x : c) p.coords.push_back(x + noise(rng));
    } else {
      for (std::size_t d = 0; d < spec.dim; ++d) p.coords.push_back(10.0 * in_box(rng));
    }
    if (inst.matroid.kind == MatroidKind::partition) {
      p.part = "P" + std::to_string(pick_part(rng));
    }
    if (spec.budget) p.weight = pick_weight(rng);
    inst.points.push_back(std::move(p));
  }
  return inst;
}

}  // namespace mcstream
