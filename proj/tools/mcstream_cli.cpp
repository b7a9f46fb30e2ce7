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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "mcstream.hpp"

namespace {

using namespace mcstream;

enum Exit { kOk = 0, kInfeasible = 1, kInputError = 2, kResourceCap = 3, kInternal = 4 };

struct GenerateOptions {
  std::string kind;
  // lower bound
  std::size_t q = 2;
  int bit = -1;
  std::string bits;
  std::size_t index = 1;
  double delta = 10.0;
  bool permute = false;
  // random
  RandomSpec random;
  std::uint64_t seed = 1;
};

void add_generate_options(CLI::App& cmd, GenerateOptions& g) {
  cmd.add_option("--q", g.q, "Lower bound: side size (N = q^2 bits)");
  cmd.add_option("--bit", g.bit, "Lower bound: value of the indexed bit (0 or 1)")
      ->check(CLI::Range(0, 1));
  cmd.add_option("--bits", g.bits, "Lower bound: the full bit string, e.g. 1011");
  cmd.add_option("--index", g.index, "Lower bound: 1-based index");
  cmd.add_option("--delta", g.delta, "Lower bound: distance across clusters (> 1)");
  cmd.add_flag("--permute", g.permute, "Lower bound: shuffle the stream order");
  cmd.add_option("--n", g.random.n, "Random: number of points");
  cmd.add_option("--dim", g.random.dim, "Random: dimension");
  cmd.add_option("--clusters", g.random.clusters, "Random: planted clusters");
  cmd.add_option("--spread", g.random.spread, "Random: cluster standard deviation");
  cmd.add_option("--far", g.random.far_points, "Random: far-away points");
  cmd.add_option("--matroid", g.random.matroid, "Random: partition | uniform | none");
  cmd.add_option("--parts", g.random.parts, "Random: partition parts");
  cmd.add_option("--capacity", g.random.capacity, "Random: capacity per part");
  cmd.add_option("--rank", g.random.k, "Random: rank of the uniform matroid");
}

Instance generate(GenerateOptions g, std::optional<double> budget,
                  std::optional<std::size_t> z) {
  if (g.kind == "lowerbound") {
    LowerBoundParams p;
    p.q = g.q;
    p.index = g.index;
    p.delta = g.delta;
    p.permute = g.permute;
    p.seed = g.seed;
    if (!g.bits.empty()) {
      for (char c : g.bits) {
        if (c != '0' && c != '1') throw InputError("--bits must be a 0/1 string");
        p.bits.push_back(c == '1');
      }
    } else {
      std::mt19937_64 rng(g.seed);
      for (std::size_t i = 0; i < g.q * g.q; ++i) p.bits.push_back(rng() & 1U);
    }
    if (g.bit >= 0 && p.index >= 1 && p.index <= p.bits.size()) p.bits[p.index - 1] = g.bit == 1;
    return gen_index_instance(p).instance;
  }
  if (g.kind == "random") {
    g.random.seed = g.seed;
    g.random.budget = budget;
    g.random.z = z;
    return generate_random(g.random);
  }
  throw InputError("unknown generator '" + g.kind + "' (random | lowerbound)");
}

Mode parse_mode(const std::string& s) {
  static const std::map<std::string, Mode> modes = {
      {"matroid", Mode::matroid},
      {"knapsack", Mode::knapsack},
      {"matroid-outlier", Mode::matroid_outlier},
      {"knapsack-outlier", Mode::knapsack_outlier},
      {"kcenter-outlier", Mode::kcenter_outlier}};
  auto it = modes.find(s);
  if (it == modes.end()) throw InputError("unknown mode '" + s + "'");
  return it->second;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming matroid, knapsack and outlier center summaries"};
  app.require_subcommand(1);

  std::string mode = "matroid", finisher = "brute", guesses = "ladder", report_path;
  std::string input, output, order = "ascending";
  RunConfig cfg;
  std::optional<std::size_t> z, k;
  std::optional<double> budget;
  GenerateOptions gen;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--epsilon", cfg.epsilon, "Accuracy parameter in (0, 1]");
    cmd->add_option("--mode", mode,
                    "matroid | knapsack | matroid-outlier | knapsack-outlier | kcenter-outlier");
    cmd->add_option("--z", z, "Number of outliers");
    cmd->add_option("-k", k, "Number of centers (kcenter-outlier)");
    cmd->add_option("--budget", budget, "Knapsack budget");
    cmd->add_option("--opt-cap", cfg.opt_cap, "Largest instance for exact optimum search");
    cmd->add_option("--seed", gen.seed, "Seed for generated instances");
  };

  auto* run_cmd = app.add_subcommand("run", "Run a streaming algorithm on an instance");
  run_cmd->add_option("instance", input, "Instance file");
  add_run_options(run_cmd);
  run_cmd->add_option("--finisher", finisher, "brute | efficient");
  run_cmd->add_option("--guesses", guesses, "ladder | strapped");
  run_cmd->add_option("--passes", cfg.passes, "1 or 2 (two passes: matroid mode)");
  run_cmd->add_flag("--verify", cfg.verify, "Also compute the exact optimum and ratio");
  run_cmd->add_option("--report", report_path, "Write the report here instead of stdout");
  run_cmd->add_option("--cap", cfg.brute_cap, "Largest candidate set for brute-force finishers");
  run_cmd->add_option("--finish-order", order, "ascending | bisect (ladder finishing)");
  run_cmd->add_flag("--timing", cfg.timing, "Include wall-clock time in the report");
  run_cmd->add_option("--generate", gen.kind, "Run on a generated instance: random | lowerbound");
  add_generate_options(*run_cmd, gen);

  auto* gen_cmd = app.add_subcommand("generate", "Write a generated instance file");
  gen_cmd->add_option("kind", gen.kind, "random | lowerbound")->required();
  gen_cmd->add_option("--out", output, "Output path (default stdout)");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--z", z, "Number of outliers to record");
  gen_cmd->add_option("--budget", budget, "Knapsack budget (adds weights)");
  add_generate_options(*gen_cmd, gen);

  auto* verify_cmd = app.add_subcommand("verify", "Exact optimum by enumeration");
  verify_cmd->add_option("instance", input, "Instance file")->required();
  add_run_options(verify_cmd);

  std::string second;
  auto* inter_cmd = app.add_subcommand("intersect", "Largest common independent set of two matroids");
  inter_cmd->add_option("first", input, "Instance whose matroid is the first")->required();
  inter_cmd->add_option("second", second, "Instance whose matroid is the second")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen_cmd) {
      write_text(output, emit_instance(generate(gen, budget, z)));
      return kOk;
    }
    if (*inter_cmd) {
      const Instance a = parse_instance_file(input);
      const Instance b = parse_instance_file(second);
      if (a.size() != b.size()) throw InputError("instances differ in size");
      const MatroidPtr m1 = make_matroid(a);
      const MatroidPtr m2 = make_matroid(b);
      if (!m1 || !m2) throw InputError("both instances need a [matroid] section");
      const ElementSet common = matroid_intersection({all_elements(a.size()), m1.get(), m2.get()});
      nlohmann::ordered_json j;
      j["size"] = common.size();
      nlohmann::ordered_json ids = nlohmann::ordered_json::array();
      for (ElementId e : common) ids.push_back(a.points[index_of(e)].id);
      j["elements"] = ids;
      std::cout << j.dump(2) << "\n";
      return kOk;
    }

    cfg.mode = parse_mode(mode);
    cfg.z = z;
    cfg.k = k;
    cfg.budget = budget;
    Instance inst;
    if (!gen.kind.empty()) {
      inst = generate(gen, budget, z);
      cfg.budget.reset();
    } else {
      if (input.empty()) throw InputError("an instance file or --generate is required");
      inst = parse_instance_file(input);
    }

    if (*verify_cmd) {
      cfg.verify = true;
      cfg.passes = 1;
      const MetricPtr metric = make_metric(inst);
      const ElementSet points = all_elements(inst.size());
      std::size_t outliers = 0;
      if (is_outlier_mode(cfg.mode)) {
        const auto zz = cfg.z ? cfg.z : inst.z;
        if (!zz) throw InputError("outlier modes need z");
        outliers = *zz;
      }
      ExactOptimum best;
      if (is_knapsack_mode(cfg.mode)) {
        const auto knapsack = make_knapsack(inst, cfg.budget);
        if (!knapsack) throw InputError("knapsack modes need a budget");
        best = exact_opt(*metric, points, *knapsack, outliers, cfg.opt_cap);
      } else if (cfg.mode == Mode::kcenter_outlier) {
        if (!cfg.k) throw InputError("kcenter-outlier mode needs -k");
        best = exact_opt(*metric, points, UniformMatroid(inst.size(), *cfg.k), outliers, cfg.opt_cap);
      } else {
        const MatroidPtr matroid = make_matroid(inst);
        if (!matroid) throw InputError("matroid modes need a [matroid] section");
        best = exact_opt(*metric, points, *matroid, outliers, cfg.opt_cap);
      }
      nlohmann::ordered_json j;
      j["mode"] = to_string(cfg.mode);
      j["z"] = outliers;
      j["feasible"] = std::isfinite(best.cost);
      j["exact_opt"] = std::isfinite(best.cost) ? nlohmann::ordered_json(best.cost)
                                                : nlohmann::ordered_json(nullptr);
      nlohmann::ordered_json ids = nlohmann::ordered_json::array();
      for (ElementId e : best.witness) ids.push_back(inst.points[index_of(e)].id);
      j["witness"] = ids;
      std::cout << j.dump(2) << "\n";
      return std::isfinite(best.cost) ? kOk : kInfeasible;
    }

    if (finisher != "brute" && finisher != "efficient") throw InputError("unknown finisher '" + finisher + "'");
    if (guesses != "ladder" && guesses != "strapped") throw InputError("unknown guess scheme '" + guesses + "'");
    if (order != "ascending" && order != "bisect") throw InputError("unknown finish order '" + order + "'");
    cfg.finisher = finisher == "brute" ? Finisher::brute : Finisher::efficient;
    cfg.guesses = guesses == "ladder" ? GuessScheme::ladder : GuessScheme::strapped;
    cfg.finish_order = order == "ascending" ? FinishOrder::ascending : FinishOrder::bisect;
    const Report rep = run(inst, cfg);
    write_text(report_path, report_text(rep));
    return rep.feasible ? kOk : kInfeasible;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const UnknownElementError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kResourceCap;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
