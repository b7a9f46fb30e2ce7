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
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcstream/element.hpp"
#include "mcstream/metric.hpp"
#include "mcstream/streaming.hpp"

namespace mcstream {

enum class GuessEventKind { spawned, aborted, replaced, finish_failed, finished };

inline const char* to_string(GuessEventKind kind) {
  switch (kind) {
    case GuessEventKind::spawned: return "spawned";
    case GuessEventKind::aborted: return "aborted";
    case GuessEventKind::replaced: return "replaced";
    case GuessEventKind::finish_failed: return "finish_failed";
    case GuessEventKind::finished: return "finished";
  }
  return "unknown";
}

// `step` is the stream position being processed, or the stream length for
// events after the stream ended. `slot` names the guess (ladder index or
// strapped slot).
struct GuessEvent {
  std::size_t step = 0;
  std::size_t slot = 0;
  double tau = 0.0;
  GuessEventKind kind = GuessEventKind::spawned;
};

struct GuessTrace {
  std::vector<GuessEvent> events;
  std::size_t guesses_created = 0;
  std::size_t max_active = 0;

  void add(std::size_t step, std::size_t slot, double tau, GuessEventKind kind) {
    events.push_back({step, slot, tau, kind});
  }
};

struct GuessOutcome {
  std::optional<ElementSet> centers;
  double tau = 0.0;
  GuessTrace trace;
  // Largest summary held by a single guess, and largest total over all live
  // guesses at one stream position.
  std::size_t peak_instance_stored = 0;
  std::size_t peak_total_stored = 0;
};

enum class FinishOrder {
  ascending,  // try every surviving guess from the smallest up
  bisect,     // binary search for a success whose predecessor fails
};

// Distance between the first two distinct points of the stream, if any.
inline std::optional<double> first_distinct_distance(const Metric& metric,
                                                     const ElementSet& stream) {
  if (stream.empty()) return std::nullopt;
  for (std::size_t i = 1; i < stream.size(); ++i) {
    const double d = metric.distance(stream.front(), stream[i]);
    if (d > 0.0) return d;
  }
  return std::nullopt;
}

// Geometric guesses from delta / aspect up to delta * aspect with ratio
// 1 + step.
inline std::vector<double> ladder_taus(double delta, double aspect, double step) {
  if (!(delta > 0.0) || !(aspect >= 1.0) || !(step > 0.0)) {
    throw PreconditionError("ladder needs delta > 0, aspect >= 1, step > 0");
  }
  const double count = std::ceil(std::log(aspect * aspect) / std::log1p(step));
  const auto m = static_cast<std::size_t>(std::max(0.0, count));
  std::vector<double> taus;
  taus.reserve(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    taus.push_back(delta / aspect * std::pow(1.0 + step, static_cast<double>(i)));
  }
  return taus;
}

// Number of ratio-(1 + eps) steps from a base guess to alpha / eps times it.
inline std::size_t strap_beta(double epsilon, double alpha) {
  if (!(epsilon > 0.0) || !(alpha > epsilon)) {
    throw PreconditionError("strapping needs eps > 0 and alpha > eps");
  }
  return static_cast<std::size_t>(
      std::ceil(std::log(alpha / epsilon) / std::log1p(epsilon)));
}

// Half the smallest positive distance among the first `prefix` points (more
// if those are all identical). Any `prefix` points contain two that share an
// optimal center, so with prefix = r + 1 this never exceeds the optimum.
inline std::optional<double> strap_base(const Metric& metric,
                                        const ElementSet& stream,
                                        std::size_t prefix) {
  double best = kInfinity;
  for (std::size_t j = 1; j < stream.size(); ++j) {
    if (j >= prefix && best < kInfinity) break;
    for (std::size_t i = 0; i < j; ++i) {
      const double d = metric.distance(stream[i], stream[j]);
      if (d > 0.0) best = std::min(best, d);
    }
  }
  if (best == kInfinity) return std::nullopt;
  return best / 2.0;
}

namespace internal {

template <class Instance>
std::size_t total_stored(const std::vector<Instance>& instances,
                         const std::vector<bool>& live) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (live[i]) total += instances[i].stored_points();
  }
  return total;
}

}  // namespace internal

// Runs one instance per guess over the stream in lockstep, then finishes the
// surviving guesses. `make(tau)` builds an instance; `finish(instance)`
// returns centers or nullopt (and may mark the instance aborted).
template <class Instance, class Make, class Finish>
GuessOutcome run_ladder(const ElementSet& stream, const std::vector<double>& taus,
                        Make make, Finish finish,
                        FinishOrder order = FinishOrder::ascending) {
  GuessOutcome out;
  std::vector<Instance> instances;
  instances.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    instances.push_back(make(taus[i]));
  }
  out.trace.guesses_created = taus.size();
  out.trace.max_active = taus.size();
  std::vector<bool> live(taus.size(), true);

  for (std::size_t s = 0; s < stream.size(); ++s) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (!live[i]) continue;
      instances[i].process(stream[s]);
      if (instances[i].aborted()) {
        live[i] = false;
        out.trace.add(s, i, taus[i], GuessEventKind::aborted);
      }
    }
    out.peak_total_stored =
        std::max(out.peak_total_stored, internal::total_stored(instances, live));
  }
  for (const auto& inst : instances) {
    out.peak_instance_stored = std::max(out.peak_instance_stored, inst.peak_stored());
  }

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (live[i]) survivors.push_back(i);
  }
  const std::size_t end = stream.size();
  auto attempt = [&](std::size_t i) {
    auto centers = finish(instances[i]);
    out.trace.add(end, i, taus[i],
                  centers ? GuessEventKind::finished : GuessEventKind::finish_failed);
    return centers;
  };
  auto accept = [&](std::size_t i, ElementSet centers) {
    out.centers = std::move(centers);
    out.tau = taus[i];
  };

  if (order == FinishOrder::bisect && !survivors.empty()) {
    // Invariant: survivors[hi] succeeded, everything at or below lo failed.
    std::size_t hi = survivors.size() - 1;
    if (auto top = attempt(survivors[hi])) {
      ElementSet best = std::move(*top);
      std::ptrdiff_t lo = -1;
      while (static_cast<std::ptrdiff_t>(hi) - lo > 1) {
        const std::size_t mid = static_cast<std::size_t>(lo + (static_cast<std::ptrdiff_t>(hi) - lo) / 2);
        if (auto found = attempt(survivors[mid])) {
          hi = mid;
          best = std::move(*found);
        } else {
          lo = static_cast<std::ptrdiff_t>(mid);
        }
      }
      accept(survivors[hi], std::move(best));
      return out;
    }
    survivors.pop_back();
  }
  for (std::size_t i : survivors) {
    if (auto centers = attempt(i)) {
      accept(i, std::move(*centers));
      break;
    }
  }
  return out;
}

// One link of a strapped slot's history: the guess exponent (tau = base *
// (1 + eps)^exponent) and the stream position where its live input began.
struct Generation {
  std::size_t exponent = 0;
  double tau = 0.0;
  std::size_t live_start = 0;
};

template <class Instance>
struct StrapSlot {
  Instance instance;
  std::vector<Generation> lineage;
};

struct StrapConfig {
  double epsilon = 0.1;
  double alpha = 2.1;  // forgotten-point radius factor plus epsilon
  double base = 1.0;   // smallest original guess
  std::size_t max_generations = 256;
  std::size_t final_generations = 64;
};

template <class Instance>
struct StrappedRun {
  std::vector<StrapSlot<Instance>> slots;
  std::size_t beta = 0;
  GuessOutcome outcome;
  std::optional<std::size_t> winner;  // slot that produced the centers
};

// Stream-strapping over a fixed band of beta + 1 guesses. When a guess aborts
// on a point, it and every smaller live guess are replaced by children whose
// guess is (1 + eps)^beta times larger and which start from the parent's
// summary.
template <class Instance, class Make>
class Strapper {
 public:
  Strapper(const StrapConfig& config, Make make)
      : config_(config), make_(std::move(make)) {
    run_.beta = strap_beta(config.epsilon, config.alpha);
    for (std::size_t i = 0; i <= run_.beta; ++i) {
      const double tau = tau_of(i);
      run_.slots.push_back({make_(tau), {{i, tau, 0}}});
      trace().add(0, i, tau, GuessEventKind::spawned);
    }
    trace().guesses_created = run_.slots.size();
    trace().max_active = run_.slots.size();
  }

  double tau_of(std::size_t exponent) const {
    return config_.base *
           std::pow(1.0 + config_.epsilon, static_cast<double>(exponent));
  }
  std::size_t beta() const { return run_.beta; }

  void process(std::size_t step, ElementId e) {
    for (auto& slot : run_.slots) slot.instance.process(e);
    settle(step, step + 1);
    note_storage();
  }

  // Finishes live guesses from the smallest up. When all fail, every guess is
  // replaced by a child and the attempt repeats.
  template <class Finish>
  StrappedRun<Instance> finish(std::size_t stream_length, Finish finish_fn) {
    for (std::size_t round = 0; round <= config_.final_generations; ++round) {
      for (std::size_t i : order()) {
        auto& slot = run_.slots[i];
        auto centers = finish_fn(slot.instance);
        trace().add(stream_length, i, slot.lineage.back().tau,
                    centers ? GuessEventKind::finished
                            : GuessEventKind::finish_failed);
        if (centers) {
          run_.outcome.centers = std::move(centers);
          run_.outcome.tau = slot.lineage.back().tau;
          run_.winner = i;
          return take();
        }
      }
      for (std::size_t i : order()) replace(i, stream_length, stream_length);
      note_storage();
    }
    return take();
  }

  StrappedRun<Instance> take() {
    for (const auto& slot : run_.slots) {
      note_peak(slot.instance);
    }
    return std::move(run_);
  }

  const std::vector<StrapSlot<Instance>>& slots() const { return run_.slots; }
  Instance child_of(std::size_t i) const {
    const auto& slot = run_.slots[i];
    Instance child = make_(tau_of(slot.lineage.back().exponent + run_.beta));
    child.seed(slot.instance.child_seed());
    return child;
  }

 private:
  GuessTrace& trace() { return run_.outcome.trace; }

  // Slot indices by increasing guess, creation order breaking ties.
  std::vector<std::size_t> order() const {
    std::vector<std::size_t> idx(run_.slots.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return run_.slots[a].lineage.back().exponent <
             run_.slots[b].lineage.back().exponent;
    });
    return idx;
  }

  void settle(std::size_t step, std::size_t next_live) {
    for (;;) {
      std::optional<std::size_t> top;
      for (std::size_t i = 0; i < run_.slots.size(); ++i) {
        const auto& slot = run_.slots[i];
        if (!slot.instance.aborted()) continue;
        const std::size_t x = slot.lineage.back().exponent;
        if (!top || x > *top) top = x;
      }
      if (!top) return;
      for (std::size_t i : order()) {
        auto& slot = run_.slots[i];
        if (slot.lineage.back().exponent > *top) continue;
        if (slot.instance.aborted()) {
          trace().add(step, i, slot.lineage.back().tau, GuessEventKind::aborted);
        }
        replace(i, step, next_live);
      }
    }
  }

  void replace(std::size_t i, std::size_t step, std::size_t next_live) {
    auto& slot = run_.slots[i];
    if (slot.lineage.size() > config_.max_generations) {
      throw ResourceCapError("strapped guess exceeded " +
                             std::to_string(config_.max_generations) +
                             " generations");
    }
    note_peak(slot.instance);
    ChildSeed seed = slot.instance.child_seed();
    const std::size_t exponent = slot.lineage.back().exponent + run_.beta;
    const double tau = tau_of(exponent);
    const std::size_t live_start = seed.pending.empty() ? next_live : step;
    trace().add(step, i, slot.lineage.back().tau, GuessEventKind::replaced);
    Instance child = make_(tau);
    child.seed(seed);
    slot.instance = std::move(child);
    slot.lineage.push_back({exponent, tau, live_start});
    ++trace().guesses_created;
    trace().add(step, i, tau, GuessEventKind::spawned);
  }

  void note_peak(const Instance& inst) {
    run_.outcome.peak_instance_stored =
        std::max(run_.outcome.peak_instance_stored, inst.peak_stored());
  }

  void note_storage() {
    std::size_t total = 0;
    for (const auto& slot : run_.slots) total += slot.instance.stored_points();
    run_.outcome.peak_total_stored =
        std::max(run_.outcome.peak_total_stored, total);
    trace().max_active = std::max(trace().max_active, run_.slots.size());
  }

  StrapConfig config_;
  Make make_;
  StrappedRun<Instance> run_;
};

template <class Instance, class Make, class Finish>
StrappedRun<Instance> run_strapped(const ElementSet& stream,
                                   const StrapConfig& config, Make make,
                                   Finish finish) {
  Strapper<Instance, Make> strapper(config, std::move(make));
  for (std::size_t s = 0; s < stream.size(); ++s) strapper.process(s, stream[s]);
  return strapper.finish(stream.size(), std::move(finish));
}

namespace internal {

inline GuessOutcome second_pass_and_pick(std::vector<TwoPassInstance>& instances,
                                         const ElementSet& stream,
                                         GuessOutcome out) {
  for (ElementId e : stream) {
    std::size_t total = 0;
    for (auto& inst : instances) {
      inst.second_pass(e);
      if (!inst.failed()) total += inst.stored_points();
    }
    out.peak_total_stored = std::max(out.peak_total_stored, total);
  }
  for (const auto& inst : instances) {
    out.peak_instance_stored = std::max(out.peak_instance_stored, inst.peak_stored());
  }
  std::vector<std::size_t> idx(instances.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return instances[a].tau() < instances[b].tau();
  });
  for (std::size_t i : idx) {
    if (instances[i].failed()) continue;
    auto centers = instances[i].finish();
    out.trace.add(stream.size(), i, instances[i].tau(),
                  centers ? GuessEventKind::finished : GuessEventKind::finish_failed);
    if (centers) {
      out.centers = std::move(centers);
      out.tau = instances[i].tau();
      break;
    }
  }
  return out;
}

}  // namespace internal

// Two-pass algorithm over a ladder of guesses. Returns the smallest guess
// whose intersection covers every pivot.
inline GuessOutcome run_two_pass_ladder(const Metric& metric,
                                        const Matroid& matroid,
                                        const ElementSet& stream,
                                        const std::vector<double>& taus) {
  GuessOutcome out;
  std::vector<TwoPassInstance> instances;
  for (double tau : taus) instances.emplace_back(metric, matroid, tau);
  out.trace.guesses_created = taus.size();
  out.trace.max_active = taus.size();
  for (std::size_t s = 0; s < stream.size(); ++s) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].failed()) continue;
      instances[i].first_pass(stream[s]);
      if (instances[i].failed()) out.trace.add(s, i, taus[i], GuessEventKind::aborted);
    }
  }
  return internal::second_pass_and_pick(instances, stream, out);
}


// Two passes with strapped guesses. The first pass runs strapped one-pass
// instances and tracks the largest distance from the first point, which
// bounds the optimum by half. The second pass starts from the pivots of every
// final guess and of its chain of prospective descendants, up to the first
// one whose guess reaches that bound.
inline GuessOutcome run_two_pass_strapped(const Metric& metric,
                                          const Matroid& matroid,
                                          const ElementSet& stream,
                                          const StrapConfig& config) {
  auto make = [&](double tau) {
    return MatroidCenterInstance(metric, MatroidRule(matroid), tau);
  };
  Strapper<MatroidCenterInstance, decltype(make)> strapper(config, make);
  double reach = 0.0;
  for (std::size_t s = 0; s < stream.size(); ++s) {
    strapper.process(s, stream[s]);
    reach = std::max(reach, metric.distance(stream.front(), stream[s]));
  }

  std::vector<TwoPassInstance> instances;
  for (const auto& slot : strapper.slots()) {
    MatroidCenterInstance current = slot.instance;
    std::size_t exponent = slot.lineage.back().exponent;
    for (std::size_t depth = 0;; ++depth) {
      instances.push_back(TwoPassInstance::from_pivots(
          metric, matroid, current.tau(), internal::pivot_ids(current.pivots())));
      if (current.tau() >= 2.0 * reach || depth >= config.final_generations) break;
      exponent += strapper.beta();
      MatroidCenterInstance next = make(strapper.tau_of(exponent));
      next.seed(current.child_seed());
      current = std::move(next);
    }
  }
  const std::size_t extra = instances.size() - strapper.slots().size();
  StrappedRun<MatroidCenterInstance> first = strapper.take();
  GuessOutcome out = std::move(first.outcome);
  out.trace.guesses_created += extra;
  return internal::second_pass_and_pick(instances, stream, std::move(out));
}

// For a strapped slot, where each point older than the slot's live input is
// represented: the pivot of the parent summary it was folded into, and that
// pivot's set. Rebuilt by replaying the slot's lineage deterministically.
struct Representative {
  ElementId point{};
  ElementId pivot{};
  ElementSet pivot_set;
};

template <class Rule, class Make>
std::vector<Representative> replay_representatives(
    const ElementSet& stream, const std::vector<Generation>& lineage, Make make) {
  std::vector<Representative> out;
  if (lineage.size() < 2) return out;
  std::size_t universe = 0;
  for (ElementId e : stream) universe = std::max(universe, index_of(e) + 1);
  std::vector<std::optional<ElementId>> rho(universe);

  auto sink = [&rho](ElementId x, ElementId host) {
    if (!rho[index_of(x)]) {
      rho[index_of(x)] = host;
      return;
    }
    for (auto& r : rho) {
      if (r && *r == x) r = host;
    }
  };

  std::optional<OnePassInstance<Rule>> prev;
  for (std::size_t g = 0; g + 1 < lineage.size(); ++g) {
    OnePassInstance<Rule> inst = make(lineage[g].tau);
    inst.set_assignment_sink(sink);
    if (prev) inst.seed(prev->child_seed());
    for (std::size_t s = lineage[g].live_start; s < lineage[g + 1].live_start; ++s) {
      inst.process(stream[s]);
    }
    inst.set_assignment_sink({});
    prev.emplace(std::move(inst));
  }
  for (std::size_t s = 0; s < lineage.back().live_start; ++s) {
    const auto& r = rho[index_of(stream[s])];
    if (!r) continue;
    for (const auto& p : prev->pivots()) {
      if (p.pivot == *r) out.push_back({stream[s], *r, p.independent_set});
    }
  }
  return out;
}

}  // namespace mcstream
