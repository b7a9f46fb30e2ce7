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

#include <cstdint>
#include <memory>

#include "mcstream/matroid.hpp"
#include "mcstream/metric.hpp"

namespace mcstream {

struct OracleCounters {
  std::uint64_t distance_calls = 0;
  std::uint64_t independence_calls = 0;
};

// Decorators that count oracle traffic for one run. Unlike the oracles they
// wrap, these mutate the shared counters and are meant for a single thread.
class CountingMetric final : public Metric {
 public:
  CountingMetric(MetricPtr inner, OracleCounters& counters)
      : inner_(std::move(inner)), counters_(&counters) {}
  std::size_t size() const override { return inner_->size(); }

 protected:
  double raw_distance(std::size_t a, std::size_t b) const override {
    ++counters_->distance_calls;
    return inner_->distance(element(a), element(b));
  }

 private:
  MetricPtr inner_;
  OracleCounters* counters_;
};

class CountingMatroid final : public Matroid {
 public:
  CountingMatroid(MatroidPtr inner, OracleCounters& counters)
      : inner_(std::move(inner)), counters_(&counters) {}
  bool in_ground(ElementId e) const override { return inner_->in_ground(e); }
  std::size_t rank_upper() const override { return inner_->rank_upper(); }

 protected:
  bool independent(std::span<const ElementId> set) const override {
    ++counters_->independence_calls;
    return inner_->is_independent(set);
  }

 private:
  MatroidPtr inner_;
  OracleCounters* counters_;
};

}  // namespace mcstream
