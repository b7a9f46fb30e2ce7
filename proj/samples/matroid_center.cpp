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

// Streams a planted-cluster instance through the one-pass matroid-center
// algorithm with both guess schemes and prints the chosen centers.

#include <iostream>

#include "mcstream.hpp"

int main() {
  mcstream::RandomSpec spec;
  spec.n = 30;
  spec.clusters = 3;
  spec.parts = 3;
  spec.seed = 11;
  const mcstream::Instance inst = mcstream::generate_random(spec);

  for (auto scheme : {mcstream::GuessScheme::ladder, mcstream::GuessScheme::strapped}) {
    mcstream::RunConfig cfg;
    cfg.guesses = scheme;
    cfg.verify = true;
    const mcstream::Report rep = mcstream::run(inst, cfg);
    std::cout << mcstream::to_string(scheme) << ": cost " << rep.cost << ", optimum "
              << *rep.exact_opt << ", centers";
    for (const auto& id : rep.center_ids) std::cout << ' ' << id;
    std::cout << ", peak stored " << rep.peak_instance_stored << " of "
              << rep.instance_space_bound << '\n';
  }
}
