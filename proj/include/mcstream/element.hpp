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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcstream {

// Position of a point in ingestion order. Oracles and algorithms only ever see
// these ids; labels live in the Instance.
enum class ElementId : std::uint32_t {};

constexpr ElementId element(std::size_t index) {
  return static_cast<ElementId>(index);
}

constexpr std::size_t index_of(ElementId e) {
  return static_cast<std::size_t>(e);
}

using ElementSet = std::vector<ElementId>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool contains(const ElementSet& set, ElementId e) {
  return std::find(set.begin(), set.end(), e) != set.end();
}

inline ElementSet sorted_union(ElementSet a, const ElementSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// An oracle was asked about an element outside its ground set. The streaming
// model treats this as the algorithm failing.
class UnknownElementError : public std::out_of_range {
 public:
  explicit UnknownElementError(ElementId e)
      : std::out_of_range("element " + std::to_string(index_of(e)) +
                          " is not in the oracle's ground set"),
        element_(e) {}
  ElementId element() const { return element_; }

 private:
  ElementId element_;
};

// A caller broke an operation's documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A streaming invariant (space bound, separation) was violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An enumeration would exceed its configured cap.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcstream
