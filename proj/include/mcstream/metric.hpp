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

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "mcstream/element.hpp"

namespace mcstream {

// Distance oracle. Immutable after construction.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual std::size_t size() const = 0;

  double distance(ElementId a, ElementId b) const {
    if (index_of(a) >= size()) throw UnknownElementError(a);
    if (index_of(b) >= size()) throw UnknownElementError(b);
    return raw_distance(index_of(a), index_of(b));
  }

 protected:
  virtual double raw_distance(std::size_t a, std::size_t b) const = 0;
};

using MetricPtr = std::shared_ptr<const Metric>;

class EuclideanMetric final : public Metric {
 public:
  explicit EuclideanMetric(std::vector<std::vector<double>> coords)
      : coords_(std::move(coords)) {
    for (const auto& p : coords_) {
      if (p.size() != coords_.front().size()) {
        throw InputError("euclidean metric: points must share one dimension");
      }
    }
  }

  std::size_t size() const override { return coords_.size(); }
  const std::vector<std::vector<double>>& coords() const { return coords_; }

 protected:
  double raw_distance(std::size_t a, std::size_t b) const override {
    if (a == b) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < coords_[a].size(); ++i) {
      const double d = coords_[a][i] - coords_[b][i];
      sum += d * d;
    }
    return std::sqrt(sum);
  }

 private:
  std::vector<std::vector<double>> coords_;
};

// Explicit symmetric distance matrix, validated in full on construction.
class MatrixMetric final : public Metric {
 public:
  explicit MatrixMetric(std::vector<std::vector<double>> matrix)
      : matrix_(std::move(matrix)) {
    validate();
  }

  std::size_t size() const override { return matrix_.size(); }
  const std::vector<std::vector<double>>& matrix() const { return matrix_; }

 protected:
  double raw_distance(std::size_t a, std::size_t b) const override {
    return matrix_[a][b];
  }

 private:
  void validate() const {
    const std::size_t n = matrix_.size();
    auto fail = [](const std::string& what) { throw InputError(what); };
    for (std::size_t i = 0; i < n; ++i) {
      if (matrix_[i].size() != n) {
        std::ostringstream os;
        os << "distance matrix is not square (row " << i << ")";
        fail(os.str());
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = matrix_[i][j];
        if (!(d >= 0.0) || std::isinf(d)) {
          std::ostringstream os;
          os << "distance (" << i << "," << j << ") is not a finite "
             << "non-negative number";
          fail(os.str());
        }
        if ((i == j) != (d == 0.0)) {
          std::ostringstream os;
          os << "distance (" << i << "," << j << ") must be zero exactly "
             << "on the diagonal";
          fail(os.str());
        }
        if (d != matrix_[j][i]) {
          std::ostringstream os;
          os << "distance matrix is not symmetric at (" << i << "," << j
             << ")";
          fail(os.str());
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (matrix_[i][k] > matrix_[i][j] + matrix_[j][k]) {
            std::ostringstream os;
            os << "triangle inequality violated by (" << i << "," << j << ","
               << k << ")";
            fail(os.str());
          }
        }
      }
    }
  }

  std::vector<std::vector<double>> matrix_;
};

// min_{x in set} d(e, x); +infinity for an empty set.
inline double dist_to_set(const Metric& m, ElementId e, const ElementSet& set) {
  double best = kInfinity;
  for (ElementId x : set) best = std::min(best, m.distance(e, x));
  return best;
}

// Closed ball {x in universe : d(e, x) <= radius}, in universe order.
inline ElementSet ball(const Metric& m, ElementId e, double radius,
                       const ElementSet& universe) {
  if (radius < 0.0) throw PreconditionError("ball radius must be >= 0");
  ElementSet out;
  for (ElementId x : universe) {
    if (m.distance(e, x) <= radius) out.push_back(x);
  }
  return out;
}

struct MetricStats {
  double min_positive_distance = 0.0;
  double max_distance = 0.0;
  double aspect_ratio = 1.0;
};

inline MetricStats compute_stats(const Metric& m, const ElementSet& elements) {
  if (elements.size() < 2) {
    throw InputError("metric stats need at least two elements");
  }
  MetricStats stats;
  stats.min_positive_distance = kInfinity;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      const double d = m.distance(elements[i], elements[j]);
      stats.max_distance = std::max(stats.max_distance, d);
      if (d > 0.0) {
        stats.min_positive_distance = std::min(stats.min_positive_distance, d);
      }
    }
  }
  if (stats.max_distance == 0.0) {
    throw InputError("metric stats need two distinct points");
  }
  stats.aspect_ratio = stats.max_distance / stats.min_positive_distance;
  return stats;
}

inline ElementSet all_elements(std::size_t n) {
  ElementSet out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = element(i);
  return out;
}

}  // namespace mcstream
