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
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mcstream/constraint.hpp"
#include "mcstream/element.hpp"
#include "mcstream/matroid.hpp"
#include "mcstream/metric.hpp"

// Plain-text instance files.
//
//   [metric]    kind = euclidean | matrix
//   [matroid]   kind = uniform | partition | linear | graphic | explicit
//               k = 2                  (uniform)
//               part = <label> <cap>   (partition, one line per part)
//               modulus = <p>          (linear, optional)
//               vertices = <n>         (graphic)
//               set = <id> <id> ...    (explicit, one line per listed set)
//   [knapsack]  budget = <B>
//   [outliers]  z = <z>
//   [points]    <id> key=value ...     one line per point, in stream order;
//               keys: x (coordinates), part, vector, edge (u-v), weight
//   [matrix]    one row per point, whitespace or comma separated
//
// '#' starts a comment.

namespace mcstream {

enum class MetricKind { euclidean, matrix };
enum class MatroidKind { none, uniform, partition, linear, graphic, explicit_sets };

struct MatroidSpec {
  MatroidKind kind = MatroidKind::none;
  std::size_t k = 0;
  std::vector<std::pair<std::string, std::size_t>> parts;
  std::optional<std::uint64_t> modulus;
  std::size_t vertices = 0;
  std::vector<std::vector<std::string>> sets;

  friend bool operator==(const MatroidSpec&, const MatroidSpec&) = default;
};

struct PointRecord {
  std::string id;
  std::vector<double> coords;
  std::string part;
  std::vector<std::int64_t> vector;
  std::optional<std::pair<std::size_t, std::size_t>> edge;
  std::optional<double> weight;

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

struct Instance {
  MetricKind metric = MetricKind::euclidean;
  MatroidSpec matroid;
  std::optional<double> budget;
  std::optional<std::size_t> z;
  std::vector<PointRecord> points;
  std::vector<std::vector<double>> matrix;

  std::size_t size() const { return points.size(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

namespace internal {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

class LineError {
 public:
  explicit LineError(std::size_t line) : line_(line) {}
  [[noreturn]] void operator()(const std::string& what) const {
    throw InputError("line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::size_t line_;
};

inline double parse_double(const std::string& s, const LineError& fail) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail("bad number '" + s + "'");
  }
}

inline std::int64_t parse_int(const std::string& s, const LineError& fail) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) fail("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail("bad integer '" + s + "'");
  }
}

inline std::size_t parse_count(const std::string& s, const LineError& fail) {
  const std::int64_t v = parse_int(s, fail);
  if (v < 0) fail("expected a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace internal

inline Instance parse_instance(std::istream& in) {
  using internal::LineError;
  Instance inst;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::size_t> matrix_lines;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineError fail(line_no);
    std::string line = raw.substr(0, raw.find('#'));
    line = internal::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "metric" && section != "matroid" && section != "knapsack" &&
          section != "outliers" && section != "points" && section != "matrix") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) fail("content before the first section");

    if (section == "points") {
      auto tokens = internal::split(line, " \t");
      PointRecord p;
      p.id = tokens.front();
      if (p.id.find('=') != std::string::npos) fail("point line must start with an id");
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto eq = tokens[t].find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + tokens[t] + "'");
        const std::string key = tokens[t].substr(0, eq);
        const std::string value = tokens[t].substr(eq + 1);
        if (key == "x") {
          for (const auto& c : internal::split(value, ",")) {
            p.coords.push_back(internal::parse_double(c, fail));
          }
        } else if (key == "part") {
          p.part = value;
        } else if (key == "vector") {
          for (const auto& c : internal::split(value, ",")) {
            p.vector.push_back(internal::parse_int(c, fail));
          }
        } else if (key == "edge") {
          auto ends = internal::split(value, "-");
          if (ends.size() != 2) fail("edge must look like u-v");
          p.edge = {internal::parse_count(ends[0], fail),
                    internal::parse_count(ends[1], fail)};
        } else if (key == "weight") {
          p.weight = internal::parse_double(value, fail);
        } else {
          fail("unknown point field '" + key + "'");
        }
      }
      for (const auto& q : inst.points) {
        if (q.id == p.id) fail("duplicate point id '" + p.id + "'");
      }
      inst.points.push_back(std::move(p));
      continue;
    }
    if (section == "matrix") {
      std::vector<double> row;
      for (const auto& c : internal::split(line, " \t,")) {
        row.push_back(internal::parse_double(c, fail));
      }
      inst.matrix.push_back(std::move(row));
      matrix_lines.push_back(line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = internal::trim(line.substr(0, eq));
    const std::string value = internal::trim(line.substr(eq + 1));
    if (section == "metric") {
      if (key != "kind") fail("unknown metric field '" + key + "'");
      if (value == "euclidean") {
        inst.metric = MetricKind::euclidean;
      } else if (value == "matrix") {
        inst.metric = MetricKind::matrix;
      } else {
        fail("unknown metric kind '" + value + "'");
      }
    } else if (section == "matroid") {
      auto& m = inst.matroid;
      if (key == "kind") {
        if (value == "uniform") m.kind = MatroidKind::uniform;
        else if (value == "partition") m.kind = MatroidKind::partition;
        else if (value == "linear") m.kind = MatroidKind::linear;
        else if (value == "graphic") m.kind = MatroidKind::graphic;
        else if (value == "explicit") m.kind = MatroidKind::explicit_sets;
        else fail("unknown matroid kind '" + value + "'");
      } else if (key == "k") {
        m.k = internal::parse_count(value, fail);
      } else if (key == "part") {
        auto tokens = internal::split(value, " \t");
        if (tokens.size() != 2) fail("part needs a label and a capacity");
        for (const auto& [label, cap] : m.parts) {
          if (label == tokens[0]) fail("duplicate part '" + label + "'");
        }
        m.parts.emplace_back(tokens[0], internal::parse_count(tokens[1], fail));
      } else if (key == "modulus") {
        m.modulus = internal::parse_count(value, fail);
      } else if (key == "vertices") {
        m.vertices = internal::parse_count(value, fail);
      } else if (key == "set") {
        m.sets.push_back(internal::split(value, " \t"));
      } else {
        fail("unknown matroid field '" + key + "'");
      }
    } else if (section == "knapsack") {
      if (key != "budget") fail("unknown knapsack field '" + key + "'");
      inst.budget = internal::parse_double(value, fail);
    } else if (section == "outliers") {
      if (key != "z") fail("unknown outliers field '" + key + "'");
      inst.z = internal::parse_count(value, fail);
    }
  }

  // Structural checks that need the whole file.
  const std::size_t n = inst.points.size();
  if (inst.metric == MetricKind::euclidean) {
    if (!inst.matrix.empty()) throw InputError("[matrix] given for a euclidean metric");
    for (const auto& p : inst.points) {
      if (p.coords.size() != inst.points.front().coords.size() || p.coords.empty()) {
        throw InputError("point '" + p.id + "' has the wrong number of coordinates");
      }
    }
  } else {
    if (inst.matrix.size() != n) {
      throw InputError("[matrix] has " + std::to_string(inst.matrix.size()) +
                       " rows for " + std::to_string(n) + " points");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.matrix[i].size() != n) {
        const internal::LineError at_row(matrix_lines[i]);
        at_row("matrix row has " + std::to_string(inst.matrix[i].size()) +
               " entries, expected " + std::to_string(n));
      }
    }
  }
  if (inst.matroid.kind == MatroidKind::partition) {
    for (const auto& p : inst.points) {
      bool known = false;
      for (const auto& part : inst.matroid.parts) known = known || part.first == p.part;
      if (!p.part.empty() && !known) {
        throw InputError("point '" + p.id + "' references unknown part '" + p.part + "'");
      }
    }
  }
  if (inst.budget) {
    for (const auto& p : inst.points) {
      if (!p.weight) throw InputError("point '" + p.id + "' has no weight");
    }
  }
  return inst;
}

inline MetricPtr make_metric(const Instance& inst);
inline MatroidPtr make_matroid(const Instance& inst);

// Parses and builds the oracles once so that metric and matroid errors
// surface at load time.
inline Instance load_instance(std::istream& in) {
  Instance inst = parse_instance(in);
  make_metric(inst);
  make_matroid(inst);
  return inst;
}

inline Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_instance(in);
}

inline Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return load_instance(in);
}

inline std::string emit_instance(const Instance& inst) {
  using internal::format_double;
  std::ostringstream out;
  out << "[metric]\nkind = "
      << (inst.metric == MetricKind::euclidean ? "euclidean" : "matrix") << "\n";
  const auto& m = inst.matroid;
  if (m.kind != MatroidKind::none) {
    out << "\n[matroid]\nkind = ";
    switch (m.kind) {
      case MatroidKind::uniform: out << "uniform\nk = " << m.k << "\n"; break;
      case MatroidKind::partition:
        out << "partition\n";
        for (const auto& [label, cap] : m.parts) out << "part = " << label << " " << cap << "\n";
        break;
      case MatroidKind::linear:
        out << "linear\n";
        if (m.modulus) out << "modulus = " << *m.modulus << "\n";
        break;
      case MatroidKind::graphic: out << "graphic\nvertices = " << m.vertices << "\n"; break;
      case MatroidKind::explicit_sets:
        out << "explicit\n";
        for (const auto& set : m.sets) {
          out << "set =";
          for (const auto& id : set) out << " " << id;
          out << "\n";
        }
        break;
      case MatroidKind::none: break;
    }
  }
  if (inst.budget) out << "\n[knapsack]\nbudget = " << format_double(*inst.budget) << "\n";
  if (inst.z) out << "\n[outliers]\nz = " << *inst.z << "\n";
  out << "\n[points]\n";
  for (const auto& p : inst.points) {
    out << p.id;
    if (!p.coords.empty()) {
      out << " x=";
      for (std::size_t i = 0; i < p.coords.size(); ++i) {
        out << (i ? "," : "") << format_double(p.coords[i]);
      }
    }
    if (!p.part.empty()) out << " part=" << p.part;
    if (!p.vector.empty()) {
      out << " vector=";
      for (std::size_t i = 0; i < p.vector.size(); ++i) out << (i ? "," : "") << p.vector[i];
    }
    if (p.edge) out << " edge=" << p.edge->first << "-" << p.edge->second;
    if (p.weight) out << " weight=" << format_double(*p.weight);
    out << "\n";
  }
  if (inst.metric == MetricKind::matrix) {
    out << "\n[matrix]\n";
    for (const auto& row : inst.matrix) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << format_double(row[j]);
      out << "\n";
    }
  }
  return out.str();
}

// Oracles for an instance. Element i is the i-th point of the file.

inline MetricPtr make_metric(const Instance& inst) {
  if (inst.metric == MetricKind::matrix) return std::make_shared<MatrixMetric>(inst.matrix);
  std::vector<std::vector<double>> coords;
  for (const auto& p : inst.points) coords.push_back(p.coords);
  return std::make_shared<EuclideanMetric>(std::move(coords));
}

inline MatroidPtr make_matroid(const Instance& inst) {
  const auto& m = inst.matroid;
  const std::size_t n = inst.size();
  auto index_of_id = [&inst](const std::string& id) {
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
      if (inst.points[i].id == id) return i;
    }
    throw InputError("matroid set references unknown point '" + id + "'");
  };
  switch (m.kind) {
    case MatroidKind::none: return nullptr;
    case MatroidKind::uniform: return std::make_shared<UniformMatroid>(n, m.k);
    case MatroidKind::partition: {
      std::map<std::string, std::ptrdiff_t> label_index;
      std::vector<std::size_t> caps;
      for (const auto& [label, cap] : m.parts) {
        label_index[label] = static_cast<std::ptrdiff_t>(caps.size());
        caps.push_back(cap);
      }
      std::vector<std::ptrdiff_t> part_of;
      for (const auto& p : inst.points) {
        if (p.part.empty()) throw InputError("point '" + p.id + "' has no part");
        part_of.push_back(label_index.at(p.part));
      }
      return std::make_shared<PartitionMatroid>(std::move(part_of), std::move(caps));
    }
    case MatroidKind::linear: {
      std::vector<std::vector<std::int64_t>> vectors;
      for (const auto& p : inst.points) vectors.push_back(p.vector);
      return std::make_shared<LinearMatroid>(std::move(vectors), m.modulus);
    }
    case MatroidKind::graphic: {
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (const auto& p : inst.points) {
        if (!p.edge) throw InputError("point '" + p.id + "' has no edge");
        edges.push_back(*p.edge);
      }
      return std::make_shared<GraphicMatroid>(m.vertices, std::move(edges));
    }
    case MatroidKind::explicit_sets: {
      std::vector<ElementSet> sets;
      for (const auto& ids : m.sets) {
        ElementSet set;
        for (const auto& id : ids) set.push_back(element(index_of_id(id)));
        sets.push_back(std::move(set));
      }
      return std::make_shared<ExplicitMatroid>(n, std::move(sets));
    }
  }
  return nullptr;
}

inline std::optional<Knapsack> make_knapsack(const Instance& inst,
                                             std::optional<double> budget = {}) {
  const auto b = budget ? budget : inst.budget;
  if (!b) return std::nullopt;
  std::vector<double> weights;
  for (const auto& p : inst.points) {
    if (!p.weight) throw InputError("point '" + p.id + "' has no weight");
    weights.push_back(*p.weight);
  }
  return Knapsack(std::move(weights), *b);
}

}  // namespace mcstream
