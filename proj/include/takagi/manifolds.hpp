#pragma once

// Built-in metrics and the text metric file format.
//
//   # comment
//   name   sphere
//   dim    2
//   coords theta phi
//   signature 2 0
//   const  r=1.5
//   domain theta 0.2 2.94
//   domain phi 0 6.283185307179586
//   periodic phi
//   g 1 1 = r^2
//   g 2 2 = r^2*sin(theta)^2
//
// Indices are 1-based. Entries with a <= b define the metric; missing ones
// are zero. An entry with a > b is accepted only when it repeats the
// matching upper entry. Coordinates without a domain line get (-1, 1).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "takagi/geometry.hpp"
#include "takagi/tensor.hpp"

namespace takagi {

// A known property checked by the analysis. `expected` is DSL text over the
// chart; for tensor quantities it applies to every component.
struct ReferenceValue {
  std::string quantity;  // scalar_curvature | ricci | riemann | einstein
  std::string expected;
  bool relative = false;
  double tolerance = 1e-8;
};

struct MetricEntry {
  std::size_t a = 0;  // 0-based, a <= b
  std::size_t b = 0;
  std::string text;
};

struct ManifoldSpec {
  std::string name;
  std::string description;
  Chart chart;
  Constants constants;
  std::vector<MetricEntry> entries;
  std::optional<Flatness> expected;  // for the default strategy
  std::vector<ReferenceValue> references;

  // Parsed, simplified, symmetric metric.
  MetricField metric() const;
};

const std::vector<ManifoldSpec>& catalog();
const ManifoldSpec* find_manifold(std::string_view name);

ManifoldSpec parse_metric_file(std::string_view text, const std::string& origin = "<input>");
ManifoldSpec load_file(const std::string& path);

// Catalog name, or else a path to a metric file.
ManifoldSpec resolve_manifold(const std::string& ref);

// Counts of positive and negative eigenvalues of g at p.
std::pair<std::size_t, std::size_t> signature_at(const MetricField& g, const Point& p);

}  // namespace takagi
