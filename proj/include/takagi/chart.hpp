#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace takagi {

// Open interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Coordinate system of a manifold patch: coordinate names, the signature
// (r positive and s negative directions of the locally diagonal metric) and
// the open sampling domain of each coordinate.
struct Chart {
  std::vector<std::string> coordinates;
  std::size_t positive = 0;  // r
  std::size_t negative = 0;  // s
  std::vector<Interval> domains;
  // Angular coordinates are not bounded by their domain during integration.
  std::vector<bool> periodic;

  std::size_t dimension() const noexcept { return coordinates.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;

  // Throws InputError when names repeat, r + s != n, or a domain is empty.
  void validate() const;

  static Chart make(std::vector<std::string> names, std::size_t negative,
                    std::vector<Interval> domains);
};

// Named scalar constant referenced by metric expressions (M, r, ...).
struct Constant {
  std::string name;
  double value = 0.0;
};
using Constants = std::vector<Constant>;

using Point = std::vector<double>;

// `count` points uniformly distributed in the chart domain, each coordinate
// kept at least `margin` (fraction of the domain width) away from both
// domain edges. Deterministic in `seed`.
std::vector<Point> sample_points(const Chart& chart, std::size_t count, std::uint64_t seed,
                                 double margin = 0.05);

bool inside_domain(const Chart& chart, const Point& p);

}  // namespace takagi
