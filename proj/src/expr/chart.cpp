#include "takagi/chart.hpp"

#include <random>
#include <set>

#include "takagi/errors.hpp"

namespace takagi {

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (coordinates[i] == name) return i;
  }
  return std::nullopt;
}

void Chart::validate() const {
  const std::size_t n = dimension();
  if (n == 0) throw InputError("chart must have at least one coordinate");
  std::set<std::string> seen;
  for (const auto& c : coordinates) {
    if (!seen.insert(c).second) throw InputError("duplicate coordinate name '" + c + "'");
  }
  if (positive + negative != n) {
    throw InputError("signature " + std::to_string(positive) + " " + std::to_string(negative) +
                     " does not add up to dimension " + std::to_string(n));
  }
  if (domains.size() != n) throw InputError("domain count does not match dimension");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(domains[i].lo < domains[i].hi)) {
      throw InputError("empty domain for coordinate '" + coordinates[i] + "'");
    }
  }
  if (!periodic.empty() && periodic.size() != n) {
    throw InputError("periodic flag count does not match dimension");
  }
}

Chart Chart::make(std::vector<std::string> names, std::size_t negative,
                  std::vector<Interval> domains) {
  if (negative > names.size()) throw InputError("signature has more negative directions than coordinates");
  Chart c;
  c.positive = names.size() - negative;
  c.negative = negative;
  c.periodic.assign(names.size(), false);
  c.coordinates = std::move(names);
  c.domains = std::move(domains);
  c.validate();
  return c;
}

std::vector<Point> sample_points(const Chart& chart, std::size_t count, std::uint64_t seed,
                                 double margin) {
  std::mt19937_64 rng(seed);
  // Map the raw 64-bit draw ourselves; std::uniform_real_distribution is not
  // specified bit-for-bit across standard libraries.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Point> points(count, Point(chart.dimension()));
  for (auto& p : points) {
    for (std::size_t a = 0; a < chart.dimension(); ++a) {
      const Interval d = chart.domains[a];
      const double w = d.hi - d.lo;
      const double lo = d.lo + margin * w;
      const double hi = d.hi - margin * w;
      p[a] = lo + (hi - lo) * unit();
    }
  }
  return points;
}

bool inside_domain(const Chart& chart, const Point& p) {
  for (std::size_t a = 0; a < chart.dimension(); ++a) {
    if (!chart.periodic.empty() && chart.periodic[a]) continue;
    if (!(p[a] > chart.domains[a].lo && p[a] < chart.domains[a].hi)) return false;
  }
  return true;
}

}  // namespace takagi
