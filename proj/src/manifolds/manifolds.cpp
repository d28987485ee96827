#include "takagi/manifolds.hpp"

#include <Eigen/Dense>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "takagi/parser.hpp"

namespace takagi {

using expr::Expr;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

class FileParser {
 public:
  FileParser(std::string_view text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  ManifoldSpec parse() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t end = std::min(text_.find('\n', pos), text_.size());
      std::string_view line = text_.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (!line.empty()) parse_line(line, line_no);
      if (end == text_.size()) break;
    }
    return finish();
  }

 private:
  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw MetricFileError(origin_, line, what);
  }

  double number(std::string_view s, std::size_t line) const {
    try {
      const Expr e = parse_expr(s, Chart{}, spec_.constants);
      const auto v = expr::eval(expr::simplify(e), Point{});
      if (v.imag() != 0.0) fail(line, "expected a real number, got '" + std::string(s) + "'");
      return v.real();
    } catch (const Error& e) {
      fail(line, "bad number '" + std::string(s) + "': " + e.what());
    }
  }

  std::size_t index(const std::string& s, std::size_t line) const {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail(line, "bad integer '" + s + "'");
    return v;
  }

  std::size_t coordinate(const std::string& name, std::size_t line) const {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) return i;
    }
    fail(line, "unknown coordinate '" + name + "'");
  }

  void parse_line(std::string_view line, std::size_t no) {
    const auto space = line.find_first_of(" \t");
    const std::string key(line.substr(0, space));
    const std::string_view rest = space == std::string_view::npos ? "" : trim(line.substr(space));
    const auto words = split_words(rest);
    if (key == "name") {
      if (rest.empty()) fail(no, "missing name");
      spec_.name = std::string(rest);
    } else if (key == "dim") {
      if (words.size() != 1) fail(no, "expected 'dim n'");
      dim_ = index(words[0], no);
      if (*dim_ == 0) fail(no, "dimension must be at least 1");
    } else if (key == "coords") {
      if (!coords_.empty()) fail(no, "coordinates declared twice");
      if (words.empty()) fail(no, "expected coordinate names");
      coords_ = words;
      coords_line_ = no;
    } else if (key == "signature") {
      if (words.size() != 2) fail(no, "expected 'signature r s'");
      signature_ = {index(words[0], no), index(words[1], no)};
      signature_line_ = no;
    } else if (key == "const") {
      const auto eq = rest.find('=');
      if (eq == std::string_view::npos) fail(no, "expected 'const NAME=value'");
      const std::string name(trim(rest.substr(0, eq)));
      if (name.empty()) fail(no, "missing constant name");
      const double v = number(trim(rest.substr(eq + 1)), no);
      for (const auto& c : spec_.constants) {
        if (c.name == name) fail(no, "constant '" + name + "' declared twice");
      }
      spec_.constants.push_back({name, v});
    } else if (key == "domain") {
      if (coords_.empty()) fail(no, "'domain' before 'coords'");
      if (words.size() != 3) fail(no, "expected 'domain x lo hi'");
      const std::size_t c = coordinate(words[0], no);
      domains_[c] = {number(words[1], no), number(words[2], no)};
      if (!(domains_[c].lo < domains_[c].hi)) fail(no, "empty domain for '" + words[0] + "'");
    } else if (key == "periodic") {
      if (coords_.empty()) fail(no, "'periodic' before 'coords'");
      for (const auto& w : words) periodic_.insert(coordinate(w, no));
    } else if (key == "g") {
      const auto eq = rest.find('=');
      if (eq == std::string_view::npos) fail(no, "expected 'g a b = expr'");
      const auto idx = split_words(rest.substr(0, eq));
      if (idx.size() != 2) fail(no, "expected 'g a b = expr'");
      const std::size_t n = dim_.value_or(coords_.size());
      std::size_t a = index(idx[0], no), b = index(idx[1], no);
      if (a < 1 || b < 1 || a > n || b > n) {
        fail(no, "metric index out of range 1.." + std::to_string(n));
      }
      Raw r{a - 1, b - 1, std::string(trim(rest.substr(eq + 1))), no};
      if (r.text.empty()) fail(no, "empty metric expression");
      auto& target = a <= b ? upper_ : lower_;
      for (const auto& e : target) {
        if (e.a == r.a && e.b == r.b) fail(no, "entry g " + idx[0] + " " + idx[1] + " given twice");
      }
      target.push_back(std::move(r));
    } else {
      fail(no, "unknown keyword '" + key + "'");
    }
  }

  ManifoldSpec finish() {
    if (!dim_) fail(0, "missing 'dim'");
    if (coords_.empty()) fail(0, "missing 'coords'");
    if (coords_.size() != *dim_) {
      fail(coords_line_, "dimension mismatch: dim " + std::to_string(*dim_) + " but " +
                             std::to_string(coords_.size()) + " coordinates");
    }
    if (!signature_) fail(0, "missing 'signature'");
    if (spec_.name.empty()) spec_.name = origin_;
    const std::size_t n = *dim_;
    if (signature_->first + signature_->second != n) {
      fail(signature_line_, "signature does not add up to dim " + std::to_string(n));
    }
    spec_.chart.coordinates = coords_;
    spec_.chart.positive = signature_->first;
    spec_.chart.negative = signature_->second;
    spec_.chart.domains.assign(n, Interval{-1.0, 1.0});
    for (const auto& [c, d] : domains_) spec_.chart.domains[c] = d;
    spec_.chart.periodic.assign(n, false);
    for (std::size_t c : periodic_) spec_.chart.periodic[c] = true;
    try {
      spec_.chart.validate();
    } catch (const InputError& e) {
      fail(0, e.what());
    }

    std::map<std::pair<std::size_t, std::size_t>, Expr> parsed;
    for (const auto& r : upper_) parsed[{r.a, r.b}] = parse_entry(r);
    const auto points = sample_points(spec_.chart, 8, 7);
    for (const auto& r : lower_) {
      const auto it = parsed.find({r.b, r.a});
      const Expr lo = parse_entry(r);
      if (it == parsed.end() || !agree(it->second, lo, points)) {
        fail(r.line, "asymmetric metric: g " + std::to_string(r.a + 1) + " " +
                         std::to_string(r.b + 1) + " differs from g " + std::to_string(r.b + 1) +
                         " " + std::to_string(r.a + 1));
      }
    }
    for (const auto& r : upper_) spec_.entries.push_back({r.a, r.b, r.text});
    return spec_;
  }

  struct Raw {
    std::size_t a, b;
    std::string text;
    std::size_t line;
  };

  Expr parse_entry(const Raw& r) const {
    try {
      return expr::simplify(parse_expr(r.text, spec_.chart, spec_.constants));
    } catch (const ParseError& e) {
      fail(r.line, e.what());
    } catch (const UnknownSymbolError& e) {
      fail(r.line, e.what());
    }
  }

  static bool agree(const Expr& x, const Expr& y, const std::vector<Point>& points) {
    if (expr::structurally_equal(x, y)) return true;
    for (const Point& p : points) {
      const auto u = expr::eval(x, p), v = expr::eval(y, p);
      if (std::abs(u - v) > 1e-12 * (1.0 + std::abs(u))) return false;
    }
    return true;
  }

  std::string_view text_;
  std::string origin_;
  ManifoldSpec spec_;
  std::optional<std::size_t> dim_;
  std::vector<std::string> coords_;
  std::size_t coords_line_ = 0;
  std::size_t signature_line_ = 0;
  std::optional<std::pair<std::size_t, std::size_t>> signature_;
  std::map<std::size_t, Interval> domains_;
  std::set<std::size_t> periodic_;
  std::vector<Raw> upper_, lower_;
};

void check_signature(const ManifoldSpec& spec, const std::string& origin) {
  const MetricField g = spec.metric();
  for (const Point& p : sample_points(spec.chart, 20, 42)) {
    const auto [pos, neg] = signature_at(g, p);
    if (pos != spec.chart.positive || neg != spec.chart.negative) {
      std::ostringstream msg;
      msg << "declared signature " << spec.chart.positive << " " << spec.chart.negative
          << " but the metric has " << pos << " " << neg << " at (";
      for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
      msg << ")";
      throw MetricFileError(origin, 0, msg.str());
    }
  }
}

ManifoldSpec builtin(std::string_view text, std::string description,
                     std::optional<Flatness> expected, std::vector<ReferenceValue> refs) {
  ManifoldSpec s = parse_metric_file(text, "<catalog>");
  s.description = std::move(description);
  s.expected = expected;
  s.references = std::move(refs);
  return s;
}

std::vector<ManifoldSpec> make_catalog() {
  std::vector<ManifoldSpec> c;
  c.push_back(builtin(R"(name euclidean2-cartesian
dim 2
coords x y
signature 2 0
g 1 1 = 1
g 2 2 = 1
)",
                      "Euclidean plane, Cartesian coordinates", Flatness::ClosedFlat,
                      {{"riemann", "0"}}));
  c.push_back(builtin(R"(name euclidean3-cartesian
dim 3
coords x y z
signature 3 0
g 1 1 = 1
g 2 2 = 1
g 3 3 = 1
)",
                      "Euclidean 3-space, Cartesian coordinates", Flatness::ClosedFlat,
                      {{"riemann", "0"}}));
  c.push_back(builtin(R"(name euclidean3-spherical
dim 3
coords r theta phi
signature 3 0
domain r 0.5 3
domain theta 0.2 pi-0.2
domain phi 0 2*pi
periodic phi
g 1 1 = 1
g 2 2 = r^2
g 3 3 = r^2*sin(theta)^2
)",
                      "Euclidean 3-space, spherical coordinates", Flatness::Curved,
                      {{"riemann", "0"}}));
  c.push_back(builtin(R"(name minkowski
dim 4
coords x y z t
signature 3 1
g 1 1 = 1
g 2 2 = 1
g 3 3 = 1
g 4 4 = -1
)",
                      "Minkowski spacetime, Cartesian coordinates", Flatness::ClosedFlat,
                      {{"riemann", "0"}}));
  c.push_back(builtin(R"(name minkowski-cylindrical
dim 4
coords r phi z t
signature 3 1
domain r 0.5 3
domain phi 0 2*pi
periodic phi
g 1 1 = 1
g 2 2 = r^2
g 3 3 = 1
g 4 4 = -1
)",
                      "Minkowski spacetime, cylindrical coordinates", Flatness::Curved,
                      {{"riemann", "0"}}));
  c.push_back(builtin(R"(name sphere2
dim 2
coords theta phi
signature 2 0
const r=1.5
domain theta 0.2 pi-0.2
domain phi 0 2*pi
periodic phi
g 1 1 = r^2
g 2 2 = r^2*sin(theta)^2
)",
                      "2-sphere of radius r", Flatness::Curved,
                      {{"scalar_curvature", "2/r^2", true}}));
  c.push_back(builtin(R"(name schwarzschild
dim 4
coords r theta phi t
signature 3 1
const M=1
domain r 3 10
domain theta 0.3 pi-0.3
domain phi 0 2*pi
domain t 0 10
periodic phi
g 1 1 = 1/(1 - 2*M/r)
g 2 2 = r^2
g 3 3 = r^2*sin(theta)^2
g 4 4 = -(1 - 2*M/r)
)",
                      "Schwarzschild exterior, mass M", Flatness::Curved,
                      {{"ricci", "0"}, {"einstein", "0"}}));
  c.push_back(builtin(R"(name flrw-flat
dim 4
coords x y z t
signature 3 1
domain t 0.5 2
g 1 1 = t^2
g 2 2 = t^2
g 3 3 = t^2
g 4 4 = -1
)",
                      "Spatially flat FLRW with scale factor a(t) = t", Flatness::Curved,
                      {{"scalar_curvature", "6/t^2", true}}));
  c.push_back(builtin(R"(name sheared-plane
dim 2
coords x y
signature 2 0
g 1 1 = 1
g 1 2 = x
g 2 2 = 1 + x^2
)",
                      "Non-diagonal plane metric (dx + x dy)^2 + dy^2", Flatness::Curved,
                      {{"scalar_curvature", "-2", true}}));
  return c;
}

}  // namespace

MetricField ManifoldSpec::metric() const {
  const std::size_t n = chart.dimension();
  std::vector<Expr> comps(n * n, Expr(0.0));
  for (const auto& e : entries) {
    const Expr v = expr::simplify(parse_expr(e.text, chart, constants));
    comps[e.a * n + e.b] = v;
    comps[e.b * n + e.a] = v;
  }
  return MetricField::make(name, chart, constants, std::move(comps));
}

std::pair<std::size_t, std::size_t> signature_at(const MetricField& g, const Point& p) {
  const Eigen::MatrixXd m = metric_at(g, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  std::size_t pos = 0, neg = 0;
  const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
  for (double v : solver.eigenvalues()) {
    if (v > 1e-14 * scale) ++pos;
    if (v < -1e-14 * scale) ++neg;
  }
  return {pos, neg};
}

const std::vector<ManifoldSpec>& catalog() {
  static const std::vector<ManifoldSpec> c = make_catalog();
  return c;
}

const ManifoldSpec* find_manifold(std::string_view name) {
  for (const auto& m : catalog()) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

ManifoldSpec parse_metric_file(std::string_view text, const std::string& origin) {
  ManifoldSpec s = FileParser(text, origin).parse();
  check_signature(s, origin);
  return s;
}

ManifoldSpec load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open metric file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric_file(buf.str(), path);
}

ManifoldSpec resolve_manifold(const std::string& ref) {
  if (const ManifoldSpec* m = find_manifold(ref)) return *m;
  std::ifstream probe(ref);
  if (!probe) {
    throw InputError("unknown manifold '" + ref + "': not a catalog name or a readable file");
  }
  return load_file(ref);
}

}  // namespace takagi
