#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "takagi/manifolds.hpp"

using namespace takagi;

namespace {

const char* kSphere = R"(# round sphere
name   sphere
dim    2
coords theta phi
signature 2 0
const  r=2
domain theta 0.2 pi-0.2
domain phi 0 2*pi
periodic phi
g 1 1 = r^2
g 2 2 = r^2*sin(theta)^2
)";

std::size_t error_line(const std::string& text) {
  try {
    parse_metric_file(text, "t.metric");
  } catch (const MetricFileError& e) {
    return e.line();
  }
  FAIL("expected MetricFileError");
  return 0;
}

std::string error_text(const std::string& text) {
  try {
    parse_metric_file(text, "t.metric");
  } catch (const MetricFileError& e) {
    return e.what();
  }
  FAIL("expected MetricFileError");
  return {};
}

std::string header(const char* coords = "x y", const char* sig = "2 0") {
  return std::string("dim 2\ncoords ") + coords + "\nsignature " + sig + "\n";
}

}  // namespace

TEST_CASE("metric file with constants, domains and periodic coordinates") {
  const ManifoldSpec s = parse_metric_file(kSphere);
  CHECK(s.name == "sphere");
  CHECK(s.chart.coordinates == std::vector<std::string>{"theta", "phi"});
  CHECK(s.chart.positive == 2);
  CHECK(s.chart.negative == 0);
  CHECK(s.chart.domains[0].lo == doctest::Approx(0.2));
  CHECK(s.chart.domains[0].hi == doctest::Approx(std::numbers::pi - 0.2));
  CHECK(s.chart.domains[1].hi == doctest::Approx(2 * std::numbers::pi));
  CHECK_FALSE(s.chart.periodic[0]);
  CHECK(s.chart.periodic[1]);
  REQUIRE(s.constants.size() == 1);
  CHECK(s.constants[0].value == 2.0);
  const MetricField g = s.metric();
  CHECK(g.is_diagonal());
  const Point p{1.0, 0.5};
  CHECK(expr::eval(g(1, 1), p).real() == doctest::Approx(4 * std::sin(1.0) * std::sin(1.0)));
  CHECK(expr::eval(g(0, 1), p) == expr::Complex(0.0));
}

TEST_CASE("defaults and symmetric lower entries") {
  const ManifoldSpec s = parse_metric_file(header() + "g 1 1 = 1\ng 1 2 = x\ng 2 1 = x\ng 2 2 = 1 + x^2\n");
  CHECK(s.name == "<input>");
  for (const Interval& d : s.chart.domains) {
    CHECK(d.lo == -1.0);
    CHECK(d.hi == 1.0);
  }
  const MetricField g = s.metric();
  CHECK_FALSE(g.is_diagonal());
  CHECK(expr::eval(g(1, 0), Point{0.3, 0.0}).real() == doctest::Approx(0.3));
  // Numerically equal but structurally different lower entry.
  CHECK_NOTHROW(parse_metric_file(header() + "g 1 1 = 2\ng 1 2 = 2*x\ng 2 1 = x+x\ng 2 2 = 9\n"));
}

TEST_CASE("loader errors carry the line number") {
  CHECK(error_line(header() + "g 1 1 = 1\n\ng 2 2 = 1 +\n") == 6);
  CHECK(error_line(header() + "g 1 1 = 1\ng 3 3 = 1\ng 2 2 = 1\n") == 5);
  CHECK(error_line(header() + "g 1 1 = 1\ng 2 2 = q\n") == 5);
  CHECK(error_line(header() + "g 1 1 = 1\ng 1 1 = 2\ng 2 2 = 1\n") == 5);
  CHECK(error_line(header() + "colour blue\n") == 4);
  CHECK(error_line(header() + "domain z 0 1\n") == 4);
  CHECK(error_line(header() + "domain x 1 0\ng 1 1 = 1\ng 2 2 = 1\n") == 4);
  CHECK(error_line("dim 2\ncoords x y z\nsignature 2 0\n") == 2);
  CHECK(error_line(header("x y", "1 0") + "g 1 1 = 1\ng 2 2 = 1\n") == 3);
}

TEST_CASE("loader error messages") {
  const std::string asym = error_text(header() + "g 1 1 = 1\ng 1 2 = x\ng 2 1 = y\ng 2 2 = 2\n");
  CHECK(asym.find("t.metric:6") != std::string::npos);
  CHECK(asym.find("asymmetric metric: g 2 1 differs from g 1 2") != std::string::npos);
  CHECK(error_text("dim 3\ncoords x y\nsignature 3 0\n").find("dimension mismatch") !=
        std::string::npos);
  CHECK(error_text("dim 2\ncoords x y\ng 1 1 = 1\n").find("signature") != std::string::npos);
  const std::string sig = error_text(header("x y", "1 1") + "g 1 1 = 1\ng 2 2 = 1\n");
  CHECK(sig.find("declared signature 1 1 but the metric has 2 0") != std::string::npos);
}

TEST_CASE("numeric faults in a file") {
  CHECK_THROWS_AS(parse_metric_file(header() + "g 1 1 = 1\ng 2 2 = 2 + sqrt(x)\n"), EvalError);
}

TEST_CASE("resolving names and paths") {
  CHECK(resolve_manifold("sphere2").name == "sphere2");
  try {
    resolve_manifold("/nonexistent/nowhere.metric");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("unknown manifold") != std::string::npos);
  }
  CHECK(find_manifold("nope") == nullptr);
}

TEST_CASE("catalog signatures and expectations") {
  for (const ManifoldSpec& spec : catalog()) {
    CAPTURE(spec.name);
    const MetricField g = spec.metric();
    CHECK(spec.expected.has_value());
    CHECK(g.dim() == spec.chart.dimension());
    for (const Point& p : sample_points(spec.chart, 20, 42)) {
      const auto [pos, neg] = signature_at(g, p);
      CHECK(pos == spec.chart.positive);
      CHECK(neg == spec.chart.negative);
    }
  }
  const std::size_t lorentzian =
      std::count_if(catalog().begin(), catalog().end(), [](const ManifoldSpec& s) { return s.chart.negative == 1; });
  CHECK(lorentzian >= 3);
  CHECK(find_manifold("minkowski-cylindrical")->expected == Flatness::Curved);
  CHECK(find_manifold("euclidean3-cartesian")->expected == Flatness::ClosedFlat);
}
