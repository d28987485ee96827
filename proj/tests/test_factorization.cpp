#include <cmath>
#include <numbers>

#include "doctest.h"
#include "takagi/factorization.hpp"
#include "takagi/manifolds.hpp"
#include "takagi/parser.hpp"

using namespace takagi;
using expr::Complex;
using expr::Expr;

namespace {

MetricField metric(const char* name) { return find_manifold(name)->metric(); }

MetricField plane(const char* g11, const char* g12, const char* g22) {
  const Chart c = Chart::make({"x", "y"}, 0, {{-1, 1}, {-1, 1}});
  const Expr off = parse_expr(g12, c);
  return MetricField::make("plane", c, {}, {parse_expr(g11, c), off, off, parse_expr(g22, c)});
}

double reconstruction(const ComplexMatrix& v, const Eigen::MatrixXd& g) {
  return (v * v.transpose() - g.cast<Complex>()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("diagonal factorization of the 2-sphere") {
  const MetricField g = metric("sphere2");
  const FormSet a = factor_diagonal(g);
  CHECK(a.sets == 2);
  CHECK(a(0, 1).is_zero());
  CHECK(a(1, 0).is_zero());
  const double r = 1.5;
  for (const Point& p : sample_points(g.chart, 10, 1)) {
    CHECK(expr::eval(a(0, 0), p) == Complex(r));
    CHECK(std::abs(expr::eval(a(1, 1), p) - Complex(r * std::sin(p[0]))) < 1e-15);
  }
}

TEST_CASE("timelike forms carry +i") {
  const FormSet a = factor_diagonal(metric("minkowski"));
  CHECK(a(3, 3).is_constant());
  CHECK(a(3, 3).constant_value() == Complex(0.0, 1.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(a(i, i).constant_value() == Complex(1.0));
  const FormSet s = factor_diagonal(metric("schwarzschild"));
  const Complex v = expr::eval(s(3, 3), Point{4.0, 1.0, 1.0, 1.0});
  CHECK(v.real() == doctest::Approx(0.0));
  CHECK(v.imag() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("identity metric gives the coordinate differentials") {
  const FormSet a = factor_diagonal(metric("euclidean3-cartesian"));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t b = 0; b < 3; ++b) {
      CHECK(a(i, b).is_constant());
      CHECK(a(i, b).constant_value() == Complex(i == b ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("diagonal factorization rejects off-diagonal metrics") {
  CHECK_THROWS_AS(factor_diagonal(metric("sheared-plane")), InputError);
}

TEST_CASE("LDL of a diagonal metric reproduces the diagonal factorization") {
  for (const char* name : {"sphere2", "schwarzschild", "flrw-flat"}) {
    const MetricField g = metric(name);
    const FormSet d = factor_diagonal(g);
    const FormSet l = factor_ldl(g);
    for (const Point& p : sample_points(g.chart, 5, 3)) {
      CHECK((d.at(p) - l.at(p)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("LDL of the sheared plane") {
  const MetricField g = metric("sheared-plane");
  const LdlFactors f = ldl_decompose(g);
  CHECK(f.order == std::vector<std::size_t>{0, 1});
  const auto pts = sample_points(g.chart, 20, 4);
  for (const Point& p : pts) {
    const double x = p[0];
    CHECK(expr::eval(f.l[0], p) == Complex(1.0));
    CHECK(expr::eval(f.l[1], p) == Complex(0.0));
    CHECK(std::abs(expr::eval(f.l[2], p) - Complex(x)) < 1e-15);
    CHECK(expr::eval(f.l[3], p) == Complex(1.0));
    CHECK(std::abs(expr::eval(f.d[0], p) - 1.0) < 1e-15);
    CHECK(std::abs(expr::eval(f.d[1], p) - 1.0) < 1e-12);
  }
  const FactorizationReport rep = verify_factorization(factor_ldl(g), g, pts);
  CHECK(rep.max_residual <= 1e-12);
  CHECK(rep.pass());
}

TEST_CASE("zero pivot") {
  const MetricField hyperbolic = plane("0", "1", "1");
  try {
    ldl_decompose(hyperbolic);
    FAIL("expected ZeroPivotError");
  } catch (const ZeroPivotError& e) {
    CHECK(e.pivot() == 0);
  }
  const FormSet a = factor_ldl(hyperbolic, Pivoting::Symmetric);
  CHECK(a.pivot_order == std::vector<std::size_t>{1, 0});
  CHECK(verify_factorization(a, hyperbolic, sample_points(hyperbolic.chart, 20, 42)).pass());

  // Both diagonal entries vanish: no symmetric swap helps.
  CHECK_THROWS_AS(factor_ldl(plane("0", "1", "0"), Pivoting::Symmetric), ZeroPivotError);
}

TEST_CASE("numeric Takagi on explicit matrices") {
  const TakagiResult id = takagi_decompose(Eigen::Matrix3d::Identity());
  CHECK(reconstruction(id.v, Eigen::Matrix3d::Identity()) <= 1e-15);

  Eigen::Matrix2d g;
  g << 4, 0, 0, -9;
  const TakagiResult r = takagi_decompose(g);
  CHECK(reconstruction(r.v, g) <= 1e-14);
  CHECK(std::abs(r.v(0, 0) - Complex(2.0)) < 1e-15);
  CHECK(std::abs(r.v(1, 1) - Complex(0.0, 3.0)) < 1e-15);
  CHECK(std::abs(r.v(0, 1)) == 0.0);
  CHECK(r.singular_values(0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(r.singular_values(1) == doctest::Approx(2.0).epsilon(1e-15));

  Eigen::Matrix2d singular;
  singular << 1, 1, 1, 1;
  CHECK_THROWS_AS(takagi_decompose(singular), SingularMetricError);
}

TEST_CASE("numeric Takagi at a Schwarzschild point") {
  const MetricField g = metric("schwarzschild");
  const Point p{4.0, std::numbers::pi / 3, 0.5, 1.0};
  const Eigen::MatrixXd m = metric_at(g, p);
  const TakagiResult r = takagi_decompose(m);
  CHECK(reconstruction(r.v, m) <= 1e-10);
  // Singular values of V are the square roots of |eigenvalues of g|.
  Eigen::VectorXd expected = m.diagonal().cwiseAbs().cwiseSqrt();
  std::sort(expected.data(), expected.data() + expected.size(), std::greater<>());
  CHECK((r.singular_values - expected).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(reconstruction(factor_takagi_numeric(g, p), m) <= 1e-10);
}

TEST_CASE("numeric Takagi of a dense symmetric matrix") {
  Eigen::Matrix3d g;
  g << 2, 0.3, -0.5, 0.3, -1, 0.2, -0.5, 0.2, 0.7;
  const TakagiResult r = takagi_decompose(g);
  CHECK(reconstruction(r.v, g) <= 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  Eigen::VectorXd expected = es.eigenvalues().cwiseAbs().cwiseSqrt();
  std::sort(expected.data(), expected.data() + expected.size(), std::greater<>());
  CHECK((r.singular_values - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("a corrupted form is localized") {
  const MetricField g = metric("sphere2");
  FormSet a = factor_diagonal(g);
  a.components({1, 1}) = a(1, 1) * Expr(1.01);
  const auto pts = sample_points(g.chart, 20, 42);
  const FactorizationReport rep = verify_factorization(a, g, pts);
  CHECK_FALSE(rep.pass());
  CHECK(rep.worst_a == 1);
  CHECK(rep.worst_b == 1);
  CHECK(rep.entry_residual[0] == 0.0);
  CHECK(rep.entry_residual[1] == 0.0);
  CHECK(rep.entry_residual[2] == 0.0);
  double largest = 0.0;
  for (const Point& p : pts) largest = std::max(largest, std::abs(expr::eval(g(1, 1), p)));
  CHECK(rep.entry_residual[3] == doctest::Approx((1.01 * 1.01 - 1.0) * largest).epsilon(1e-12));
}

TEST_CASE("dependent forms fail the determinant bound") {
  const MetricField g = metric("euclidean2-cartesian");
  FormSet a = factor_diagonal(g);
  a.components({1, 0}) = Expr(1.0);
  a.components({1, 1}) = Expr(0.0);
  const FactorizationReport rep = verify_factorization(a, g, sample_points(g.chart, 5, 1));
  CHECK_FALSE(rep.det_ok);
  CHECK(rep.min_abs_det == 0.0);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("every strategy reconstructs every catalog metric with orthogonal forms") {
  for (const ManifoldSpec& spec : catalog()) {
    const MetricField g = spec.metric();
    const auto pts = sample_points(g.chart, 20, 42);
    for (Strategy s : {Strategy::Diagonal, Strategy::Ldl, Strategy::Numeric}) {
      if (s == Strategy::Diagonal && !g.is_diagonal()) continue;
      CAPTURE(spec.name);
      CAPTURE(strategy_name(s));
      const FormSet a = factor(g, s);
      const FactorizationReport rep = verify_factorization(a, g, pts);
      CHECK(rep.max_residual <= 1e-10);
      CHECK(rep.det_ok);
      for (const Point& p : pts) CHECK(orthogonality_residual(a.at(p), metric_at(g, p)) <= 1e-9);
    }
  }
}

TEST_CASE("strategy names round trip and the gauge hook is the identity") {
  for (Strategy s : {Strategy::Diagonal, Strategy::Ldl, Strategy::Numeric}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
  CHECK_FALSE(parse_strategy("cholesky"));
  const MetricField g = metric("sphere2");
  const FormSet a = factor_diagonal(g);
  const FormSet b = apply_gauge(a, Gauge::None);
  CHECK(std::string(gauge_name(b.gauge)) == "none");
  const Point p{1.0, 2.0};
  CHECK((a.at(p) - b.at(p)).cwiseAbs().maxCoeff() == 0.0);
}
