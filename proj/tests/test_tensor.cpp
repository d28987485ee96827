#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "takagi/manifolds.hpp"
#include "takagi/parser.hpp"
#include "takagi/tensor.hpp"

using namespace takagi;
using expr::Complex;
using expr::Expr;

namespace {

NumTensor random_set_tensor(std::size_t dim, std::size_t rank, std::size_t sets, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  NumTensor t = NumTensor::lower(dim, rank, sets);
  for (auto& c : t.components()) c = {d(rng), d(rng)};
  return t;
}

Eigen::MatrixXcd numeric(const Tensor& t, const Point& p) {
  const NumTensor v = evaluate(t, p);
  Eigen::MatrixXcd m(t.dim(), t.dim());
  for (std::size_t a = 0; a < t.dim(); ++a) {
    for (std::size_t b = 0; b < t.dim(); ++b) m(a, b) = v({a, b});
  }
  return m;
}

MetricField from_text(const char* name) { return find_manifold(name)->metric(); }

}  // namespace

TEST_CASE("set product of the identity factorization is the identity") {
  NumTensor a = NumTensor::lower(3, 1, 3);
  for (std::size_t i = 0; i < 3; ++i) a({i, i}) = 1.0;
  const NumTensor g = set_product(a, a);
  CHECK(g.rank() == 2);
  CHECK_FALSE(g.is_set_indexed());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(g({i, j}) == Complex(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("set product is distributive and swaps with its operands") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const NumTensor a = random_set_tensor(3, 1, 4, rng);
    const NumTensor b = random_set_tensor(3, 2, 4, rng);
    const NumTensor c = random_set_tensor(3, 2, 4, rng);
    CHECK(max_abs_diff(set_product(a, add(b, c)), add(set_product(a, b), set_product(a, c))) <
          1e-13);
    const NumTensor ab = set_product(a, b);
    const NumTensor ba = set_product(b, a);
    double worst = 0.0;
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 3; ++y) {
        for (std::size_t z = 0; z < 3; ++z) {
          worst = std::max(worst, std::abs(ab({x, y, z}) - ba({y, z, x})));
        }
      }
    }
    CHECK(worst == 0.0);
  }
  const NumTensor a = random_set_tensor(3, 1, 4, rng);
  CHECK_THROWS_AS(set_product(a, random_set_tensor(3, 1, 3, rng)), InputError);
  CHECK_THROWS_AS(set_product(a, NumTensor::lower(3, 1)), InputError);
}

TEST_CASE("raising then lowering restores the tensor") {
  const MetricField g = from_text("schwarzschild");
  const Tensor g_inv = invert_metric(g);
  Tensor t = Tensor::lower(4, 2);
  const Chart& c = g.chart;
  t({0, 1}) = parse_expr("r*theta", c);
  t({2, 3}) = parse_expr("sin(phi) + t", c);
  t({3, 3}) = parse_expr("r^2", c);
  const Tensor up = raise_index(t, 0, g_inv);
  CHECK(up.slot_variance(0) == Variance::Upper);
  CHECK(up.slot_variance(1) == Variance::Lower);
  const Tensor back = lower_index(up, 0, g.g);
  for (const Point& p : sample_points(c, 10, 5)) {
    CHECK(max_abs_diff(evaluate(back, p), evaluate(t, p)) < 1e-12);
  }
  CHECK_THROWS_AS(raise_index(up, 0, g_inv), InputError);
}

TEST_CASE("Minkowski raising flips the time component only") {
  const MetricField g = from_text("minkowski");
  const Tensor g_inv = invert_metric(g);
  Tensor v = Tensor::lower(4, 1);
  for (std::size_t a = 0; a < 4; ++a) v({a}) = Expr(double(a + 1));
  const NumTensor up = evaluate(raise_index(v, 0, g_inv), Point{0, 0, 0, 0});
  CHECK(up({0}) == Complex(1.0));
  CHECK(up({1}) == Complex(2.0));
  CHECK(up({2}) == Complex(3.0));
  CHECK(up({3}) == Complex(-4.0));
}

TEST_CASE("the set slot carries no variance") {
  std::mt19937_64 rng(1);
  const NumTensor f = random_set_tensor(2, 2, 2, rng);
  NumTensor g_inv = NumTensor::lower(2, 2);
  g_inv({0, 0}) = g_inv({1, 1}) = 1.0;
  CHECK_THROWS_AS(symmetrize(f, 0, 1), InputError);
  CHECK_THROWS_AS(antisymmetrize(f, 0, 2), InputError);
  CHECK_THROWS_AS(raise_index(f, 0, g_inv), InputError);
  CHECK_THROWS_AS(f.slot_variance(0), InputError);
  CHECK_THROWS_AS(f.check_slot(3), InputError);
  const NumTensor sym = symmetrize(f, 1, 2);
  const NumTensor anti = antisymmetrize(f, 1, 2);
  CHECK(max_abs_diff(add(sym, anti), f) < 1e-15);
  CHECK(sym({1, 0, 1}) == sym({1, 1, 0}));
  CHECK(anti({1, 0, 1}) == -anti({1, 1, 0}));
}

TEST_CASE("contraction needs one upper and one lower slot") {
  const MetricField g = from_text("sphere2");
  const Tensor g_inv = invert_metric(g);
  // g^a_b = delta, so its trace is the dimension.
  const Tensor mixed = raise_index(g.g, 0, g_inv);
  const Tensor trace = contract(mixed, 0, 1);
  CHECK(trace.rank() == 0);
  CHECK(evaluate(trace, Point{1.0, 2.0}).components()[0].real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(contract(g.g, 0, 1), InputError);
}

TEST_CASE("diagonal inverse is the reciprocal") {
  const MetricField g = from_text("sphere2");
  const Tensor inv = invert_metric(g);
  const double r = 1.5, th = 0.9;
  const NumTensor v = evaluate(inv, Point{th, 0.3});
  CHECK(v({0, 0}).real() == doctest::Approx(1 / (r * r)).epsilon(1e-15));
  CHECK(v({1, 1}).real() == doctest::Approx(1 / (r * r * std::sin(th) * std::sin(th))).epsilon(1e-15));
  CHECK(v({0, 1}) == Complex(0.0));
}

TEST_CASE("inverse multiplies back to the identity") {
  for (const char* name : {"schwarzschild", "sheared-plane", "flrw-flat"}) {
    const MetricField g = from_text(name);
    const Tensor inv = invert_metric(g);
    for (const Point& p : sample_points(g.chart, 10, 9)) {
      const Eigen::MatrixXcd m = numeric(g.g, p) * numeric(inv, p);
      CHECK((m - Eigen::MatrixXcd::Identity(g.dim(), g.dim())).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("cofactor inverse of a dense symbolic metric matches Eigen") {
  const Chart c = Chart::make({"x", "y", "z"}, 0, {{-1, 1}, {-1, 1}, {-1, 1}});
  const char* text[3][3] = {{"3 + x^2", "x*y", "sin(z)"},
                            {"x*y", "4 + y^2", "0.5"},
                            {"sin(z)", "0.5", "5 + cos(x)"}};
  std::vector<Expr> comps;
  for (auto& row : text) {
    for (const char* e : row) comps.push_back(parse_expr(e, c));
  }
  const MetricField g = MetricField::make("dense", c, {}, comps);
  CHECK_FALSE(g.is_diagonal());
  const Tensor inv = invert_metric(g);
  for (const Point& p : sample_points(c, 10, 2)) {
    const Eigen::MatrixXcd m = numeric(g.g, p);
    CHECK((numeric(inv, p) - m.inverse()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(expr::eval(determinant(comps, 3), p) - m.determinant()) < 1e-12);
  }
}

TEST_CASE("singular metrics are rejected with the point") {
  const Chart c = Chart::make({"x", "y"}, 0, {{-1, 1}, {-1, 1}});
  const MetricField rank_one =
      MetricField::make("rank-one", c, {}, {Expr(1.0), Expr(1.0), Expr(1.0), Expr(1.0)});
  try {
    invert_metric(rank_one);
    FAIL("expected SingularMetricError");
  } catch (const SingularMetricError& e) {
    CHECK(e.point().size() == 2);
  }
  const MetricField zero_diag = MetricField::make("zero", c, {}, {Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)});
  CHECK_THROWS_AS(invert_metric(zero_diag), SingularMetricError);
}

TEST_CASE("metric construction requires symmetry") {
  const Chart c = Chart::make({"x", "y"}, 0, {{-1, 1}, {-1, 1}});
  const Expr x = parse_expr("x", c);
  CHECK_THROWS_AS(MetricField::make("bad", c, {}, {Expr(1.0), x, Expr(0.0), Expr(1.0)}), InputError);
  CHECK_THROWS_AS(MetricField::make("bad", c, {}, {Expr(1.0)}), InputError);
}
