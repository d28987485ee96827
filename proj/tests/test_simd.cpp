#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "doctest.h"
#include "takagi/errors.hpp"
#include "takagi/parser.hpp"
#include "takagi/tape.hpp"

using namespace takagi;
using takagi::expr::Complex;
using takagi::expr::Expr;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<const simd::LaneKernels*> variants() {
  std::vector<const simd::LaneKernels*> out;
  for (auto isa : {simd::Isa::Scalar, simd::Isa::Avx2, simd::Isa::Neon}) {
    if (const auto* k = simd::kernels_for(isa)) out.push_back(k);
  }
  return out;
}

// Awkward lane counts exercise the vector bodies and the scalar tails.
constexpr std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 64, 67};

struct Lanes {
  std::vector<double> ar, ai, br, bi;
};

Lanes random_lanes(std::size_t n, std::mt19937_64& rng, bool some_real) {
  std::uniform_real_distribution<double> u(-3, 3);
  Lanes l;
  for (std::size_t k = 0; k < n; ++k) {
    l.ar.push_back(u(rng));
    l.br.push_back(u(rng) + 3.5);
    const bool real = some_real && k % 3 == 0;
    l.ai.push_back(real ? 0.0 : u(rng));
    l.bi.push_back(real ? 0.0 : u(rng));
  }
  return l;
}

}  // namespace

TEST_CASE("scalar reference is always available") {
  CHECK(simd::available(simd::Isa::Scalar));
  CHECK(simd::kernels_for(simd::Isa::Scalar) == &simd::scalar_kernels());
  CHECK(std::string(simd::isa_name(simd::active_kernels().isa)).size() > 0);
}

TEST_CASE("complex lane kernels are bit-identical to the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(1);
  for (const auto* k : variants()) {
    for (std::size_t n : kLengths) {
      const Lanes l = random_lanes(n, rng, true);
      std::vector<double> r1(n), i1(n), r2(n), i2(n);
      const std::pair<simd::BinaryComplexFn, simd::BinaryComplexFn> pairs[] = {
          {ref.add, k->add}, {ref.sub, k->sub}, {ref.mul, k->mul}, {ref.div, k->div}};
      for (auto [f, g] : pairs) {
        f(l.ar.data(), l.ai.data(), l.br.data(), l.bi.data(), r1.data(), i1.data(), n);
        g(l.ar.data(), l.ai.data(), l.br.data(), l.bi.data(), r2.data(), i2.data(), n);
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(same_bits(r1[j], r2[j]));
          CHECK(same_bits(i1[j], i2[j]));
        }
      }
      ref.neg(l.ar.data(), l.ai.data(), r1.data(), i1.data(), n);
      k->neg(l.ar.data(), l.ai.data(), r2.data(), i2.data(), n);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(same_bits(r1[j], r2[j]));
        CHECK(same_bits(i1[j], i2[j]));
      }
    }
  }
}

TEST_CASE("real lane kernels are bit-identical to the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(2);
  for (const auto* k : variants()) {
    for (std::size_t n : kLengths) {
      const Lanes l = random_lanes(n, rng, false);
      std::vector<double> c1(n), c2(n);
      const std::pair<simd::BinaryRealFn, simd::BinaryRealFn> pairs[] = {
          {ref.add_real, k->add_real},
          {ref.sub_real, k->sub_real},
          {ref.mul_real, k->mul_real},
          {ref.div_real, k->div_real}};
      for (auto [f, g] : pairs) {
        f(l.ar.data(), l.br.data(), c1.data(), n);
        g(l.ar.data(), l.br.data(), c2.data(), n);
        for (std::size_t j = 0; j < n; ++j) CHECK(same_bits(c1[j], c2[j]));
      }
    }
  }
}

TEST_CASE("complex division matches the real quotient on real lanes") {
  const auto& ref = simd::scalar_kernels();
  const double ar[] = {1.0, 2.0}, ai[] = {0.0, 0.0}, br[] = {3.0, -7.0}, bi[] = {0.0, 0.0};
  double cr[2], ci[2];
  ref.div(ar, ai, br, bi, cr, ci, 2);
  CHECK(same_bits(cr[0], 1.0 / 3.0));
  CHECK(same_bits(cr[1], 2.0 / -7.0));
  CHECK(ci[0] == 0.0);
}

TEST_CASE("reductions agree across variants and propagate NaN") {
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const auto* k : variants()) {
    for (std::size_t n : kLengths) {
      std::vector<Complex> a(n), b(n);
      for (std::size_t j = 0; j < n; ++j) {
        a[j] = {u(rng), u(rng)};
        b[j] = {u(rng), u(rng)};
      }
      const auto* pa = reinterpret_cast<const double*>(a.data());
      const auto* pb = reinterpret_cast<const double*>(b.data());
      CHECK(same_bits(ref.max_abs(pa, n), k->max_abs(pa, n)));
      CHECK(same_bits(ref.max_abs_diff(pa, pb, n), k->max_abs_diff(pa, pb, n)));
      double oracle = 0;
      for (std::size_t j = 0; j < n; ++j) oracle = std::max(oracle, std::abs(a[j] - b[j]));
      CHECK(k->max_abs_diff(pa, pb, n) == doctest::Approx(oracle).epsilon(1e-15));
      if (n > 0) {
        for (std::size_t pos : {std::size_t{0}, n / 2, n - 1}) {
          auto c = a;
          c[pos] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
          CHECK(std::isnan(k->max_abs(reinterpret_cast<const double*>(c.data()), n)));
        }
      }
    }
  }
}

TEST_CASE("tape matches the recursive evaluator on every variant") {
  const Chart c = Chart::make({"x", "y", "z"}, 0, {{0.2, 1.2}, {0.3, 1.5}, {-1, 1}});
  std::vector<Expr> roots;
  for (const char* s :
       {"x^2*sin(y) - z/(x + y)", "sqrt(z - 2)*x + 1i*y", "exp(x*y)^(-3/2)*cosh(z)",
        "log(x)*tan(y) - sinh(z)^2", "(x + 2i)/(y - 1i) + (x/y)", "sqrt(x)", "3.25", "z",
        "-(x*y*z) + x*y*z*2"}) {
    roots.push_back(parse_expr(s, c));
  }
  roots.push_back(expr::differentiate(roots[0], 1));
  roots.push_back(expr::differentiate(roots[4], 0));
  const Tape tape(roots);
  CHECK(tape.root_count() == roots.size());
  CHECK(tape.required_dimension() == 3);
  CHECK(tape.slot_count() <= tape.instruction_count());

  for (std::size_t count : {std::size_t{1}, std::size_t{5}, std::size_t{20}, std::size_t{150}}) {
    const auto pts = sample_points(c, count, 9);
    const auto ref = tape.evaluate(pts, simd::scalar_kernels());
    for (std::size_t r = 0; r < roots.size(); ++r) {
      for (std::size_t l = 0; l < count; ++l) {
        const Complex v = expr::eval(roots[r], pts[l]);
        const Complex t = ref[r * count + l];
        INFO("root " << r << " lane " << l);
        CHECK(same_bits(v.real(), t.real()));
        CHECK(same_bits(v.imag(), t.imag()));
      }
    }
    for (const auto* k : variants()) {
      const auto out = tape.evaluate(pts, *k);
      for (std::size_t j = 0; j < out.size(); ++j) {
        CHECK(same_bits(out[j].real(), ref[j].real()));
        CHECK(same_bits(out[j].imag(), ref[j].imag()));
      }
    }
  }
}

TEST_CASE("tape merges common subexpressions") {
  const Chart c = Chart::make({"x"}, 0, {{0, 1}});
  const Expr a = parse_expr("sin(x) + sin(x)*sin(x)", c);
  const Tape t(std::vector<Expr>{a, a, parse_expr("sin(x)", c)});
  // x, sin(x), sin(x)*sin(x), sum
  CHECK(t.instruction_count() == 4);
}

TEST_CASE("tape reports domain errors") {
  const Chart c = Chart::make({"r"}, 0, {{1, 10}});
  const Tape t(std::vector<Expr>{parse_expr("1/(r - 2)", c)});
  const std::vector<Point> pts{{3.0}, {2.0}};
  CHECK_THROWS_AS(t.evaluate(pts), EvalError);
  const Tape l(std::vector<Expr>{parse_expr("log(r - 3)", c)});
  CHECK_THROWS_AS(l.evaluate(pts), EvalError);
  const std::vector<Point> empty_point{{}};
  CHECK_THROWS_AS(t.evaluate(empty_point), InputError);
}
