#include "takagi/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace takagi {

using expr::Complex;
using expr::Expr;

namespace {

double metric_norm(const Tape& g_tape, const Point& x, const Point& u) {
  const std::size_t n = x.size();
  const auto g = g_tape.evaluate(std::span<const Point>(&x, 1));
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) s += g[a * n + b].real() * u[a] * u[b];
  }
  return s;
}

}  // namespace

Trajectory integrate_geodesic(const GeodesicRhs& rhs, const MetricField& g, const Point& x0,
                              const Point& u0, const GeodesicOptions& opts) {
  const std::size_t n = g.dim();
  if (x0.size() != n || u0.size() != n) {
    throw InputError("start point and velocity need " + std::to_string(n) + " components");
  }
  if (!inside_domain(g.chart, x0)) throw InputError("geodesic start lies outside the chart domain");
  const Tape g_tape(g.g.components());

  Trajectory t;
  Point x = x0, u = u0;
  t.s.push_back(0.0);
  t.x.push_back(x);
  t.u.push_back(u);
  t.norm.push_back(metric_norm(g_tape, x, u));

  // State y = (x, u); dy/ds = (u, rhs(x, u)).
  std::vector<Point> kx(4, Point(n)), ku(4, Point(n));
  Point xs(n), us(n);
  const double h = opts.h;
  auto stage = [&](std::size_t k, const Point& xi, const Point& ui) {
    double imag = 0.0;
    kx[k] = ui;
    rhs(xi, ui, ku[k], imag);
    t.max_discarded_imag = std::max(t.max_discarded_imag, imag);
  };
  for (std::size_t step = 0; step < opts.steps; ++step) {
    stage(0, x, u);
    for (std::size_t c = 0; c < n; ++c) {
      xs[c] = x[c] + 0.5 * h * kx[0][c];
      us[c] = u[c] + 0.5 * h * ku[0][c];
    }
    stage(1, xs, us);
    for (std::size_t c = 0; c < n; ++c) {
      xs[c] = x[c] + 0.5 * h * kx[1][c];
      us[c] = u[c] + 0.5 * h * ku[1][c];
    }
    stage(2, xs, us);
    for (std::size_t c = 0; c < n; ++c) {
      xs[c] = x[c] + h * kx[2][c];
      us[c] = u[c] + h * ku[2][c];
    }
    stage(3, xs, us);
    for (std::size_t c = 0; c < n; ++c) {
      x[c] += h / 6.0 * (kx[0][c] + 2.0 * (kx[1][c] + kx[2][c]) + kx[3][c]);
      u[c] += h / 6.0 * (ku[0][c] + 2.0 * (ku[1][c] + ku[2][c]) + ku[3][c]);
    }
    if (!inside_domain(g.chart, x)) {
      t.left_domain = true;
      break;
    }
    t.s.push_back(h * static_cast<double>(step + 1));
    t.x.push_back(x);
    t.u.push_back(u);
    t.norm.push_back(metric_norm(g_tape, x, u));
  }
  return t;
}

GeodesicRhs classical_geodesic_rhs(const Connection& conn) {
  const std::size_t n = conn.mixed.dim();
  auto tape = std::make_shared<Tape>(conn.mixed.components());
  return [tape, n](const Point& x, const Point& u, Point& du, double& imag) {
    const auto gam = tape->evaluate(std::span<const Point>(&x, 1));
    imag = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) acc -= gam[(c * n + a) * n + b] * (u[a] * u[b]);
      }
      du[c] = acc.real();
      imag = std::max(imag, std::abs(acc.imag()));
    }
  };
}

GeodesicRhs factored_geodesic_rhs(GeometryBuilder& geo, const FormSet& a, const Tensor& f) {
  const std::size_t n = geo.dim();
  const std::size_t m = a.sets;
  const Tensor d = geo.symmetric_derivative(a);
  std::vector<Expr> roots;
  for (const Tensor* t : {&geo.inverse(), &a.components, &d, &f}) {
    roots.insert(roots.end(), t->components().begin(), t->components().end());
  }
  auto tape = std::make_shared<Tape>(roots);
  return [tape, n, m](const Point& x, const Point& u, Point& du, double& imag) {
    const auto v = tape->evaluate(std::span<const Point>(&x, 1));
    const Complex* gi = v.data();
    const Complex* av = gi + n * n;
    const Complex* dv = av + m * n;
    const Complex* fv = dv + m * n * n;
    std::vector<Complex> acc(n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < m; ++i) {
      Complex q{0.0, 0.0};  // ∂_(a A_Ib) u^a u^b
      Complex p{0.0, 0.0};  // A_Ia u^a
      for (std::size_t x1 = 0; x1 < n; ++x1) {
        p += av[i * n + x1] * u[x1];
        for (std::size_t y = 0; y < n; ++y) q += dv[(i * n + x1) * n + y] * (u[x1] * u[y]);
      }
      for (std::size_t c = 0; c < n; ++c) {
        Complex up{0.0, 0.0};  // A_I^c
        Complex fu{0.0, 0.0};  // F_I^c_b u^b
        for (std::size_t e = 0; e < n; ++e) {
          up += gi[c * n + e] * av[i * n + e];
          for (std::size_t b = 0; b < n; ++b) fu += gi[c * n + e] * fv[(i * n + e) * n + b] * u[b];
        }
        acc[c] += -up * q + p * fu;
      }
    }
    imag = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      du[c] = acc[c].real();
      imag = std::max(imag, std::abs(acc[c].imag()));
    }
  };
}

double norm_drift(const Trajectory& t) {
  if (t.norm.empty()) return 0.0;
  const double n0 = t.norm.front();
  const double scale = std::abs(n0) > 1e-12 ? std::abs(n0) : 1.0;
  double worst = 0.0;
  for (double v : t.norm) worst = std::max(worst, std::abs(v - n0) / scale);
  return worst;
}

GeodesicComparison compare_geodesics(GeometryBuilder& geo, const FormSet& a, const Tensor& f,
                                     const Connection& classical, const Point& x0,
                                     const Point& u0, const GeodesicOptions& opts) {
  GeodesicComparison c;
  c.classical = integrate_geodesic(classical_geodesic_rhs(classical), geo.metric(), x0, u0, opts);
  c.factored = integrate_geodesic(factored_geodesic_rhs(geo, a, f), geo.metric(), x0, u0, opts);
  const std::size_t steps = std::min(c.classical.x.size(), c.factored.x.size());
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < x0.size(); ++i) {
      c.max_divergence = std::max({c.max_divergence, std::abs(c.classical.x[k][i] - c.factored.x[k][i]),
                                   std::abs(c.classical.u[k][i] - c.factored.u[k][i])});
    }
  }
  c.norm_drift = std::max(norm_drift(c.classical), norm_drift(c.factored));
  return c;
}

}  // namespace takagi
