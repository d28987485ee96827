#include "takagi/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "takagi/detail/scalar_ops.hpp"

namespace takagi {

using expr::Complex;
using expr::Expr;
using expr::Kind;
using expr::Rational;

const char* strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::Diagonal: return "diagonal";
    case Strategy::Ldl: return "ldl";
    case Strategy::Numeric: return "numeric";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "diagonal") return Strategy::Diagonal;
  if (name == "ldl") return Strategy::Ldl;
  if (name == "numeric") return Strategy::Numeric;
  return std::nullopt;
}

const char* gauge_name(Gauge g) noexcept {
  switch (g) {
    case Gauge::None: return "none";
  }
  return "?";
}

FormSet apply_gauge(FormSet a, Gauge g) {
  a.gauge = g;
  return a;
}

ComplexMatrix FormSet::at(const Point& p) const {
  if (!symbolic()) return pointwise(p);
  const std::size_t n = chart.dimension();
  ComplexMatrix a(sets, n);
  expr::Evaluator ev(p);
  for (std::size_t i = 0; i < sets; ++i) {
    for (std::size_t c = 0; c < n; ++c) a(i, c) = ev(components({i, c}));
  }
  return a;
}

namespace {

// Square root taken factor by factor: even powers come out of the root, so
// sqrt(r^2 sin(t)^2) = r sin(t). Any sign choice per form still squares back
// to the same metric; this one keeps the forms smooth. Constants use the
// principal root, so negative diagonal entries give +i.
Expr form_root(const Expr& e) {
  if (e.is_constant()) {
    Complex v;
    detail::cpow(e.constant_value(), 1, 2, v);
    return Expr::constant(v);
  }
  std::vector<Expr> factors;
  if (e.kind() == Kind::Product) {
    factors.assign(e.children().begin(), e.children().end());
  } else {
    factors.push_back(e);
  }
  std::vector<Expr> outside;
  std::vector<Expr> inside;
  for (const Expr& f : factors) {
    if (f.is_constant()) {
      outside.push_back(form_root(f));
    } else if (f.kind() == Kind::Power && f.node().exponent.is_integer() &&
               f.node().exponent.num() % 2 == 0) {
      outside.push_back(expr::pow(f.children()[0], Rational(f.node().exponent.num() / 2)));
    } else {
      inside.push_back(f);
    }
  }
  if (!inside.empty()) outside.push_back(expr::sqrt(expr::product(std::move(inside))));
  return expr::product(std::move(outside));
}

std::vector<Point> default_points(const Chart& chart, std::span<const Point> given) {
  if (!given.empty()) return {given.begin(), given.end()};
  return sample_points(chart, 20, 42);
}

bool vanishes(const Expr& e, std::span<const Point> points, double scale) {
  const Expr s = expr::simplify(e);
  if (s.is_zero()) return true;
  for (const Point& p : points) {
    if (std::abs(expr::eval(s, p)) > 1e-13 * scale) return false;
  }
  return true;
}

}  // namespace

FormSet factor_diagonal(const MetricField& g) {
  if (!g.is_diagonal()) {
    throw InputError("diagonal factorization needs a diagonal metric; use the ldl strategy");
  }
  const std::size_t n = g.dim();
  FormSet f;
  f.chart = g.chart;
  f.strategy = Strategy::Diagonal;
  f.sets = n;
  f.components = Tensor::lower(n, 1, n);
  for (std::size_t a = 0; a < n; ++a) f.components({a, a}) = form_root(g(a, a));
  return f;
}

LdlFactors ldl_decompose(const MetricField& g, Pivoting pivoting,
                         std::span<const Point> check_points) {
  const std::size_t n = g.dim();
  const std::vector<Point> points = default_points(g.chart, check_points);
  double scale = 1.0;
  for (const Point& p : points) {
    expr::Evaluator ev(p);
    for (const Expr& c : g.g.components()) scale = std::max(scale, std::abs(ev(c)));
  }

  LdlFactors r;
  r.n = n;
  r.l.assign(n * n, Expr(0.0));
  r.d.assign(n, Expr(0.0));
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  auto h = [&](std::size_t i, std::size_t j) -> const Expr& { return g(r.order[i], r.order[j]); };
  auto schur_diagonal = [&](std::size_t i, std::size_t j) {
    std::vector<Expr> terms{h(i, i)};
    for (std::size_t k = 0; k < j; ++k) terms.push_back(-(r.l[i * n + k] * r.l[i * n + k] * r.d[k]));
    return expr::sum(std::move(terms));
  };

  for (std::size_t j = 0; j < n; ++j) {
    Expr dj = schur_diagonal(j, j);
    if (vanishes(dj, points, scale)) {
      if (pivoting == Pivoting::None) throw ZeroPivotError(j);
      std::size_t swap_with = n;
      for (std::size_t i = j + 1; i < n; ++i) {
        Expr di = schur_diagonal(i, j);
        if (!vanishes(di, points, scale)) {
          swap_with = i;
          dj = di;
          break;
        }
      }
      if (swap_with == n) throw ZeroPivotError(j);
      std::swap(r.order[j], r.order[swap_with]);
      for (std::size_t k = 0; k < j; ++k) std::swap(r.l[j * n + k], r.l[swap_with * n + k]);
    }
    r.d[j] = expr::simplify(dj);
    r.l[j * n + j] = Expr(1.0);
    const Expr inv = expr::pow(r.d[j], Rational(-1));
    for (std::size_t i = j + 1; i < n; ++i) {
      std::vector<Expr> terms{h(i, j)};
      for (std::size_t k = 0; k < j; ++k) {
        terms.push_back(-(r.l[i * n + k] * r.l[j * n + k] * r.d[k]));
      }
      r.l[i * n + j] = expr::simplify(expr::sum(std::move(terms)) * inv);
    }
  }
  return r;
}

FormSet factor_ldl(const MetricField& g, Pivoting pivoting, std::span<const Point> check_points) {
  const LdlFactors r = ldl_decompose(g, pivoting, check_points);
  const std::size_t n = r.n;
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[r.order[i]] = i;
  FormSet f;
  f.chart = g.chart;
  f.strategy = Strategy::Ldl;
  f.sets = n;
  f.pivot_order = r.order;
  f.components = Tensor::lower(n, 1, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Expr root = form_root(r.d[k]);
    for (std::size_t a = 0; a < n; ++a) {
      f.components({k, a}) = r.l[position[a] * n + k] * root;
    }
  }
  return f;
}

Eigen::MatrixXd metric_at(const MetricField& g, const Point& p) {
  const std::size_t n = g.dim();
  Eigen::MatrixXd m(n, n);
  expr::Evaluator ev(p);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Complex v = ev(g(a, b));
      if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real()))) {
        throw EvalError("metric component is not real", expr::describe(g(a, b)));
      }
      m(a, b) = v.real();
    }
  }
  return m;
}

TakagiResult takagi_decompose(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
  if (solver.info() != Eigen::Success) throw ConvergenceError("eigensolver did not converge");
  const Eigen::VectorXd lambda = solver.eigenvalues();
  const Eigen::MatrixXd q = solver.eigenvectors();
  const double largest = lambda.cwiseAbs().maxCoeff();
  if (!(lambda.cwiseAbs().minCoeff() > 1e-14 * largest)) {
    throw SingularMetricError("metric is singular (zero eigenvalue)", {});
  }

  // Match eigenvectors to coordinates greedily by magnitude.
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> weight;
  for (Eigen::Index row = 0; row < n; ++row) {
    for (Eigen::Index col = 0; col < n; ++col) weight.emplace_back(std::abs(q(row, col)), row, col);
  }
  std::stable_sort(weight.begin(), weight.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::vector<Eigen::Index> column_for_row(n, -1);
  std::vector<bool> used(n, false);
  for (const auto& [w, row, col] : weight) {
    if (column_for_row[row] < 0 && !used[col]) {
      column_for_row[row] = col;
      used[col] = true;
    }
  }

  TakagiResult r;
  r.v.resize(n, n);
  r.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index col = column_for_row[k];
    const double sign = q(k, col) < 0 ? -1.0 : 1.0;
    Complex root;
    detail::cpow(Complex{lambda(col), 0.0}, 1, 2, root);
    r.eigenvalues(k) = lambda(col);
    for (Eigen::Index row = 0; row < n; ++row) r.v(row, k) = sign * q(row, col) * root;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(r.v);
  r.singular_values = svd.singularValues();
  return r;
}

ComplexMatrix factor_takagi_numeric(const MetricField& g, const Point& p) {
  try {
    return takagi_decompose(metric_at(g, p)).v;
  } catch (const SingularMetricError& e) {
    throw SingularMetricError(e.what(), p);
  }
}

FormSet factor_numeric(const MetricField& g) {
  FormSet f;
  f.chart = g.chart;
  f.strategy = Strategy::Numeric;
  f.sets = g.dim();
  f.pointwise = [g](const Point& p) -> ComplexMatrix {
    return factor_takagi_numeric(g, p).transpose();
  };
  return f;
}

FormSet factor(const MetricField& g, Strategy s) {
  switch (s) {
    case Strategy::Diagonal: return factor_diagonal(g);
    case Strategy::Ldl: return factor_ldl(g, Pivoting::Symmetric);
    case Strategy::Numeric: return factor_numeric(g);
  }
  throw InputError("unknown strategy");
}

FactorizationReport verify_factorization(const FormSet& a, const MetricField& g,
                                         std::span<const Point> points) {
  const std::size_t n = g.dim();
  FactorizationReport rep;
  rep.entry_residual.assign(n * n, 0.0);
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const ComplexMatrix m = a.at(points[k]);
    expr::Evaluator ev(points[k]);
    const ComplexMatrix back = m.transpose() * m;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = std::abs(back(i, j) - ev(g(i, j)));
        double& worst = rep.entry_residual[i * n + j];
        if (std::isnan(d) || d > worst) worst = d;
        if (std::isnan(d) || d > rep.max_residual) {
          rep.max_residual = d;
          rep.worst_a = i;
          rep.worst_b = j;
          rep.worst_point = k;
        }
      }
    }
    const double det = m.rows() == m.cols() ? std::abs(m.determinant()) : 0.0;
    rep.min_abs_det = std::min(rep.min_abs_det, det);
  }
  if (points.empty()) rep.min_abs_det = 0.0;
  rep.reconstruction_ok = rep.max_residual <= rep.tolerance;
  rep.det_ok = rep.min_abs_det > rep.det_bound;
  return rep;
}

double orthogonality_residual(const ComplexMatrix& a, const Eigen::MatrixXd& g) {
  const ComplexMatrix ginv = g.inverse().cast<Complex>();
  const ComplexMatrix m = a * ginv * a.transpose();
  return (m - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

}  // namespace takagi
