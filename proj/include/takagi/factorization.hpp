#pragma once

// Factorizations g = V Vᵀ of a metric into a set of 1-forms A_I = row I of
// Vᵀ, so that g_ab = sum_I A_Ia A_Ib.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "takagi/tensor.hpp"

namespace takagi {

enum class Strategy { Diagonal, Ldl, Numeric };

const char* strategy_name(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name);

using ComplexMatrix = Eigen::MatrixXcd;

// Optional rescaling of the forms. Only the identity is offered; the hook
// keeps the choice visible in reports.
enum class Gauge { None };
const char* gauge_name(Gauge g) noexcept;

struct FormSet {
  Chart chart;
  Strategy strategy = Strategy::Diagonal;
  std::size_t sets = 0;
  // A_Ia as a set-indexed rank-1 tensor. Empty for the numeric strategy.
  Tensor components;
  // Numeric strategy: A_Ia at a point (rows I).
  std::function<ComplexMatrix(const Point&)> pointwise;
  // LDL only: coordinate eliminated at each step (identity when no pivoting).
  std::vector<std::size_t> pivot_order;
  Gauge gauge = Gauge::None;

  bool symbolic() const noexcept { return strategy != Strategy::Numeric; }
  const expr::Expr& operator()(std::size_t set, std::size_t a) const { return components({set, a}); }
  ComplexMatrix at(const Point& p) const;
};

// A_Ia = delta_Ia sqrt(g_aa). Throws InputError for a non-diagonal metric.
FormSet factor_diagonal(const MetricField& g);

enum class Pivoting {
  None,       // a zero pivot raises ZeroPivotError
  Symmetric,  // a zero pivot is swapped with a later nonzero diagonal entry
};

struct LdlFactors {
  std::size_t n = 0;
  std::vector<expr::Expr> l;           // unit lower triangular, row-major n x n
  std::vector<expr::Expr> d;           // diagonal
  std::vector<std::size_t> order;      // P g Pᵀ = L D Lᵀ with (P g Pᵀ)_ij = g_{order[i] order[j]}
};

// Symbolic P g Pᵀ = L D Lᵀ. A pivot counts as zero when it simplifies to 0
// or vanishes at every check point (default: the chart's standard sample).
LdlFactors ldl_decompose(const MetricField& g, Pivoting pivoting = Pivoting::None,
                         std::span<const Point> check_points = {});

// V = Pᵀ L sqrt(D).
FormSet factor_ldl(const MetricField& g, Pivoting pivoting = Pivoting::None,
                   std::span<const Point> check_points = {});

struct TakagiResult {
  ComplexMatrix v;                  // g = V Vᵀ
  Eigen::VectorXd eigenvalues;      // of g, in the column order of V
  Eigen::VectorXd singular_values;  // of V, descending
};

// Pointwise factorization from g = Q Λ Qᵀ: V = Q diag(sqrt λ), principal
// roots. Each eigenvector is matched to the coordinate it is largest along
// and given a positive entry there, so a diagonal g yields a diagonal V.
// Throws SingularMetricError or ConvergenceError.
TakagiResult takagi_decompose(const Eigen::MatrixXd& g);
ComplexMatrix factor_takagi_numeric(const MetricField& g, const Point& p);

// FormSet whose components come from takagi_decompose at each point.
FormSet factor_numeric(const MetricField& g);

FormSet factor(const MetricField& g, Strategy s);

FormSet apply_gauge(FormSet a, Gauge g);

// Real metric matrix at a point; throws EvalError for a complex component.
Eigen::MatrixXd metric_at(const MetricField& g, const Point& p);

struct FactorizationReport {
  double tolerance = 1e-10;
  double det_bound = 1e-12;
  double max_residual = 0.0;             // max |A_a ⊙ A_b - g_ab|
  std::size_t worst_a = 0, worst_b = 0;  // entry of max_residual
  std::size_t worst_point = 0;
  std::vector<double> entry_residual;    // n x n, max over points
  double min_abs_det = 0.0;              // min |det A_Ia|
  bool reconstruction_ok = false;
  bool det_ok = false;
  bool pass() const noexcept { return reconstruction_ok && det_ok; }
};

FactorizationReport verify_factorization(const FormSet& a, const MetricField& g,
                                         std::span<const Point> points);

// max |A g⁻¹ Aᵀ - I| at one point.
double orthogonality_residual(const ComplexMatrix& a, const Eigen::MatrixXd& g);

}  // namespace takagi
