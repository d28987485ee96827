#pragma once

// Symbolic construction of the geometric objects along two routes:
//
//   classical  g -> Γ -> R -> Ricci -> G
//   factored   A -> F = dA, S, J (pre-currents, currents) -> Γ, R, Ricci, G
//
// Index layout (set index first when present):
//   A(I,a)        F(I,a,b) = ∂_a A_Ib - ∂_b A_Ia
//   S(I,a,b)      J_pre(I,a,b,c) = ∇_a F_Ibc      J(I,b) = g^ac J_pre(I,c,a,b)
//   Γ lower(c,a,b) = Γ_cab,   Γ mixed(c,a,b) = Γ^c_ab
//   Riemann lower(a,b,c,d) = R_abcd,   mixed(a,b,c,d) = R^a_bcd
//
// Covariant derivatives on the factored side always use the classical
// connection, so a discrepancy points at the factored formula itself.

#include <optional>
#include <string_view>

#include "takagi/factorization.hpp"
#include "takagi/tensor.hpp"

namespace takagi {

enum class Route { Classical, Factored };

struct Connection {
  Route route = Route::Classical;
  Tensor lower;
  Tensor mixed;
};

// Shares derivative memo tables between the builders below. Not thread-safe.
class GeometryBuilder {
 public:
  GeometryBuilder(const MetricField& g, Tensor g_inv);

  const MetricField& metric() const noexcept { return g_; }
  const Tensor& inverse() const noexcept { return g_inv_; }
  std::size_t dim() const noexcept { return g_.dim(); }

  // Prepends a lower derivative index after the set index: (∂T)(I,c,...) = ∂_c T(I,...).
  Tensor partial(const Tensor& t);

  const Tensor& metric_derivative();  // ∂_c g_ab as (c,a,b)

  Connection christoffel_classical();
  Connection christoffel_factored(const FormSet& a, const Tensor& f);

  Tensor compute_F(const FormSet& a);
  // ∂_(a A_Ib)
  Tensor symmetric_derivative(const FormSet& a);
  // Σ_I [A_Ia F_Ibc + A_Ib F_Iac] as (a,b,c)
  Tensor mixed_form_product(const FormSet& a, const Tensor& f);
  // A_I^c = g^cd A_Id
  Tensor raised_forms(const FormSet& a);

  Tensor compute_S_direct(const FormSet& a, const Connection& conn);
  Tensor compute_S_via_F(const FormSet& a, const Tensor& f);
  // A_c ⊙ S_ab + ½[A_a ⊙ F_bc + A_b ⊙ F_ac] as (c,a,b); vanishes identically.
  Tensor s_f_identity(const FormSet& a, const Tensor& s, const Tensor& f);

  Tensor compute_precurrents(const Tensor& f, const Connection& conn);
  Tensor compute_currents(const Tensor& j_pre);

  Tensor riemann_mixed(const Connection& conn);
  Tensor riemann_classical(const Connection& conn);  // all lower

  struct Decomposition {
    Tensor current;  // R^(c)
    Tensor field;    // R^(f)
    Tensor shear;    // R^(s)
    Tensor total;
  };
  Decomposition riemann_decomposed(const FormSet& a, const Tensor& f, const Tensor& s,
                                   const Tensor& j_pre);

  struct Curvature {
    Tensor ricci;  // R_ab
    expr::Expr scalar;
    Tensor einstein;  // G_ab
  };
  // Contraction R_ab = g^cd R_cadb of an all-lower Riemann tensor.
  Curvature contract(const Tensor& riemann_lower);
  // R_ab = R^c_acb directly from the mixed tensor.
  Curvature contract_mixed(const Tensor& riemann_mixed);

  struct FactoredCurvature {
    Tensor ricci;
    expr::Expr scalar;
    Tensor t_field;    // T^(f)
    Tensor t_current;  // T^(c)
    Tensor t_shear;    // T^(s)
    Tensor einstein;   // T^(f) + T^(c) + T^(s)
  };
  FactoredCurvature ricci_einstein_factored(const FormSet& a, const Tensor& f, const Tensor& s,
                                            const Tensor& j_pre, const Tensor& j);

  // ∇_c g_ab as (c,a,b)
  Tensor metric_covariant_derivative(const Connection& conn);
  // g^bc ∇_c G_ab
  Tensor contracted_bianchi(const Tensor& einstein, const Connection& conn);
  // (L_{A_I} g)_ab with A_I^c = g^cd A_Id, as (I,a,b)
  Tensor lie_derivative_metric(const FormSet& a);

 private:
  MetricField g_;
  Tensor g_inv_;
  expr::DerivativeCache cache_;
  std::optional<Tensor> dg_;
};

enum class Flatness { Curved, ClosedFlat, Inconsistent, Undetermined };

const char* flatness_name(Flatness f) noexcept;
std::optional<Flatness> parse_flatness(std::string_view name);

// Verdict from the largest |F_Iab| and |R_abcd| over the sample. Closed forms
// force R = 0, so small F with large R signals a fault; large F says nothing
// about R (closedness is sufficient, not necessary, for flatness).
struct Classification {
  Flatness verdict = Flatness::Undetermined;
  double max_f = 0.0;
  double max_riemann = 0.0;
  double threshold = 1e-8;
  bool forms_closed = false;
  bool riemann_vanishes = false;
};

Classification classify_flatness(std::optional<double> max_f, double max_riemann,
                                 double threshold = 1e-8);

}  // namespace takagi
