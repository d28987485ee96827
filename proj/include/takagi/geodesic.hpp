#pragma once

// Fixed-step RK4 integration of the geodesic equation in two forms:
//   classical  du^c/ds = -Γ^c_ab u^a u^b
//   factored   du^c/ds = -A^c ⊙ [∂_(a A_b) u^a u^b] + (A_a u^a) ⊙ F^c_b u^b
// Both right-hand sides are complex in general; the state is real and takes
// the real part. The largest discarded imaginary part is recorded.

#include <functional>
#include <vector>

#include "takagi/geometry.hpp"
#include "takagi/tape.hpp"

namespace takagi {

struct GeodesicOptions {
  std::size_t steps = 1000;
  double h = 0.01;
};

struct Trajectory {
  std::vector<double> s;
  std::vector<Point> x;
  std::vector<Point> u;
  std::vector<double> norm;  // g_ab u^a u^b
  bool left_domain = false;  // stopped early at the chart boundary
  double max_discarded_imag = 0.0;
};

// du/ds at (x, u).
using GeodesicRhs = std::function<void(const Point& x, const Point& u, Point& du, double& imag)>;

Trajectory integrate_geodesic(const GeodesicRhs& rhs, const MetricField& g, const Point& x0,
                              const Point& u0, const GeodesicOptions& opts);

GeodesicRhs classical_geodesic_rhs(const Connection& conn);
GeodesicRhs factored_geodesic_rhs(GeometryBuilder& geo, const FormSet& a, const Tensor& f);

struct GeodesicComparison {
  Trajectory classical;
  Trajectory factored;
  double max_divergence = 0.0;  // max over common steps of |x_c - x_f|, |u_c - u_f|
  double norm_drift = 0.0;      // max relative drift of g(u,u), both routes
};

double norm_drift(const Trajectory& t);

GeodesicComparison compare_geodesics(GeometryBuilder& geo, const FormSet& a, const Tensor& f,
                                     const Connection& classical, const Point& x0,
                                     const Point& u0, const GeodesicOptions& opts);

}  // namespace takagi
