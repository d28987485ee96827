#pragma once

// Full identity suite for one metric and one factorization strategy.
//
// Every symbolic object is built once, then all of them (and the residual
// expressions of each identity) are evaluated in a single batched tape run
// over the sample points.

#include <optional>
#include <string>
#include <vector>

#include "takagi/factorization.hpp"
#include "takagi/geodesic.hpp"
#include "takagi/geometry.hpp"
#include "takagi/manifolds.hpp"
#include "takagi/simd/kernels.hpp"
#include "takagi/tape.hpp"

namespace takagi {

// Tensors evaluated together at a fixed point set. Values of tensor `id` are
// laid out as [component * points + point].
class TensorBatch {
 public:
  std::size_t add(const Tensor& t);
  void evaluate(std::span<const Point> points,
                const simd::LaneKernels& kernels = simd::active_kernels());

  std::size_t points() const noexcept { return points_; }
  std::size_t components(std::size_t id) const { return entries_.at(id).size; }
  std::span<const expr::Complex> values(std::size_t id) const;
  expr::Complex value(std::size_t id, std::size_t component, std::size_t point) const;

  double max_abs(std::size_t id) const;
  double max_abs_diff(std::size_t a, std::size_t b) const;
  double max_imag(std::size_t id) const;
  // Largest |component| at each point.
  std::vector<double> max_abs_per_point(std::size_t id) const;

 private:
  struct Entry {
    std::size_t first = 0;  // first root
    std::size_t size = 0;
  };
  std::vector<expr::Expr> roots_;
  std::vector<Entry> entries_;
  std::vector<expr::Complex> values_;
  std::size_t points_ = 0;
  const simd::LaneKernels* kernels_ = &simd::scalar_kernels();
};

enum class Status { Pass, Fail, Reported, Skipped };
const char* status_name(Status s) noexcept;

struct IdentityResult {
  std::string name;
  // `residual` must stay <= tolerance, except for lower bounds where it must
  // stay above it.
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
  Status status = Status::Skipped;
  std::string note;
};

struct TensorSummary {
  std::string name;
  std::size_t rank = 0;
  std::size_t set_extent = 0;
  std::size_t components = 0;
  std::size_t nonzero = 0;  // components above 1e-12 somewhere in the sample
  double max_abs = 0.0;
  double max_imag = 0.0;
};

struct KillingForm {
  std::size_t set = 0;
  double max_f = 0.0;
  double max_s = 0.0;
  double max_lie = 0.0;
  bool closed = false;
  bool killing = false;
};

struct GeodesicSummary {
  Point start;
  Point velocity;
  GeodesicOptions options;
  std::size_t steps_taken = 0;
  bool left_domain = false;
  double max_divergence = 0.0;
  double norm_drift = 0.0;
  double max_discarded_imag = 0.0;
};

struct AnalysisOptions {
  Strategy strategy = Strategy::Diagonal;
  std::uint64_t seed = 42;
  std::size_t points = 20;
  double tol_scale = 1.0;
  GeodesicOptions geodesic{200, 0.01};
  std::optional<Point> geodesic_start;
  std::optional<Point> geodesic_velocity;
  const simd::LaneKernels* kernels = nullptr;  // default: active_kernels()
};

struct Timing {
  double symbolic_seconds = 0.0;
  double evaluation_seconds = 0.0;
  double geodesic_seconds = 0.0;
};

struct AnalysisReport {
  std::string manifold;
  std::string description;
  std::vector<std::string> coordinates;
  Strategy strategy = Strategy::Diagonal;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::vector<Point> points;
  std::vector<IdentityResult> identities;
  std::vector<TensorSummary> tensors;
  Classification classification;
  std::optional<Flatness> expected;
  std::vector<double> decomposition_residual;  // per point; empty without symbolic forms
  std::vector<KillingForm> killing;
  std::optional<GeodesicSummary> geodesic;
  std::string isa;
  Timing timing;

  const IdentityResult* find(std::string_view name) const;
  bool all_pass() const;
  bool classification_matches() const;
};

// Strategy when none is given: diagonal for diagonal metrics, else ldl.
Strategy default_strategy(const MetricField& g);

// Throws InputError, SingularMetricError, ZeroPivotError, EvalError.
AnalysisReport analyze(const ManifoldSpec& spec, const AnalysisOptions& opts);

Point domain_midpoint(const Chart& chart);
// A tenth of each domain width.
Point default_geodesic_velocity(const Chart& chart);

}  // namespace takagi
