#pragma once

// Dense tensors over an n-dimensional chart, optionally carrying a leading
// set-enumeration index I (A_Ia, F_Iab, S_Iab, J_Iabc, ...).
//
// Slots are numbered over the full index list. For a set-indexed tensor
// slot 0 is the set index and slots 1..rank are the coordinate indices; for
// a plain tensor slots 0..rank-1 are coordinate indices. Components are
// stored row-major in that order.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "takagi/chart.hpp"
#include "takagi/errors.hpp"
#include "takagi/expr.hpp"

namespace takagi {

enum class Variance : std::uint8_t { Lower, Upper };

template <class T>
class BasicTensor {
 public:
  BasicTensor() = default;
  // set_extent == 0 means no set index.
  BasicTensor(std::size_t dim, std::vector<Variance> variance, std::size_t set_extent = 0)
      : dim_(dim), set_extent_(set_extent), variance_(std::move(variance)) {
    std::size_t count = set_extent_ == 0 ? 1 : set_extent_;
    for (std::size_t k = 0; k < variance_.size(); ++k) count *= dim_;
    data_.assign(count, T{});
  }

  static BasicTensor lower(std::size_t dim, std::size_t rank, std::size_t set_extent = 0) {
    return BasicTensor(dim, std::vector<Variance>(rank, Variance::Lower), set_extent);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return variance_.size(); }
  std::size_t set_extent() const noexcept { return set_extent_; }
  bool is_set_indexed() const noexcept { return set_extent_ != 0; }
  std::size_t slot_count() const noexcept { return rank() + (is_set_indexed() ? 1 : 0); }
  std::size_t size() const noexcept { return data_.size(); }
  const std::vector<Variance>& variance() const noexcept { return variance_; }

  bool is_set_slot(std::size_t slot) const noexcept { return is_set_indexed() && slot == 0; }
  std::size_t extent(std::size_t slot) const noexcept {
    return is_set_slot(slot) ? set_extent_ : dim_;
  }
  // Variance of a coordinate slot. Throws InputError for the set slot.
  Variance slot_variance(std::size_t slot) const {
    check_slot(slot);
    if (is_set_slot(slot)) throw InputError("the set index carries no variance");
    return variance_[slot - (is_set_indexed() ? 1 : 0)];
  }

  void check_slot(std::size_t slot) const {
    if (slot >= slot_count()) {
      throw InputError("slot " + std::to_string(slot) + " out of range for a tensor with " +
                       std::to_string(slot_count()) + " slots");
    }
  }

  std::size_t offset(std::span<const std::size_t> idx) const {
    std::size_t off = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) off = off * extent(s) + idx[s];
    return off;
  }
  std::size_t offset(std::initializer_list<std::size_t> idx) const {
    return offset(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  T& operator()(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
  const T& operator()(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }
  T& at(std::span<const std::size_t> idx) { return data_[offset(idx)]; }
  const T& at(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }

  std::vector<T>& components() noexcept { return data_; }
  const std::vector<T>& components() const noexcept { return data_; }

  // Full multi-index of a flat offset.
  std::vector<std::size_t> unravel(std::size_t off) const {
    std::vector<std::size_t> idx(slot_count());
    for (std::size_t s = idx.size(); s-- > 0;) {
      idx[s] = off % extent(s);
      off /= extent(s);
    }
    return idx;
  }

  // Same shape, different component type.
  template <class U>
  BasicTensor<U> with_shape() const {
    return BasicTensor<U>(dim_, variance_, set_extent_);
  }

 private:
  std::size_t dim_ = 0;
  std::size_t set_extent_ = 0;
  std::vector<Variance> variance_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<expr::Expr>;
using NumTensor = BasicTensor<std::complex<double>>;

// Symmetric rank-2 metric g_ab over a chart.
struct MetricField {
  std::string name;
  Chart chart;
  Constants constants;
  Tensor g;  // lower-lower, n x n

  std::size_t dim() const noexcept { return chart.dimension(); }
  const expr::Expr& operator()(std::size_t a, std::size_t b) const { return g({a, b}); }
  bool is_diagonal() const;

  // Builds from a row-major n x n component list; throws InputError unless
  // the components are structurally symmetric.
  static MetricField make(std::string name, Chart chart, Constants constants,
                          std::vector<expr::Expr> components);
};

// ---------------------------------------------------------------------------
// Operations. Implemented for Tensor and NumTensor.

// result_{a..b..} = sum_I A_{I a..} B_{I b..}
template <class T>
BasicTensor<T> set_product(const BasicTensor<T>& a, const BasicTensor<T>& b);

template <class T>
BasicTensor<T> raise_index(const BasicTensor<T>& t, std::size_t slot, const BasicTensor<T>& g_inv);
template <class T>
BasicTensor<T> lower_index(const BasicTensor<T>& t, std::size_t slot, const BasicTensor<T>& g);

// T_(ab) and T_[ab] over two coordinate slots.
template <class T>
BasicTensor<T> symmetrize(const BasicTensor<T>& t, std::size_t s1, std::size_t s2);
template <class T>
BasicTensor<T> antisymmetrize(const BasicTensor<T>& t, std::size_t s1, std::size_t s2);

// Trace over one upper and one lower coordinate slot.
template <class T>
BasicTensor<T> contract(const BasicTensor<T>& t, std::size_t s1, std::size_t s2);

template <class T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b);
template <class T>
BasicTensor<T> subtract(const BasicTensor<T>& a, const BasicTensor<T>& b);

// Symbolic inverse g^ab by cofactor expansion over memoized minors
// (reciprocals only when g is diagonal). The determinant is checked at
// `check_points` (default: the chart's standard sample); a vanishing
// determinant raises SingularMetricError carrying the point.
Tensor invert_metric(const MetricField& g, std::span<const Point> check_points = {});

// Symbolic determinant of a square matrix of expressions (row-major).
expr::Expr determinant(std::span<const expr::Expr> m, std::size_t n);

// Component values at one point.
NumTensor evaluate(const Tensor& t, const Point& p);

// max |a - b| over all components.
double max_abs_diff(const NumTensor& a, const NumTensor& b);
double max_abs(const NumTensor& t);

}  // namespace takagi
