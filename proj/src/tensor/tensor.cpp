#include "takagi/tensor.hpp"

#include <cmath>
#include <unordered_map>

namespace takagi {

using expr::Complex;
using expr::Expr;

namespace {

Expr total(std::vector<Expr> terms) { return expr::sum(std::move(terms)); }

Complex total(const std::vector<Complex>& terms) {
  Complex s{0.0, 0.0};
  for (const Complex& t : terms) s += t;
  return s;
}

template <class T>
T half() {
  return T(0.5);
}

template <class T>
void require_coordinate_slot(const BasicTensor<T>& t, std::size_t slot, const char* op) {
  t.check_slot(slot);
  if (t.is_set_slot(slot)) {
    throw InputError(std::string(op) + " over the set index is not allowed");
  }
}

// Applies `f(idx, out_off)` to every multi-index of `t`.
template <class T, class F>
void for_each_index(const BasicTensor<T>& t, F&& f) {
  std::vector<std::size_t> idx(t.slot_count(), 0);
  for (std::size_t off = 0; off < t.size(); ++off) {
    f(idx, off);
    for (std::size_t s = idx.size(); s-- > 0;) {
      if (++idx[s] < t.extent(s)) break;
      idx[s] = 0;
    }
  }
}

template <class T>
BasicTensor<T> change_index(const BasicTensor<T>& t, std::size_t slot, const BasicTensor<T>& m,
                            Variance from, const char* op) {
  require_coordinate_slot(t, slot, op);
  if (t.slot_variance(slot) != from) {
    throw InputError(std::string(op) + ": slot " + std::to_string(slot) + " has the wrong variance");
  }
  if (m.rank() != 2 || m.is_set_indexed() || m.dim() != t.dim()) {
    throw InputError(std::string(op) + ": metric shape does not match the tensor");
  }
  std::vector<Variance> var = t.variance();
  var[slot - (t.is_set_indexed() ? 1 : 0)] =
      from == Variance::Lower ? Variance::Upper : Variance::Lower;
  BasicTensor<T> out(t.dim(), std::move(var), t.set_extent());
  const std::size_t n = t.dim();
  std::vector<T> terms;
  for_each_index(out, [&](std::vector<std::size_t>& idx, std::size_t off) {
    const std::size_t a = idx[slot];
    terms.clear();
    for (std::size_t b = 0; b < n; ++b) {
      const T& mab = m({a, b});
      idx[slot] = b;
      terms.push_back(mab * t.at(idx));
    }
    idx[slot] = a;
    out.components()[off] = total(terms);
  });
  return out;
}

template <class T>
BasicTensor<T> pair_part(const BasicTensor<T>& t, std::size_t s1, std::size_t s2, bool anti,
                         const char* op) {
  require_coordinate_slot(t, s1, op);
  require_coordinate_slot(t, s2, op);
  if (s1 == s2) throw InputError(std::string(op) + " needs two distinct slots");
  BasicTensor<T> out = t.template with_shape<T>();
  const T h = half<T>();
  for_each_index(t, [&](std::vector<std::size_t>& idx, std::size_t off) {
    std::swap(idx[s1], idx[s2]);
    const T& swapped = t.at(idx);
    std::swap(idx[s1], idx[s2]);
    const T& direct = t.components()[off];
    out.components()[off] = anti ? h * (direct - swapped) : h * (direct + swapped);
  });
  return out;
}

template <class T>
void require_same_shape(const BasicTensor<T>& a, const BasicTensor<T>& b, const char* op) {
  if (a.dim() != b.dim() || a.set_extent() != b.set_extent() || a.variance() != b.variance()) {
    throw InputError(std::string(op) + ": tensor shapes differ");
  }
}

}  // namespace

template <class T>
BasicTensor<T> set_product(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  if (!a.is_set_indexed() || !b.is_set_indexed()) {
    throw InputError("set product needs two set-indexed tensors");
  }
  if (a.set_extent() != b.set_extent()) throw InputError("set product: set extents differ");
  if (a.dim() != b.dim()) throw InputError("set product: chart dimensions differ");
  std::vector<Variance> var = a.variance();
  var.insert(var.end(), b.variance().begin(), b.variance().end());
  BasicTensor<T> out(a.dim(), std::move(var));
  const std::size_t m = a.set_extent();
  const std::size_t na = a.size() / m;
  const std::size_t nb = b.size() / m;
  std::vector<T> terms(m);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t s = 0; s < m; ++s) {
        terms[s] = a.components()[s * na + i] * b.components()[s * nb + j];
      }
      out.components()[i * nb + j] = total(terms);
    }
  }
  return out;
}

template <class T>
BasicTensor<T> raise_index(const BasicTensor<T>& t, std::size_t slot, const BasicTensor<T>& g_inv) {
  return change_index(t, slot, g_inv, Variance::Lower, "raise_index");
}

template <class T>
BasicTensor<T> lower_index(const BasicTensor<T>& t, std::size_t slot, const BasicTensor<T>& g) {
  return change_index(t, slot, g, Variance::Upper, "lower_index");
}

template <class T>
BasicTensor<T> symmetrize(const BasicTensor<T>& t, std::size_t s1, std::size_t s2) {
  return pair_part(t, s1, s2, false, "symmetrize");
}

template <class T>
BasicTensor<T> antisymmetrize(const BasicTensor<T>& t, std::size_t s1, std::size_t s2) {
  return pair_part(t, s1, s2, true, "antisymmetrize");
}

template <class T>
BasicTensor<T> contract(const BasicTensor<T>& t, std::size_t s1, std::size_t s2) {
  require_coordinate_slot(t, s1, "contract");
  require_coordinate_slot(t, s2, "contract");
  if (s1 == s2 || t.slot_variance(s1) == t.slot_variance(s2)) {
    throw InputError("contract needs one upper and one lower slot");
  }
  const std::size_t shift = t.is_set_indexed() ? 1 : 0;
  std::vector<Variance> var;
  for (std::size_t s = shift; s < t.slot_count(); ++s) {
    if (s != s1 && s != s2) var.push_back(t.variance()[s - shift]);
  }
  BasicTensor<T> out(t.dim(), std::move(var), t.set_extent());
  std::vector<T> terms;
  std::vector<std::size_t> full(t.slot_count());
  for_each_index(out, [&](const std::vector<std::size_t>& idx, std::size_t off) {
    std::size_t k = 0;
    for (std::size_t s = 0; s < full.size(); ++s) {
      if (s != s1 && s != s2) full[s] = idx[k++];
    }
    terms.clear();
    for (std::size_t c = 0; c < t.dim(); ++c) {
      full[s1] = full[s2] = c;
      terms.push_back(t.at(full));
    }
    out.components()[off] = total(terms);
  });
  return out;
}

template <class T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  require_same_shape(a, b, "add");
  BasicTensor<T> out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out.components()[k] = a.components()[k] + b.components()[k];
  return out;
}

template <class T>
BasicTensor<T> subtract(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  require_same_shape(a, b, "subtract");
  BasicTensor<T> out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out.components()[k] = a.components()[k] - b.components()[k];
  return out;
}

#define TAKAGI_INSTANTIATE(T)                                                                   \
  template BasicTensor<T> set_product(const BasicTensor<T>&, const BasicTensor<T>&);            \
  template BasicTensor<T> raise_index(const BasicTensor<T>&, std::size_t, const BasicTensor<T>&); \
  template BasicTensor<T> lower_index(const BasicTensor<T>&, std::size_t, const BasicTensor<T>&); \
  template BasicTensor<T> symmetrize(const BasicTensor<T>&, std::size_t, std::size_t);          \
  template BasicTensor<T> antisymmetrize(const BasicTensor<T>&, std::size_t, std::size_t);      \
  template BasicTensor<T> contract(const BasicTensor<T>&, std::size_t, std::size_t);            \
  template BasicTensor<T> add(const BasicTensor<T>&, const BasicTensor<T>&);                    \
  template BasicTensor<T> subtract(const BasicTensor<T>&, const BasicTensor<T>&);

TAKAGI_INSTANTIATE(Expr)
TAKAGI_INSTANTIATE(Complex)
#undef TAKAGI_INSTANTIATE

// ---------------------------------------------------------------------------

bool MetricField::is_diagonal() const {
  const std::size_t n = dim();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !g({a, b}).is_zero()) return false;
    }
  }
  return true;
}

MetricField MetricField::make(std::string name, Chart chart, Constants constants,
                              std::vector<Expr> components) {
  const std::size_t n = chart.dimension();
  if (components.size() != n * n) {
    throw InputError("metric needs " + std::to_string(n * n) + " components, got " +
                     std::to_string(components.size()));
  }
  MetricField m{std::move(name), std::move(chart), std::move(constants), Tensor::lower(n, 2)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!expr::structurally_equal(components[a * n + b], components[b * n + a])) {
        throw InputError("metric is not symmetric in entries (" + std::to_string(a + 1) + "," +
                         std::to_string(b + 1) + ")");
      }
      m.g({a, b}) = components[a * n + b];
    }
  }
  return m;
}

namespace {

// Determinants of the submatrices left after deleting rows and columns,
// keyed by the bitmasks of the rows and columns that remain.
class MinorTable {
 public:
  MinorTable(std::span<const Expr> m, std::size_t n) : m_(m), n_(n) {
    if (n > 31) throw InputError("matrix too large for cofactor expansion");
  }

  Expr det(std::uint32_t rows, std::uint32_t cols) {
    if (rows == 0) return Expr(1.0);
    const std::uint64_t key = (std::uint64_t{rows} << 32) | cols;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // Expand along the lowest remaining row.
    const std::size_t r = static_cast<std::size_t>(__builtin_ctz(rows));
    std::vector<Expr> terms;
    int sign = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      if ((cols & (1u << c)) == 0) continue;
      const Expr& entry = m_[r * n_ + c];
      if (!entry.is_zero()) {
        const Expr minor = det(rows & ~(1u << r), cols & ~(1u << c));
        const Expr term = entry * minor;
        terms.push_back(sign > 0 ? term : -term);
      }
      sign = -sign;
    }
    Expr d = expr::sum(std::move(terms));
    memo_.emplace(key, d);
    return d;
  }

 private:
  std::span<const Expr> m_;
  std::size_t n_;
  std::unordered_map<std::uint64_t, Expr> memo_;
};

std::uint32_t full_mask(std::size_t n) { return n >= 32 ? ~0u : (1u << n) - 1; }

}  // namespace

Expr determinant(std::span<const Expr> m, std::size_t n) {
  MinorTable t(m, n);
  return t.det(full_mask(n), full_mask(n));
}

Tensor invert_metric(const MetricField& g, std::span<const Point> check_points) {
  const std::size_t n = g.dim();
  const auto& comps = g.g.components();
  std::vector<Point> default_points;
  if (check_points.empty()) {
    default_points = sample_points(g.chart, 20, 42);
    check_points = default_points;
  }

  Tensor inv(n, {Variance::Upper, Variance::Upper});
  if (g.is_diagonal()) {
    for (std::size_t a = 0; a < n; ++a) {
      const Expr& gaa = g(a, a);
      for (const Point& p : check_points) {
        if (std::abs(expr::eval(gaa, p)) == 0.0) {
          throw SingularMetricError("metric is singular: g_" + std::to_string(a + 1) +
                                        std::to_string(a + 1) + " vanishes",
                                    p);
        }
      }
      inv({a, a}) = expr::pow(gaa, -1);
    }
    return inv;
  }

  MinorTable table(comps, n);
  const std::uint32_t all = full_mask(n);
  const Expr det = table.det(all, all);
  for (const Point& p : check_points) {
    expr::Evaluator ev(p);
    double bound = 1.0;  // Hadamard bound on |det|
    for (std::size_t a = 0; a < n; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < n; ++b) row += std::norm(ev(comps[a * n + b]));
      bound *= std::sqrt(row);
    }
    const double d = std::abs(ev(det));
    if (!(d > 1e-13 * bound)) throw SingularMetricError("metric is singular (det g = 0)", p);
  }
  const Expr inv_det = expr::pow(det, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      // (g^-1)_ab = C_ba / det, C the cofactor matrix; g symmetric so C is too.
      Expr minor = table.det(all & ~(1u << b), all & ~(1u << a));
      if ((a + b) % 2 == 1) minor = -minor;
      inv({a, b}) = minor * inv_det;
      inv({b, a}) = inv({a, b});
    }
  }
  return inv;
}

NumTensor evaluate(const Tensor& t, const Point& p) {
  NumTensor out = t.with_shape<Complex>();
  expr::Evaluator ev(p);
  for (std::size_t k = 0; k < t.size(); ++k) out.components()[k] = ev(t.components()[k]);
  return out;
}

double max_abs_diff(const NumTensor& a, const NumTensor& b) {
  if (a.size() != b.size()) throw InputError("max_abs_diff: sizes differ");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a.components()[k] - b.components()[k]);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

double max_abs(const NumTensor& t) {
  double m = 0.0;
  for (const Complex& c : t.components()) {
    const double d = std::abs(c);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

}  // namespace takagi
