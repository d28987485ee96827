#include "takagi/geometry.hpp"

namespace takagi {

using expr::Expr;

namespace {

Expr total(std::vector<Expr> terms) { return expr::sum(std::move(terms)); }

const Expr kHalf(0.5);
const Expr kQuarter(0.25);

void require_symbolic(const FormSet& a) {
  if (!a.symbolic()) {
    throw InputError("this operation needs symbolic forms; the numeric strategy has none");
  }
}

}  // namespace

GeometryBuilder::GeometryBuilder(const MetricField& g, Tensor g_inv)
    : g_(g), g_inv_(std::move(g_inv)) {}

Tensor GeometryBuilder::partial(const Tensor& t) {
  std::vector<Variance> var{Variance::Lower};
  var.insert(var.end(), t.variance().begin(), t.variance().end());
  Tensor out(t.dim(), std::move(var), t.set_extent());
  const std::size_t shift = t.is_set_indexed() ? 1 : 0;
  std::vector<std::size_t> src(t.slot_count());
  for (std::size_t off = 0; off < out.size(); ++off) {
    const std::vector<std::size_t> idx = out.unravel(off);
    std::size_t k = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (s != shift) src[k++] = idx[s];
    }
    out.components()[off] = cache_.differentiate(t.at(src), idx[shift]);
  }
  return out;
}

const Tensor& GeometryBuilder::metric_derivative() {
  if (!dg_) dg_ = partial(g_.g);
  return *dg_;
}

Connection GeometryBuilder::christoffel_classical() {
  const std::size_t n = dim();
  const Tensor& dg = metric_derivative();
  Connection conn;
  conn.route = Route::Classical;
  conn.lower = Tensor::lower(n, 3);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        const Expr v = kHalf * total({dg({a, c, b}), dg({b, c, a}), -dg({c, a, b})});
        conn.lower({c, a, b}) = v;
        conn.lower({c, b, a}) = v;
      }
    }
  }
  conn.mixed = raise_index(conn.lower, 0, g_inv_);
  return conn;
}

Tensor GeometryBuilder::compute_F(const FormSet& a) {
  require_symbolic(a);
  const std::size_t n = dim();
  const Tensor da = partial(a.components);  // (I, a, b) = ∂_a A_Ib
  Tensor f = Tensor::lower(n, 2, a.sets);
  for (std::size_t i = 0; i < a.sets; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        const Expr v = da({i, x, y}) - da({i, y, x});
        f({i, x, y}) = v;
        f({i, y, x}) = -v;
      }
    }
  }
  return f;
}

Tensor GeometryBuilder::symmetric_derivative(const FormSet& a) {
  require_symbolic(a);
  return symmetrize(partial(a.components), 1, 2);
}

Tensor GeometryBuilder::mixed_form_product(const FormSet& a, const Tensor& f) {
  const std::size_t n = dim();
  Tensor w = Tensor::lower(n, 3);
  std::vector<Expr> terms;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t c = 0; c < n; ++c) {
        terms.clear();
        for (std::size_t i = 0; i < a.sets; ++i) {
          terms.push_back(a(i, x) * f({i, y, c}));
          terms.push_back(a(i, y) * f({i, x, c}));
        }
        w({x, y, c}) = total(terms);
      }
    }
  }
  return w;
}

Tensor GeometryBuilder::raised_forms(const FormSet& a) {
  require_symbolic(a);
  return raise_index(a.components, 1, g_inv_);
}

Connection GeometryBuilder::christoffel_factored(const FormSet& a, const Tensor& f) {
  require_symbolic(a);
  const std::size_t n = dim();
  const Tensor d = symmetric_derivative(a);
  const Tensor w = mixed_form_product(a, f);
  Connection conn;
  conn.route = Route::Factored;
  conn.lower = Tensor::lower(n, 3);
  std::vector<Expr> terms;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        terms.clear();
        for (std::size_t i = 0; i < a.sets; ++i) terms.push_back(a(i, c) * d({i, x, y}));
        terms.push_back(kHalf * w({x, y, c}));
        conn.lower({c, x, y}) = total(terms);
      }
    }
  }
  conn.mixed = raise_index(conn.lower, 0, g_inv_);
  return conn;
}

Tensor GeometryBuilder::compute_S_direct(const FormSet& a, const Connection& conn) {
  require_symbolic(a);
  const std::size_t n = dim();
  const Tensor d = symmetric_derivative(a);
  Tensor s = Tensor::lower(n, 2, a.sets);
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < a.sets; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x; y < n; ++y) {
        terms.assign(1, d({i, x, y}));
        for (std::size_t c = 0; c < n; ++c) terms.push_back(-(conn.mixed({c, x, y}) * a(i, c)));
        const Expr v = total(terms);
        s({i, x, y}) = v;
        s({i, y, x}) = v;
      }
    }
  }
  return s;
}

Tensor GeometryBuilder::compute_S_via_F(const FormSet& a, const Tensor& f) {
  require_symbolic(a);
  const std::size_t n = dim();
  const Tensor up = raised_forms(a);
  const Tensor w = mixed_form_product(a, f);
  Tensor s = Tensor::lower(n, 2, a.sets);
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < a.sets; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        terms.clear();
        for (std::size_t c = 0; c < n; ++c) terms.push_back(up({j, c}) * w({x, y, c}));
        s({j, x, y}) = Expr(-0.5) * total(terms);
      }
    }
  }
  return s;
}

Tensor GeometryBuilder::s_f_identity(const FormSet& a, const Tensor& s, const Tensor& f) {
  const std::size_t n = dim();
  const Tensor w = mixed_form_product(a, f);
  Tensor r = Tensor::lower(n, 3);
  std::vector<Expr> terms;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        terms.clear();
        for (std::size_t i = 0; i < a.sets; ++i) terms.push_back(a(i, c) * s({i, x, y}));
        terms.push_back(kHalf * w({x, y, c}));
        r({c, x, y}) = total(terms);
      }
    }
  }
  return r;
}

Tensor GeometryBuilder::compute_precurrents(const Tensor& f, const Connection& conn) {
  const std::size_t n = dim();
  const std::size_t m = f.set_extent();
  const Tensor df = partial(f);  // (I, a, b, c) = ∂_a F_Ibc
  Tensor j = Tensor::lower(n, 3, m);
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          terms.assign(1, df({i, x, b, c}));
          for (std::size_t d = 0; d < n; ++d) {
            terms.push_back(-(conn.mixed({d, x, b}) * f({i, d, c})));
            terms.push_back(-(conn.mixed({d, x, c}) * f({i, b, d})));
          }
          j({i, x, b, c}) = total(terms);
        }
      }
    }
  }
  return j;
}

Tensor GeometryBuilder::compute_currents(const Tensor& j_pre) {
  const std::size_t n = dim();
  const std::size_t m = j_pre.set_extent();
  Tensor j = Tensor::lower(n, 1, m);
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t b = 0; b < n; ++b) {
      terms.clear();
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t c = 0; c < n; ++c) {
          const Expr& gi = g_inv_({x, c});
          if (!gi.is_zero()) terms.push_back(gi * j_pre({i, c, x, b}));
        }
      }
      j({i, b}) = total(terms);
    }
  }
  return j;
}

Tensor GeometryBuilder::riemann_mixed(const Connection& conn) {
  const std::size_t n = dim();
  const Tensor dgam = partial(conn.mixed);  // (e, c, a, b) = ∂_e Γ^c_ab
  Tensor r(n, {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower});
  std::vector<Expr> terms;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          terms.clear();
          terms.push_back(dgam({c, a, b, d}));
          terms.push_back(-dgam({d, a, b, c}));
          for (std::size_t e = 0; e < n; ++e) {
            terms.push_back(conn.mixed({a, e, c}) * conn.mixed({e, b, d}));
            terms.push_back(-(conn.mixed({a, e, d}) * conn.mixed({e, b, c})));
          }
          const Expr v = total(terms);
          r({a, b, c, d}) = v;
          r({a, b, d, c}) = -v;
        }
      }
    }
  }
  return r;
}

Tensor GeometryBuilder::riemann_classical(const Connection& conn) {
  return lower_index(riemann_mixed(conn), 0, g_.g);
}

GeometryBuilder::Decomposition GeometryBuilder::riemann_decomposed(const FormSet& a,
                                                                   const Tensor& f,
                                                                   const Tensor& s,
                                                                   const Tensor& j_pre) {
  const std::size_t n = dim();
  Decomposition out{Tensor::lower(n, 4), Tensor::lower(n, 4), Tensor::lower(n, 4),
                    Tensor::lower(n, 4)};
  std::vector<Expr> tc, tf, ts;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) {
          tc.clear();
          tf.clear();
          ts.clear();
          for (std::size_t i = 0; i < a.sets; ++i) {
            tc.push_back(a(i, x) * j_pre({i, b, c, d}));
            tc.push_back(-(a(i, b) * j_pre({i, x, c, d})));
            tc.push_back(a(i, c) * j_pre({i, d, x, b}));
            tc.push_back(-(a(i, d) * j_pre({i, c, x, b})));
            tf.push_back(f({i, x, d}) * f({i, b, c}));
            tf.push_back(-(f({i, x, c}) * f({i, b, d})));
            tf.push_back(Expr(-2.0) * f({i, x, b}) * f({i, c, d}));
            ts.push_back(s({i, x, c}) * s({i, b, d}));
            ts.push_back(-(s({i, x, d}) * s({i, b, c})));
          }
          const Expr rc = kHalf * total(tc);
          const Expr rf = kQuarter * total(tf);
          const Expr rs = total(ts);
          out.current({x, b, c, d}) = rc;
          out.field({x, b, c, d}) = rf;
          out.shear({x, b, c, d}) = rs;
          out.total({x, b, c, d}) = total({rc, rf, rs});
        }
      }
    }
  }
  return out;
}

namespace {

GeometryBuilder::Curvature finish_curvature(Tensor ricci, const MetricField& g,
                                            const Tensor& g_inv) {
  const std::size_t n = g.dim();
  std::vector<Expr> terms;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!g_inv({a, b}).is_zero()) terms.push_back(g_inv({a, b}) * ricci({a, b}));
    }
  }
  GeometryBuilder::Curvature c;
  c.scalar = total(terms);
  c.einstein = Tensor::lower(n, 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      c.einstein({a, b}) = ricci({a, b}) - kHalf * g(a, b) * c.scalar;
    }
  }
  c.ricci = std::move(ricci);
  return c;
}

}  // namespace

GeometryBuilder::Curvature GeometryBuilder::contract(const Tensor& r) {
  const std::size_t n = dim();
  Tensor ricci = Tensor::lower(n, 2);
  std::vector<Expr> terms;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      terms.clear();
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) {
          if (!g_inv_({c, d}).is_zero()) terms.push_back(g_inv_({c, d}) * r({c, a, d, b}));
        }
      }
      ricci({a, b}) = total(terms);
    }
  }
  return finish_curvature(std::move(ricci), g_, g_inv_);
}

GeometryBuilder::Curvature GeometryBuilder::contract_mixed(const Tensor& r) {
  const std::size_t n = dim();
  Tensor ricci = Tensor::lower(n, 2);
  std::vector<Expr> terms;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      terms.clear();
      for (std::size_t c = 0; c < n; ++c) terms.push_back(r({c, a, c, b}));
      ricci({a, b}) = total(terms);
    }
  }
  return finish_curvature(std::move(ricci), g_, g_inv_);
}

GeometryBuilder::FactoredCurvature GeometryBuilder::ricci_einstein_factored(
    const FormSet& a, const Tensor& f, const Tensor& s, const Tensor& j_pre, const Tensor& j) {
  const std::size_t n = dim();
  const std::size_t m = a.sets;
  const Tensor a_up = raised_forms(a);          // A_I^c
  const Tensor j_up = raise_index(j, 1, g_inv_);  // J_I^a
  const Tensor f_mix = raise_index(f, 2, g_inv_);  // F_Ib^c
  const Tensor f_up = raise_index(f_mix, 1, g_inv_);
  const Tensor s_mix = raise_index(s, 2, g_inv_);  // S_Ib^c
  const Tensor s_up = raise_index(s_mix, 1, g_inv_);

  // Traces and full contractions.
  std::vector<Expr> s_trace(m);
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < m; ++i) {
    terms.clear();
    for (std::size_t x = 0; x < n; ++x) terms.push_back(s_mix({i, x, x}));
    s_trace[i] = total(terms);
  }
  auto full = [&](const Tensor& lo, const Tensor& up) {
    std::vector<Expr> t;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) t.push_back(lo({i, x, y}) * up({i, x, y}));
      }
    }
    return total(t);
  };
  const Expr ff = full(f, f_up);  // F_ab ⊙ F^ab
  const Expr ss = full(s, s_up);  // S_ab ⊙ S^ab
  terms.clear();
  for (std::size_t i = 0; i < m; ++i) terms.push_back(s_trace[i] * s_trace[i]);
  const Expr strace_sq = total(terms);  // S ⊙ S
  terms.clear();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t x = 0; x < n; ++x) terms.push_back(a(i, x) * j_up({i, x}));
  }
  const Expr aj = total(terms);  // A_a ⊙ J^a

  FactoredCurvature out;
  out.ricci = Tensor::lower(n, 2);
  out.t_field = Tensor::lower(n, 2);
  out.t_current = Tensor::lower(n, 2);
  out.t_shear = Tensor::lower(n, 2);
  out.einstein = Tensor::lower(n, 2);
  std::vector<Expr> cur, fld, shr;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      cur.clear();
      fld.clear();
      shr.clear();
      for (std::size_t i = 0; i < m; ++i) {
        cur.push_back(-(a(i, x) * j({i, y})));
        cur.push_back(-(a(i, y) * j({i, x})));
        for (std::size_t c = 0; c < n; ++c) {
          cur.push_back(a_up({i, c}) * j_pre({i, x, c, y}));
          cur.push_back(a_up({i, c}) * j_pre({i, y, c, x}));
          fld.push_back(f({i, x, c}) * f_mix({i, y, c}));
          shr.push_back(-(s({i, x, c}) * s_mix({i, y, c})));
        }
        shr.push_back(s_trace[i] * s({i, x, y}));
      }
      const Expr current = kHalf * total(cur);  // without the g_ab term
      const Expr field = total(fld);            // F_ac ⊙ F_b^c
      const Expr shear = total(shr);            // S⊙S_ab - S_ac⊙S_b^c
      const Expr& gxy = g_(x, y);
      out.ricci({x, y}) = total({current, Expr(-0.75) * field, shear});
      out.t_field({x, y}) = Expr(-0.75) * (field - kHalf * gxy * ff);
      out.t_current({x, y}) = current + gxy * aj;
      out.t_shear({x, y}) = total({shear, -(kHalf * gxy * strace_sq), kHalf * gxy * ss});
      out.einstein({x, y}) = total({out.t_field({x, y}), out.t_current({x, y}), out.t_shear({x, y})});
    }
  }
  out.scalar = total({Expr(-2.0) * aj, Expr(-0.75) * ff, strace_sq, -ss});
  return out;
}

Tensor GeometryBuilder::metric_covariant_derivative(const Connection& conn) {
  const std::size_t n = dim();
  const Tensor& dg = metric_derivative();
  Tensor r = Tensor::lower(n, 3);
  std::vector<Expr> terms;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        terms.assign(1, dg({c, a, b}));
        for (std::size_t d = 0; d < n; ++d) {
          terms.push_back(-(conn.mixed({d, c, a}) * g_(d, b)));
          terms.push_back(-(conn.mixed({d, c, b}) * g_(a, d)));
        }
        r({c, a, b}) = total(terms);
      }
    }
  }
  return r;
}

Tensor GeometryBuilder::contracted_bianchi(const Tensor& einstein, const Connection& conn) {
  const std::size_t n = dim();
  const Tensor dG = partial(einstein);  // (c, a, b) = ∂_c G_ab
  Tensor out = Tensor::lower(n, 1);
  std::vector<Expr> terms, inner;
  for (std::size_t a = 0; a < n; ++a) {
    terms.clear();
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        const Expr& gi = g_inv_({b, c});
        if (gi.is_zero()) continue;
        inner.assign(1, dG({c, a, b}));
        for (std::size_t d = 0; d < n; ++d) {
          inner.push_back(-(conn.mixed({d, c, a}) * einstein({d, b})));
          inner.push_back(-(conn.mixed({d, c, b}) * einstein({a, d})));
        }
        terms.push_back(gi * total(inner));
      }
    }
    out({a}) = total(terms);
  }
  return out;
}

Tensor GeometryBuilder::lie_derivative_metric(const FormSet& a) {
  const std::size_t n = dim();
  const Tensor x = raised_forms(a);
  const Tensor dx = partial(x);  // (I, a, c) = ∂_a X_I^c
  const Tensor& dg = metric_derivative();
  Tensor out = Tensor::lower(n, 2, a.sets);
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < a.sets; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        terms.clear();
        for (std::size_t c = 0; c < n; ++c) {
          terms.push_back(x({i, c}) * dg({c, p, q}));
          terms.push_back(g_(c, q) * dx({i, p, c}));
          terms.push_back(g_(p, c) * dx({i, q, c}));
        }
        out({i, p, q}) = total(terms);
      }
    }
  }
  return out;
}

const char* flatness_name(Flatness f) noexcept {
  switch (f) {
    case Flatness::Curved: return "CURVED";
    case Flatness::ClosedFlat: return "CLOSED_FLAT";
    case Flatness::Inconsistent: return "INCONSISTENT";
    case Flatness::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

std::optional<Flatness> parse_flatness(std::string_view name) {
  for (Flatness f : {Flatness::Curved, Flatness::ClosedFlat, Flatness::Inconsistent,
                     Flatness::Undetermined}) {
    if (name == flatness_name(f)) return f;
  }
  return std::nullopt;
}

Classification classify_flatness(std::optional<double> max_f, double max_riemann,
                                 double threshold) {
  Classification c;
  c.threshold = threshold;
  c.max_riemann = max_riemann;
  c.riemann_vanishes = max_riemann <= threshold;
  if (!max_f) return c;
  c.max_f = *max_f;
  c.forms_closed = *max_f <= threshold;
  if (!c.forms_closed) {
    c.verdict = Flatness::Curved;
  } else {
    c.verdict = c.riemann_vanishes ? Flatness::ClosedFlat : Flatness::Inconsistent;
  }
  return c;
}

}  // namespace takagi
