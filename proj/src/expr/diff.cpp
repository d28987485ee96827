#include "takagi/expr.hpp"

namespace takagi::expr {

Expr DerivativeCache::differentiate(const Expr& e, std::size_t coordinate) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Constant:
    case Kind::Parameter:
      return Expr(0.0);
    case Kind::Coordinate:
      return Expr(n.index == coordinate ? 1.0 : 0.0);
    default:
      break;
  }
  if (memo_.size() <= coordinate) memo_.resize(coordinate + 1);
  if (auto it = memo_[coordinate].find(e.id()); it != memo_[coordinate].end()) {
    return it->second.derivative;
  }

  auto d = [&](const Expr& x) { return differentiate(x, coordinate); };
  Expr result;
  switch (n.kind) {
    case Kind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(n.children.size());
      for (const Expr& c : n.children) terms.push_back(d(c));
      result = sum(std::move(terms));
      break;
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        Expr di = d(n.children[i]);
        if (di.is_zero()) continue;
        std::vector<Expr> f;
        f.reserve(n.children.size());
        for (std::size_t j = 0; j < n.children.size(); ++j) f.push_back(j == i ? di : n.children[j]);
        terms.push_back(product(std::move(f)));
      }
      result = sum(std::move(terms));
      break;
    }
    case Kind::Power: {
      const Expr& base = n.children[0];
      Expr db = d(base);
      if (db.is_zero()) {
        result = Expr(0.0);
      } else {
        const Rational p = n.exponent;
        result = product({Expr(p.value()), pow(base, p - Rational(1)), db});
      }
      break;
    }
    case Kind::Negate:
      result = -d(n.children[0]);
      break;
    case Kind::Quotient: {
      const Expr& a = n.children[0];
      const Expr& b = n.children[1];
      Expr da = d(a);
      Expr db = d(b);
      result = sum({product({da, pow(b, Rational(-1))}),
                    product({Expr(-1.0), a, db, pow(b, Rational(-2))})});
      break;
    }
    case Kind::Function: {
      const Expr& u = n.children[0];
      Expr du = d(u);
      if (du.is_zero()) {
        result = Expr(0.0);
        break;
      }
      switch (n.func) {
        case Func::Sin: result = product({cos(u), du}); break;
        case Func::Cos: result = product({Expr(-1.0), sin(u), du}); break;
        case Func::Tan: result = product({du, pow(cos(u), Rational(-2))}); break;
        case Func::Exp: result = product({e, du}); break;
        case Func::Log: result = product({du, pow(u, Rational(-1))}); break;
        case Func::Sinh: result = product({cosh(u), du}); break;
        case Func::Cosh: result = product({sinh(u), du}); break;
        case Func::Sqrt: result = product({Expr(0.5), du, pow(e, Rational(-1))}); break;
      }
      break;
    }
    default:
      break;
  }
  memo_[coordinate].emplace(e.id(), Entry{e, result});
  return result;
}

Expr differentiate(const Expr& e, std::size_t coordinate) {
  DerivativeCache cache;
  return cache.differentiate(e, coordinate);
}

}  // namespace takagi::expr
