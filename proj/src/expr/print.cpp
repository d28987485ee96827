#include <cmath>
#include <cstdio>
#include <string>

#include "takagi/errors.hpp"
#include "takagi/expr.hpp"

namespace takagi::expr {

namespace {

enum Prec : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string format_double(double v) {
  if (!std::isfinite(v)) throw Error("cannot print non-finite constant");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_rational(Rational r) {
  if (r.is_integer() && r.num() >= 0) return std::to_string(r.num());
  if (r.is_integer()) return "(" + std::to_string(r.num()) + ")";
  return "(" + std::to_string(r.num()) + "/" + std::to_string(r.den()) + ")";
}

class Printer {
 public:
  std::string print(const Expr& e, int parent) {
    const Node& n = e.node();
    switch (n.kind) {
      case Kind::Constant:
        return constant(n.value, parent);
      case Kind::Coordinate:
      case Kind::Parameter:
        return n.name;
      case Kind::Sum:
        return wrap(sum(e), kSum, parent);
      case Kind::Product:
        return product(e, parent);
      case Kind::Power:
        return wrap(print(n.children[0], kAtom) + "^" + format_rational(n.exponent), kPower,
                    parent);
      case Kind::Negate:
        return wrap("-" + print(n.children[0], kUnary), kSum, parent);
      case Kind::Quotient:
        return wrap(print(n.children[0], kProduct) + "/" + print(n.children[1], kUnary),
                    kProduct, parent);
      case Kind::Function:
        return std::string(func_name(n.func)) + "(" + print(n.children[0], 0) + ")";
    }
    return {};
  }

 private:
  static std::string wrap(std::string s, int own, int parent) {
    return own < parent ? "(" + s + ")" : s;
  }

  static std::string constant(Complex v, int parent) {
    if (v.imag() == 0.0) {
      std::string s = format_double(v.real());
      return v.real() < 0.0 ? wrap(s, kSum, parent) : s;
    }
    if (v.real() == 0.0) {
      std::string s = format_double(v.imag()) + "i";
      return v.imag() < 0.0 ? wrap(s, kSum, parent) : s;
    }
    std::string s = format_double(v.real());
    s += v.imag() < 0.0 ? " - " : " + ";
    s += format_double(std::abs(v.imag())) + "i";
    return wrap(s, kSum, parent);
  }

  // Product whose leading constant is a negative real prints as a subtraction.
  static bool negative_leading(const Expr& e) {
    if (e.kind() == Kind::Product && e.children()[0].is_constant()) {
      const Complex c = e.children()[0].constant_value();
      return c.imag() == 0.0 && c.real() < 0.0;
    }
    return false;
  }

  std::string sum(const Expr& e) {
    std::string out;
    bool first = true;
    for (const Expr& t : e.children()) {
      if (!first && negative_leading(t)) {
        std::vector<Expr> f(t.children().begin(), t.children().end());
        f[0] = Expr::constant(-f[0].constant_value());
        out += " - " + print(f[0].is_one() ? Expr::raw_product({f.begin() + 1, f.end()})
                                           : Expr::raw_product(std::move(f)),
                             kProduct);
      } else if (!first && t.kind() == Kind::Negate) {
        out += " - " + print(t.children()[0], kProduct);
      } else {
        out += first ? print(t, kSum) : " + " + print(t, kSum);
      }
      first = false;
    }
    return out;
  }

  std::string product(const Expr& e, int parent) {
    std::vector<Expr> num;
    std::vector<Expr> den;
    bool negate = false;
    for (const Expr& f : e.children()) {
      if (f.kind() == Kind::Power && f.node().exponent.num() < 0) {
        den.push_back(pow_or_base(f.children()[0], Rational(-1) * f.node().exponent));
      } else if (&f == &e.children()[0] && f.is_constant() && f.constant_value().imag() == 0.0 &&
                 f.constant_value().real() == -1.0) {
        negate = true;
      } else {
        num.push_back(f);
      }
    }
    std::string s;
    if (num.empty()) {
      s = "1";
    } else {
      for (std::size_t i = 0; i < num.size(); ++i) {
        if (i) s += "*";
        s += print(num[i], kUnary);
      }
    }
    if (!den.empty()) {
      s += "/";
      if (den.size() == 1) {
        s += print(den[0], kUnary);
      } else {
        std::string d;
        for (std::size_t i = 0; i < den.size(); ++i) {
          if (i) d += "*";
          d += print(den[i], kUnary);
        }
        s += "(" + d + ")";
      }
    }
    if (negate) return wrap("-" + wrap(s, kUnary, kUnary), kSum, parent);
    return wrap(s, kProduct, parent);
  }

  static Expr pow_or_base(const Expr& base, Rational e) {
    return e == Rational(1) ? base : Expr::raw_power(base, e);
  }
};

}  // namespace

std::string to_string(const Expr& e) {
  Printer p;
  return p.print(e, 0);
}

}  // namespace takagi::expr
