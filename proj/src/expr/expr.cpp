#include "takagi/expr.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "takagi/detail/scalar_ops.hpp"

namespace takagi::expr {

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational operator+(Rational a, Rational b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}
Rational operator-(Rational a, Rational b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}
Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

const char* func_name(Func f) noexcept {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Node construction

namespace {

constexpr std::uint64_t kSizeCap = std::numeric_limits<std::uint64_t>::max() / 4;

std::size_t mix(std::size_t h, std::size_t v) {
  // 64-bit variant of boost::hash_combine.
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4));
}

std::size_t hash_double(double d) {
  if (d == 0.0) d = 0.0;  // fold -0 into +0
  return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(d));
}

}  // namespace

class NodeBuilder {
 public:
  static Expr finish(Node n) {
    std::size_t h = mix(0x51ed270b27a3f8a1ULL, static_cast<std::size_t>(n.kind));
    std::uint64_t size = 1;
    switch (n.kind) {
      case Kind::Constant:
        h = mix(h, hash_double(n.value.real()));
        h = mix(h, hash_double(n.value.imag()));
        break;
      case Kind::Coordinate:
        h = mix(h, n.index);
        break;
      case Kind::Parameter:
        h = mix(h, std::hash<std::string>{}(n.name));
        h = mix(h, hash_double(n.value.real()));
        break;
      case Kind::Power:
        h = mix(h, static_cast<std::size_t>(n.exponent.num()));
        h = mix(h, static_cast<std::size_t>(n.exponent.den()));
        break;
      case Kind::Function:
        h = mix(h, static_cast<std::size_t>(n.func));
        break;
      default:
        break;
    }
    for (const Expr& c : n.children) {
      h = mix(h, c.hash());
      size = std::min(kSizeCap, size + c.tree_size());
    }
    n.hash = h;
    n.tree_size = size;
    return Expr(std::make_shared<const Node>(std::move(n)));
  }
};

Expr::Expr() : Expr(Complex{0.0, 0.0}) {}
Expr::Expr(double value) : Expr(Complex{value, 0.0}) {}
Expr::Expr(Complex value) : Expr(constant(value)) {}

Expr Expr::constant(Complex value) {
  Node n;
  n.kind = Kind::Constant;
  // Normalize signed zeros so structurally equal constants hash equally.
  n.value = {value.real() + 0.0, value.imag() + 0.0};
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::coordinate(std::size_t index, std::string name) {
  Node n;
  n.kind = Kind::Coordinate;
  n.index = index;
  n.name = std::move(name);
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::parameter(std::string name, double value) {
  Node n;
  n.kind = Kind::Parameter;
  n.name = std::move(name);
  n.value = {value, 0.0};
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::raw_sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr(0.0);
  if (terms.size() == 1) return terms.front();
  Node n;
  n.kind = Kind::Sum;
  n.children = std::move(terms);
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::raw_product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1.0);
  if (factors.size() == 1) return factors.front();
  Node n;
  n.kind = Kind::Product;
  n.children = std::move(factors);
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::raw_power(Expr base, Rational exponent) {
  Node n;
  n.kind = Kind::Power;
  n.exponent = exponent;
  n.children.push_back(std::move(base));
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::raw_negate(Expr operand) {
  Node n;
  n.kind = Kind::Negate;
  n.children.push_back(std::move(operand));
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::raw_quotient(Expr numerator, Expr denominator) {
  Node n;
  n.kind = Kind::Quotient;
  n.children.push_back(std::move(numerator));
  n.children.push_back(std::move(denominator));
  return NodeBuilder::finish(std::move(n));
}

Expr Expr::raw_function(Func f, Expr argument) {
  Node n;
  n.kind = Kind::Function;
  n.func = f;
  n.children.push_back(std::move(argument));
  return NodeBuilder::finish(std::move(n));
}

Kind Expr::kind() const noexcept { return node_->kind; }
std::span<const Expr> Expr::children() const noexcept { return node_->children; }
std::size_t Expr::hash() const noexcept { return node_->hash; }
std::uint64_t Expr::tree_size() const noexcept { return node_->tree_size; }

bool Expr::is_zero() const noexcept {
  return node_->kind == Kind::Constant && node_->value == Complex{0.0, 0.0};
}
bool Expr::is_one() const noexcept {
  return node_->kind == Kind::Constant && node_->value == Complex{1.0, 0.0};
}
Complex Expr::constant_value() const noexcept { return node_->value; }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.hash != y.hash || x.kind != y.kind || x.tree_size != y.tree_size ||
      x.children.size() != y.children.size()) {
    return false;
  }
  switch (x.kind) {
    case Kind::Constant:
      if (x.value != y.value) return false;
      break;
    case Kind::Coordinate:
      if (x.index != y.index) return false;
      break;
    case Kind::Parameter:
      if (x.name != y.name || x.value != y.value) return false;
      break;
    case Kind::Power:
      if (!(x.exponent == y.exponent)) return false;
      break;
    case Kind::Function:
      if (x.func != y.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!structurally_equal(x.children[i], y.children[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Normalizing constructors

namespace {

// Small insertion-ordered map keyed by structural equality.
template <class Value>
class StructuralMap {
 public:
  Value& operator[](const Expr& key) {
    auto [lo, hi] = index_.equal_range(key.hash());
    for (auto it = lo; it != hi; ++it) {
      if (structurally_equal(entries_[it->second].first, key)) return entries_[it->second].second;
    }
    index_.emplace(key.hash(), entries_.size());
    entries_.emplace_back(key, Value{});
    return entries_.back().second;
  }
  std::vector<std::pair<Expr, Value>>& entries() { return entries_; }

 private:
  std::vector<std::pair<Expr, Value>> entries_;
  std::unordered_multimap<std::size_t, std::size_t> index_;
};

bool less_by_hash(const Expr& a, const Expr& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash();
  return a.tree_size() < b.tree_size();
}

// Splits a term into numeric coefficient and symbolic remainder.
std::pair<Complex, Expr> split_coefficient(const Expr& term) {
  switch (term.kind()) {
    case Kind::Constant:
      return {term.constant_value(), Expr(1.0)};
    case Kind::Negate: {
      auto [c, rest] = split_coefficient(term.children()[0]);
      return {-c, rest};
    }
    case Kind::Product: {
      const auto ch = term.children();
      if (ch[0].is_constant()) {
        if (ch.size() == 2) return {ch[0].constant_value(), ch[1]};
        return {ch[0].constant_value(), Expr::raw_product({ch.begin() + 1, ch.end()})};
      }
      return {Complex{1.0, 0.0}, term};
    }
    default:
      return {Complex{1.0, 0.0}, term};
  }
}

Expr scale(Complex c, const Expr& rest) {
  if (c == Complex{0.0, 0.0}) return Expr(0.0);
  if (rest.is_one()) return Expr::constant(c);
  if (c == Complex{1.0, 0.0}) return rest;
  std::vector<Expr> f;
  f.reserve(rest.kind() == Kind::Product ? rest.children().size() + 1 : 2);
  f.push_back(Expr::constant(c));
  if (rest.kind() == Kind::Product) {
    f.insert(f.end(), rest.children().begin(), rest.children().end());
  } else {
    f.push_back(rest);
  }
  return Expr::raw_product(std::move(f));
}

// Matches Power(Function f (u), 2); returns u.
const Expr* squared_function_argument(const Expr& e, Func f) {
  if (e.kind() != Kind::Power || !(e.node().exponent == Rational(2))) return nullptr;
  const Expr& base = e.children()[0];
  if (base.kind() != Kind::Function || base.node().func != f) return nullptr;
  return &base.children()[0];
}

struct SquaredSplit {
  const Expr* argument;  // u in f(u)^2
  Expr rest;             // remaining factors, 1 when none
};

// Matches f(u)^2 or a product with exactly one such factor.
std::optional<SquaredSplit> split_squared(const Expr& e, Func f) {
  if (const Expr* u = squared_function_argument(e, f)) return SquaredSplit{u, Expr(1.0)};
  if (e.kind() != Kind::Product) return std::nullopt;
  const auto ch = e.children();
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const Expr* u = squared_function_argument(ch[i], f);
    if (u == nullptr) continue;
    std::vector<Expr> rest;
    for (std::size_t j = 0; j < ch.size(); ++j) {
      if (j != i) rest.push_back(ch[j]);
    }
    return SquaredSplit{u, rest.size() == 1 ? rest.front() : Expr::raw_product(std::move(rest))};
  }
  return std::nullopt;
}

void flatten_sum(const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == Kind::Sum) {
    for (const Expr& c : e.children()) flatten_sum(c, out);
  } else {
    out.push_back(e);
  }
}

}  // namespace

Expr sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (const Expr& t : terms) flatten_sum(t, flat);

  Complex constant{0.0, 0.0};
  StructuralMap<Complex> collected;
  for (const Expr& t : flat) {
    auto [c, rest] = split_coefficient(t);
    if (rest.is_one()) {
      constant += c;
    } else {
      collected[rest] += c;
    }
  }

  // c*R*sin(u)^2 + c*R*cos(u)^2 -> c*R
  auto& entries = collected.entries();
  std::vector<Expr> merged;
  for (auto& [key, coeff] : entries) {
    if (coeff == Complex{0.0, 0.0}) continue;
    const auto s = split_squared(key, Func::Sin);
    if (!s) continue;
    for (auto& [other, other_coeff] : entries) {
      if (other_coeff != coeff) continue;
      const auto c = split_squared(other, Func::Cos);
      if (c && structurally_equal(*s->argument, *c->argument) &&
          structurally_equal(s->rest, c->rest)) {
        merged.push_back(scale(coeff, s->rest));
        coeff = other_coeff = Complex{0.0, 0.0};
        break;
      }
    }
  }

  std::vector<Expr> out;
  out.reserve(entries.size() + 1);
  for (auto& [key, coeff] : entries) {
    if (coeff != Complex{0.0, 0.0}) out.push_back(scale(coeff, key));
  }
  if (!merged.empty()) {
    out.insert(out.end(), merged.begin(), merged.end());
    out.push_back(Expr::constant(constant));
    return sum(std::move(out));
  }
  std::stable_sort(out.begin(), out.end(), less_by_hash);
  if (constant != Complex{0.0, 0.0}) out.push_back(Expr::constant(constant));
  if (out.empty()) return Expr(0.0);
  if (out.size() == 1) return out.front();
  return Expr::raw_sum(std::move(out));
}

namespace {

void collect_factor(const Expr& f, Rational exponent, Complex& coeff,
                    StructuralMap<Rational>& bases) {
  switch (f.kind()) {
    case Kind::Constant: {
      Complex v;
      if (detail::cpow(f.constant_value(), exponent.num(), exponent.den(), v) ==
              detail::OpStatus::Ok &&
          detail::is_finite(v)) {
        coeff = detail::cmul(coeff, v);
      } else {
        bases[f] = bases[f] + exponent;
      }
      return;
    }
    case Kind::Negate:
      if (exponent.is_integer()) {
        if (exponent.num() % 2 != 0) coeff = -coeff;
        collect_factor(f.children()[0], exponent, coeff, bases);
        return;
      }
      break;
    case Kind::Product:
      if (exponent.is_integer()) {
        for (const Expr& c : f.children()) collect_factor(c, exponent, coeff, bases);
        return;
      }
      break;
    case Kind::Quotient:
      if (exponent.is_integer()) {
        collect_factor(f.children()[0], exponent, coeff, bases);
        collect_factor(f.children()[1], Rational(-1) * exponent, coeff, bases);
        return;
      }
      break;
    case Kind::Power:
      if (exponent.is_integer()) {
        collect_factor(f.children()[0], f.node().exponent * exponent, coeff, bases);
        return;
      }
      break;
    case Kind::Function:
      if (f.node().func == Func::Sqrt && exponent.is_integer()) {
        collect_factor(f.children()[0], Rational(1, 2) * exponent, coeff, bases);
        return;
      }
      break;
    default:
      break;
  }
  Rational& e = bases[f];
  e = e + exponent;
}

Expr rebuild_power(const Expr& base, Rational e) {
  if (e == Rational(1)) return base;
  if (e == Rational(1, 2)) return Expr::raw_function(Func::Sqrt, base);
  return Expr::raw_power(base, e);
}

Expr product_from(const Complex& coeff_in, StructuralMap<Rational>& bases) {
  Complex coeff = coeff_in;
  if (coeff == Complex{0.0, 0.0}) return Expr(0.0);
  std::vector<Expr> factors;
  for (auto& [base, e] : bases.entries()) {
    if (e.num() == 0) continue;
    factors.push_back(rebuild_power(base, e));
  }
  std::stable_sort(factors.begin(), factors.end(), less_by_hash);
  if (factors.empty()) return Expr::constant(coeff);
  if (coeff != Complex{1.0, 0.0}) factors.insert(factors.begin(), Expr::constant(coeff));
  if (factors.size() == 1) return factors.front();
  return Expr::raw_product(std::move(factors));
}

}  // namespace

Expr product(std::vector<Expr> factors) {
  Complex coeff{1.0, 0.0};
  StructuralMap<Rational> bases;
  for (const Expr& f : factors) {
    if (f.is_zero()) return Expr(0.0);
    collect_factor(f, Rational(1), coeff, bases);
  }
  return product_from(coeff, bases);
}

Expr pow(const Expr& base, Rational exponent) {
  if (exponent.num() == 0) return Expr(1.0);
  if (exponent == Rational(1)) return base;
  if (base.is_constant()) {
    Complex v;
    if (detail::cpow(base.constant_value(), exponent.num(), exponent.den(), v) ==
            detail::OpStatus::Ok &&
        detail::is_finite(v)) {
      return Expr::constant(v);
    }
    return Expr::raw_power(base, exponent);
  }
  if (exponent.is_integer()) {
    Complex coeff{1.0, 0.0};
    StructuralMap<Rational> bases;
    collect_factor(base, exponent, coeff, bases);
    return product_from(coeff, bases);
  }
  return rebuild_power(base, exponent);
}

Expr apply(Func f, const Expr& argument) {
  if (argument.is_constant()) {
    Complex v;
    if (detail::capply(f, argument.constant_value(), v) == detail::OpStatus::Ok &&
        detail::is_finite(v)) {
      return Expr::constant(v);
    }
    return Expr::raw_function(f, argument);
  }
  if (f == Func::Exp && argument.kind() == Kind::Function && argument.node().func == Func::Log) {
    return argument.children()[0];
  }
  return Expr::raw_function(f, argument);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return sum({a, b});
}
Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  return sum({a, -b});
}
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return product({a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr(0.0);
  return product({a, pow(b, Rational(-1))});
}
Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  return product({Expr(-1.0), a});
}
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

}  // namespace takagi::expr
