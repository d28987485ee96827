#pragma once

// Symbolic scalar expressions over chart coordinates.
//
// An Expr is an immutable handle to a node in a directed acyclic graph.
// Subtrees are shared freely; nothing is mutated after construction, so
// expressions may be evaluated concurrently from any number of threads.
//
// Two families of constructors exist:
//   * raw_* builders keep exactly the structure they are given (the parser
//     uses them, so simplify() has something to do);
//   * the arithmetic operators and sum()/product()/pow()/apply() perform
//     light normalization on the fly: constant folding, 0/1 identities,
//     flattening, like-term and like-base collection.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace takagi::expr {

using Complex = std::complex<double>;

// Exact rational exponent p/q with q > 0 and gcd(p, q) = 1.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class Kind : std::uint8_t {
  Constant,
  Coordinate,
  Parameter,  // named constant with a bound numeric value (e.g. M in Schwarzschild)
  Sum,
  Product,
  Power,
  Negate,
  Quotient,
  Function,
};

enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sinh, Cosh, Sqrt };

const char* func_name(Func f) noexcept;

class Node;

class Expr {
 public:
  Expr();  // the constant 0
  Expr(double value);   // NOLINT(google-explicit-constructor)
  Expr(Complex value);  // NOLINT(google-explicit-constructor)

  static Expr constant(Complex value);
  static Expr coordinate(std::size_t index, std::string name);
  static Expr parameter(std::string name, double value);

  static Expr raw_sum(std::vector<Expr> terms);
  static Expr raw_product(std::vector<Expr> factors);
  static Expr raw_power(Expr base, Rational exponent);
  static Expr raw_negate(Expr operand);
  static Expr raw_quotient(Expr numerator, Expr denominator);
  static Expr raw_function(Func f, Expr argument);

  const Node& node() const noexcept { return *node_; }
  // Identity of the underlying node; stable for the lifetime of the Expr.
  const Node* id() const noexcept { return node_.get(); }

  Kind kind() const noexcept;
  std::span<const Expr> children() const noexcept;
  std::size_t hash() const noexcept;
  // Node count of the expression viewed as a tree (saturating).
  std::uint64_t tree_size() const noexcept;

  bool is_constant() const noexcept { return kind() == Kind::Constant; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  Complex constant_value() const noexcept;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend class NodeBuilder;
};

class Node {
 public:
  Kind kind = Kind::Constant;
  Func func = Func::Sin;
  Complex value{};          // Constant value, or Parameter value (real)
  std::size_t index = 0;    // Coordinate index
  std::string name;         // Coordinate / Parameter name
  Rational exponent{1};     // Power exponent
  std::vector<Expr> children;
  std::size_t hash = 0;
  std::uint64_t tree_size = 1;
};

bool structurally_equal(const Expr& a, const Expr& b);

// Normalizing constructors.
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr pow(const Expr& base, Rational exponent);
Expr apply(Func f, const Expr& argument);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

inline Expr sin(const Expr& e) { return apply(Func::Sin, e); }
inline Expr cos(const Expr& e) { return apply(Func::Cos, e); }
inline Expr tan(const Expr& e) { return apply(Func::Tan, e); }
inline Expr exp(const Expr& e) { return apply(Func::Exp, e); }
inline Expr log(const Expr& e) { return apply(Func::Log, e); }
inline Expr sinh(const Expr& e) { return apply(Func::Sinh, e); }
inline Expr cosh(const Expr& e) { return apply(Func::Cosh, e); }
inline Expr sqrt(const Expr& e) { return apply(Func::Sqrt, e); }

// DSL text for `e`; parse(to_string(e)) evaluates identically to e.
std::string to_string(const Expr& e);
// to_string for small expressions, a size summary for large ones.
std::string describe(const Expr& e);

// ---------------------------------------------------------------------------
// Differentiation

// Memoizes derivatives of shared subgraphs so repeated differentiation of a
// DAG stays linear in its node count. Not thread-safe; use one per thread.
class DerivativeCache {
 public:
  Expr differentiate(const Expr& e, std::size_t coordinate);

 private:
  struct Entry {
    Expr source;
    Expr derivative;
  };
  std::vector<std::unordered_map<const Node*, Entry>> memo_;
};

// Exact partial derivative with respect to coordinate `coordinate` (0-based).
Expr differentiate(const Expr& e, std::size_t coordinate);

// ---------------------------------------------------------------------------
// Evaluation

// Evaluates expressions at one point, memoizing shared subexpressions.
// Throws EvalError on domain errors. Not thread-safe; use one per thread.
class Evaluator {
 public:
  explicit Evaluator(std::span<const double> point);
  Complex operator()(const Expr& e);

 private:
  std::vector<double> point_;
  struct Entry {
    Expr source;
    Complex value;
  };
  std::unordered_map<const Node*, Entry> memo_;
};

Complex eval(const Expr& e, std::span<const double> point);

// ---------------------------------------------------------------------------
// Simplification

// Value-preserving normalization. Never returns a larger tree than its input.
Expr simplify(const Expr& e);

}  // namespace takagi::expr
