#include "takagi/detail/scalar_ops.hpp"
#include "takagi/errors.hpp"
#include "takagi/expr.hpp"

namespace takagi::expr {

std::string describe(const Expr& e) {
  constexpr std::uint64_t kMaxPrinted = 400;
  if (e.tree_size() <= kMaxPrinted) return to_string(e);
  return "<expression with " + std::to_string(e.tree_size()) + " nodes>";
}

}  // namespace takagi::expr

namespace takagi::detail {

void raise_status(OpStatus s, const expr::Expr& where) {
  using expr::describe;
  switch (s) {
    case detail::OpStatus::DivisionByZero:
      throw EvalError("division by zero", describe(where));
    case detail::OpStatus::LogNonPositive:
      throw EvalError("log of non-positive real", describe(where));
    default:
      throw EvalError("non-finite result", describe(where));
  }
}

}  // namespace takagi::detail

namespace takagi::expr {

Evaluator::Evaluator(std::span<const double> point) : point_(point.begin(), point.end()) {}

Complex Evaluator::operator()(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Constant:
    case Kind::Parameter:
      return n.value;
    case Kind::Coordinate:
      if (n.index >= point_.size()) {
        throw EvalError("point does not supply coordinate", n.name);
      }
      return {point_[n.index], 0.0};
    default:
      break;
  }
  if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second.value;

  using namespace detail;
  Complex v;
  OpStatus status = OpStatus::Ok;
  switch (n.kind) {
    case Kind::Sum:
      v = (*this)(n.children[0]);
      for (std::size_t i = 1; i < n.children.size(); ++i) v = cadd(v, (*this)(n.children[i]));
      break;
    case Kind::Product:
      v = (*this)(n.children[0]);
      for (std::size_t i = 1; i < n.children.size(); ++i) v = cmul(v, (*this)(n.children[i]));
      break;
    case Kind::Power:
      status = cpow((*this)(n.children[0]), n.exponent.num(), n.exponent.den(), v);
      break;
    case Kind::Negate: {
      const Complex a = (*this)(n.children[0]);
      v = {-a.real(), -a.imag()};
      break;
    }
    case Kind::Quotient: {
      const Complex a = (*this)(n.children[0]);
      const Complex b = (*this)(n.children[1]);
      if (detail::is_zero(b)) {
        status = OpStatus::DivisionByZero;
      } else {
        v = cdiv(a, b);
      }
      break;
    }
    case Kind::Function:
      status = capply(n.func, (*this)(n.children[0]), v);
      break;
    default:
      break;
  }
  if (status == OpStatus::Ok && !detail::is_finite(v)) status = OpStatus::NonFinite;
  if (status != OpStatus::Ok) raise_status(status, e);
  memo_.emplace(e.id(), Entry{e, v});
  return v;
}

Complex eval(const Expr& e, std::span<const double> point) {
  Evaluator ev(point);
  return ev(e);
}

}  // namespace takagi::expr
