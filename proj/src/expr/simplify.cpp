#include <unordered_map>

#include "takagi/expr.hpp"

namespace takagi::expr {

namespace {

class Simplifier {
 public:
  Expr run(const Expr& e) {
    const Node& n = e.node();
    if (n.children.empty()) return e;
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second.second;

    std::vector<Expr> ch;
    ch.reserve(n.children.size());
    for (const Expr& c : n.children) ch.push_back(run(c));

    Expr r;
    switch (n.kind) {
      case Kind::Sum: r = sum(std::move(ch)); break;
      case Kind::Product: r = product(std::move(ch)); break;
      case Kind::Power: r = pow(ch[0], n.exponent); break;
      case Kind::Negate: r = -ch[0]; break;
      case Kind::Quotient: r = ch[0] / ch[1]; break;
      case Kind::Function: r = apply(n.func, ch[0]); break;
      default: r = e; break;
    }
    if (r.tree_size() > e.tree_size()) r = e;
    memo_.emplace(e.id(), std::pair{e, r});
    return r;
  }

 private:
  std::unordered_map<const Node*, std::pair<Expr, Expr>> memo_;
};

}  // namespace

Expr simplify(const Expr& e) {
  Simplifier s;
  return s.run(e);
}

}  // namespace takagi::expr
