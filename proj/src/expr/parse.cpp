#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <string>

#include "takagi/errors.hpp"
#include "takagi/parser.hpp"

namespace takagi {

using expr::Complex;
using expr::Expr;
using expr::Func;
using expr::Rational;

namespace {

std::optional<Func> lookup_function(std::string_view name) {
  static constexpr std::pair<std::string_view, Func> kFuncs[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"exp", Func::Exp},
      {"log", Func::Log},   {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"sqrt", Func::Sqrt},
  };
  for (const auto& [n, f] : kFuncs) {
    if (n == name) return f;
  }
  return std::nullopt;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view src, const Chart& chart, const Constants& constants)
      : src_(src), chart_(chart), constants_(constants) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    // Syntax errors take precedence, so unknown names are reported only once
    // the whole source has parsed.
    if (unknown_) throw UnknownSymbolError(unknown_->first, unknown_->second);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  // Running out of input is reported at the last byte of the source, where
  // the missing token was due.
  [[noreturn]] void fail_eof(const std::string& what) const {
    throw ParseError(what, src_.empty() ? 0 : src_.size() - 1);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (at_end()) fail_eof(std::string("expected '") + c + "' before end of input");
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_expr() {
    std::vector<Expr> terms;
    terms.push_back(parse_term());
    for (;;) {
      if (accept('+')) {
        terms.push_back(parse_term());
      } else if (accept('-')) {
        terms.push_back(Expr::raw_negate(parse_term()));
      } else {
        break;
      }
    }
    return Expr::raw_sum(std::move(terms));
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    std::vector<Expr> factors{acc};
    for (;;) {
      if (accept('*')) {
        factors.push_back(parse_factor());
      } else if (accept('/')) {
        Expr num = Expr::raw_product(std::move(factors));
        factors = {Expr::raw_quotient(std::move(num), parse_factor())};
      } else {
        break;
      }
    }
    return Expr::raw_product(std::move(factors));
  }

  Expr parse_factor() {
    if (accept('-')) return Expr::raw_negate(parse_factor());
    Expr b = parse_base();
    if (accept('^')) return Expr::raw_power(std::move(b), parse_rational());
    return b;
  }

  std::int64_t parse_integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (start == pos_) {
      if (pos_ >= src_.size()) fail_eof("expected integer before end of input");
      fail("expected integer");
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc()) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  Rational parse_rational() {
    skip_ws();
    if (pos_ >= src_.size()) fail_eof("expected exponent before end of input");
    if (accept('(')) {
      const bool neg = accept('-');
      std::int64_t num = parse_integer();
      std::int64_t den = 1;
      if (accept('/')) {
        const std::size_t at = pos_;
        den = parse_integer();
        if (den == 0) {
          pos_ = at;
          fail("zero denominator in exponent");
        }
      }
      expect(')');
      return {neg ? -num : num, den};
    }
    const bool neg = accept('-');
    skip_ws();
    const std::size_t start = pos_;
    std::int64_t whole = parse_integer();
    std::int64_t num = whole;
    std::int64_t den = 1;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) {
        if (den > 1'000'000'000'000LL) {
          pos_ = start;
          fail("exponent has too many decimal places");
        }
        num = num * 10 + (src_[pos_] - '0');
        den *= 10;
        ++pos_;
      }
    }
    return {neg ? -num : num, den};
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && is_digit(src_[q])) {
        pos_ = q;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      }
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || p != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    bool imaginary = false;
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        !(pos_ + 1 < src_.size() && is_ident_char(src_[pos_ + 1]))) {
      imaginary = true;
      ++pos_;
    }
    if (pos_ < src_.size() && is_ident_char(src_[pos_])) fail("malformed number");
    return Expr::constant(imaginary ? Complex{0.0, v} : Complex{v, 0.0});
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) fail_eof("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      const std::string name(src_.substr(start, pos_ - start));
      if (auto f = lookup_function(name)) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') {
          ++pos_;
          Expr arg = parse_expr();
          expect(')');
          return Expr::raw_function(*f, std::move(arg));
        }
        if (pos_ >= src_.size()) fail_eof("expected '(' after function name");
        fail("expected '(' after function name");
      }
      if (auto idx = chart_.index_of(name)) return Expr::coordinate(*idx, name);
      for (const auto& k : constants_) {
        if (k.name == name) return Expr::parameter(name, k.value);
      }
      if (name == "pi") return Expr::constant(Complex{std::numbers::pi, 0.0});
      if (!unknown_) unknown_.emplace(name, start);
      return Expr(0.0);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  const Chart& chart_;
  const Constants& constants_;
  std::size_t pos_ = 0;
  std::optional<std::pair<std::string, std::size_t>> unknown_;
};

}  // namespace

Expr parse_expr(std::string_view source, const Chart& chart, const Constants& constants) {
  return Parser(source, chart, constants).parse();
}

}  // namespace takagi
