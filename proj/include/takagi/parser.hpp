#pragma once

// Text DSL for metric components.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' rational)?
//   base   := number | symbol | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | tan | exp | log | sinh | cosh | sqrt
//   number := decimal literal, optional exponent, optional 'i' suffix
//   rational := ['-'] integer | decimal | '(' ['-'] integer ['/' integer] ')'
//
// Unary minus binds looser than '^', so "-r^2" is -(r^2). Symbols resolve to
// chart coordinates first, then declared constants, then the builtin `pi`.

#include <string_view>

#include "takagi/chart.hpp"
#include "takagi/expr.hpp"

namespace takagi {

// Throws ParseError (with byte offset) or UnknownSymbolError.
expr::Expr parse_expr(std::string_view source, const Chart& chart, const Constants& constants = {});

}  // namespace takagi
