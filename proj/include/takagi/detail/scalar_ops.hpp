#pragma once

// Per-value arithmetic shared by the recursive evaluator, the tape's
// per-lane fallback and the scalar SIMD reference kernels. All three must
// round identically, so every path goes through these helpers.
//
// A value whose imaginary part is exactly zero is treated as real: the real
// formula is used and the result carries a +0 imaginary part. This keeps
// principal-branch functions (sqrt, log, fractional powers) on the correct
// side of the negative real axis regardless of signed zeros.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "takagi/expr.hpp"

namespace takagi::detail {

using Complex = std::complex<double>;

enum class OpStatus : std::uint8_t { Ok, DivisionByZero, LogNonPositive, NonFinite };

// Throws the EvalError matching a non-Ok status, naming `where`.
[[noreturn]] void raise_status(OpStatus s, const expr::Expr& where);

inline bool is_real(Complex z) noexcept { return z.imag() == 0.0; }

inline Complex cadd(Complex a, Complex b) noexcept {
  return {a.real() + b.real(), a.imag() + b.imag()};
}

inline Complex csub(Complex a, Complex b) noexcept {
  return {a.real() - b.real(), a.imag() - b.imag()};
}

inline Complex cmul(Complex a, Complex b) noexcept {
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  return {ar * br - ai * bi, ar * bi + ai * br};
}

// Caller checks for a zero divisor.
inline Complex cdiv(Complex a, Complex b) noexcept {
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  if (ai == 0.0 && bi == 0.0) return {ar / br, 0.0};
  const double d = br * br + bi * bi;
  return {(ar * br + ai * bi) / d, (ai * br - ar * bi) / d};
}

inline bool is_zero(Complex z) noexcept { return z.real() == 0.0 && z.imag() == 0.0; }

inline Complex csqrt(Complex z) noexcept {
  if (is_real(z)) {
    const double x = z.real();
    return x >= 0.0 ? Complex{std::sqrt(x), 0.0} : Complex{0.0, std::sqrt(-x)};
  }
  return std::sqrt(z);
}

inline OpStatus clog(Complex z, Complex& out) noexcept {
  if (is_real(z)) {
    if (z.real() <= 0.0) return OpStatus::LogNonPositive;
    out = {std::log(z.real()), 0.0};
    return OpStatus::Ok;
  }
  out = std::log(z);
  return OpStatus::Ok;
}

inline Complex cpow_int(Complex z, std::int64_t k) noexcept {
  Complex result{1.0, 0.0};
  Complex base = z;
  std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  while (e != 0) {
    if (e & 1U) result = cmul(result, base);
    e >>= 1U;
    if (e != 0) base = cmul(base, base);
  }
  return result;
}

// Principal-branch z^(num/den), den > 0.
inline OpStatus cpow(Complex z, std::int64_t num, std::int64_t den, Complex& out) noexcept {
  if (den == 1) {
    if (num >= 0) {
      out = cpow_int(z, num);
      return OpStatus::Ok;
    }
    const Complex p = cpow_int(z, -num);
    if (is_zero(p)) return OpStatus::DivisionByZero;
    out = cdiv(Complex{1.0, 0.0}, p);
    return OpStatus::Ok;
  }
  if (is_zero(z)) {
    if (num < 0) return OpStatus::DivisionByZero;
    out = {0.0, 0.0};
    return OpStatus::Ok;
  }
  if (den == 2) {
    // Route half-integer powers through csqrt so that u^(1/2) == sqrt(u).
    const Complex r = csqrt(z);
    if (num >= 0) {
      out = cpow_int(r, num);
    } else {
      out = cdiv(Complex{1.0, 0.0}, cpow_int(r, -num));
    }
    return OpStatus::Ok;
  }
  const double p = static_cast<double>(num) / static_cast<double>(den);
  if (is_real(z) && z.real() > 0.0) {
    out = {std::pow(z.real(), p), 0.0};
    return OpStatus::Ok;
  }
  Complex l;
  if (is_real(z)) {
    l = {std::log(-z.real()), std::numbers::pi};
  } else {
    l = std::log(z);
  }
  out = std::exp(Complex{p * l.real(), p * l.imag()});
  return OpStatus::Ok;
}

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline OpStatus capply(expr::Func f, Complex z, Complex& out) noexcept {
  using expr::Func;
  const bool real = is_real(z);
  const double x = z.real();
  switch (f) {
    case Func::Sin: out = real ? Complex{std::sin(x), 0.0} : std::sin(z); break;
    case Func::Cos: out = real ? Complex{std::cos(x), 0.0} : std::cos(z); break;
    case Func::Tan: out = real ? Complex{std::tan(x), 0.0} : std::tan(z); break;
    case Func::Exp: out = real ? Complex{std::exp(x), 0.0} : std::exp(z); break;
    case Func::Sinh: out = real ? Complex{std::sinh(x), 0.0} : std::sinh(z); break;
    case Func::Cosh: out = real ? Complex{std::cosh(x), 0.0} : std::cosh(z); break;
    case Func::Sqrt: out = csqrt(z); break;
    case Func::Log: return clog(z, out);
  }
  return OpStatus::Ok;
}

}  // namespace takagi::detail
