#pragma once

// Linearized evaluation program for a set of expressions.
//
// Compiling flattens the shared expression DAG into a topologically ordered
// instruction list (common subexpressions merged, value slots reused once
// dead). Evaluation then runs every instruction across a batch of points at
// once, one SIMD lane per point, through the selected LaneKernels.
// Transcendental functions and fractional powers fall back to per-lane
// scalar code.
//
// Results equal the recursive expr::Evaluator value for value.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "takagi/chart.hpp"
#include "takagi/expr.hpp"
#include "takagi/simd/kernels.hpp"

namespace takagi {

class Tape {
 public:
  explicit Tape(std::span<const expr::Expr> roots);

  std::size_t root_count() const noexcept { return root_slots_.size(); }
  std::size_t instruction_count() const noexcept { return code_.size(); }
  std::size_t slot_count() const noexcept { return slot_count_; }
  // Smallest point dimension the tape accepts.
  std::size_t required_dimension() const noexcept { return required_dimension_; }

  // Values of every root at every point: result[root * points.size() + lane].
  // Throws EvalError naming the offending subexpression and InputError when a
  // point is too short.
  std::vector<std::complex<double>> evaluate(
      std::span<const Point> points,
      const simd::LaneKernels& kernels = simd::active_kernels()) const;

 private:
  enum class Op : std::uint8_t { Const, Coord, Add, Mul, Neg, Div, Pow, Func };

  struct Instr {
    Op op;
    std::uint32_t dst;
    std::uint32_t arg_begin;
    std::uint32_t arg_count;
    std::complex<double> value;  // Const
    std::size_t coord = 0;       // Coord
    expr::Rational exponent;     // Pow
    expr::Func func = expr::Func::Sin;
    expr::Expr source;  // for error messages
  };

  void run_chunk(std::span<const Point> points, std::size_t first, std::size_t lanes,
                 const simd::LaneKernels& k, std::vector<double>& regs,
                 std::vector<std::uint8_t>& real, std::complex<double>* out,
                 std::size_t total_lanes) const;

  std::vector<Instr> code_;
  std::vector<std::uint32_t> args_;  // operand slots
  std::vector<std::uint32_t> root_slots_;
  std::size_t slot_count_ = 0;
  std::size_t required_dimension_ = 0;
};

}  // namespace takagi
