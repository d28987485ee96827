#pragma once

// Lane-parallel arithmetic used by the expression tape and by residual
// reductions. Every instruction-set variant computes bit-identical results
// to the scalar reference: only IEEE add/sub/mul/div/sqrt are used, in the
// same order, and contraction into FMA is disabled for these translation
// units.
//
// Complex lanes are stored split (structure of arrays): re[] and im[].

#include <cstddef>

namespace takagi::simd {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa) noexcept;

using BinaryComplexFn = void (*)(const double* ar, const double* ai, const double* br,
                                 const double* bi, double* cr, double* ci, std::size_t n);
using UnaryComplexFn = void (*)(const double* ar, const double* ai, double* cr, double* ci,
                                std::size_t n);
using BinaryRealFn = void (*)(const double* a, const double* b, double* c, std::size_t n);
using ReduceFn = double (*)(const double* z, std::size_t n_complex);
using ReduceDiffFn = double (*)(const double* a, const double* b, std::size_t n_complex);

struct LaneKernels {
  Isa isa = Isa::Scalar;

  BinaryComplexFn add = nullptr;
  BinaryComplexFn sub = nullptr;
  BinaryComplexFn mul = nullptr;
  // Lanes whose operands are both real use the real quotient. Callers
  // guarantee that no divisor lane is zero.
  BinaryComplexFn div = nullptr;
  UnaryComplexFn neg = nullptr;

  BinaryRealFn add_real = nullptr;
  BinaryRealFn sub_real = nullptr;
  BinaryRealFn mul_real = nullptr;
  BinaryRealFn div_real = nullptr;

  // Reductions over interleaved complex arrays (std::complex<double> layout).
  // NaN anywhere in the input yields NaN.
  ReduceFn max_abs = nullptr;
  ReduceDiffFn max_abs_diff = nullptr;
};

const LaneKernels& scalar_kernels() noexcept;

// True when the variant is compiled in and the running CPU supports it.
bool available(Isa isa) noexcept;

// nullptr when unavailable.
const LaneKernels* kernels_for(Isa isa) noexcept;

// Best available variant. The TAKAGI_SIMD environment variable (scalar, avx2,
// neon) overrides the choice when that variant is available.
const LaneKernels& active_kernels() noexcept;

namespace detail {
// Defined in the per-ISA translation units; null when not compiled.
const LaneKernels* avx2_table() noexcept;
const LaneKernels* neon_table() noexcept;
}  // namespace detail

}  // namespace takagi::simd
