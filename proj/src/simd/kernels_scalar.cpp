#include <cmath>
#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <limits>

#include "takagi/simd/kernels.hpp"

namespace takagi::simd {

namespace {

void add_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    cr[k] = ar[k] + br[k];
    ci[k] = ai[k] + bi[k];
  }
}

void sub_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    cr[k] = ar[k] - br[k];
    ci[k] = ai[k] - bi[k];
  }
}

void mul_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = ar[k] * br[k] - ai[k] * bi[k];
    const double im = ar[k] * bi[k] + ai[k] * br[k];
    cr[k] = re;
    ci[k] = im;
  }
}

void div_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = ar[k], xi = ai[k], yr = br[k], yi = bi[k];
    if (xi == 0.0 && yi == 0.0) {
      cr[k] = xr / yr;
      ci[k] = 0.0;
    } else {
      const double d = yr * yr + yi * yi;
      const double re = (xr * yr + xi * yi) / d;
      const double im = (xi * yr - xr * yi) / d;
      cr[k] = re;
      ci[k] = im;
    }
  }
}

void neg_c(const double* ar, const double* ai, double* cr, double* ci, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    cr[k] = -ar[k];
    ci[k] = -ai[k];
  }
}

void add_r(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) c[k] = a[k] + b[k];
}
void sub_r(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) c[k] = a[k] - b[k];
}
void mul_r(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) c[k] = a[k] * b[k];
}
void div_r(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) c[k] = a[k] / b[k];
}

double max_abs_c(const double* z, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double re = z[2 * k], im = z[2 * k + 1];
    const double v = std::sqrt(re * re + im * im);
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    if (v > m) m = v;
  }
  return m;
}

double max_abs_diff_c(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double re = a[2 * k] - b[2 * k], im = a[2 * k + 1] - b[2 * k + 1];
    const double v = std::sqrt(re * re + im * im);
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    if (v > m) m = v;
  }
  return m;
}

constexpr LaneKernels kScalar{
    Isa::Scalar, add_c, sub_c, mul_c, div_c, neg_c, add_r, sub_r, mul_r, div_r,
    max_abs_c,   max_abs_diff_c,
};

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

const LaneKernels& scalar_kernels() noexcept { return kScalar; }

bool available(Isa isa) noexcept { return kernels_for(isa) != nullptr; }

const LaneKernels* kernels_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return &kScalar;
    case Isa::Avx2:
      return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Isa::Neon:
      return detail::neon_table();
  }
  return nullptr;
}

const LaneKernels& active_kernels() noexcept {
  static const LaneKernels* chosen = [] {
    if (const char* env = std::getenv("TAKAGI_SIMD")) {
      for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (std::strcmp(env, isa_name(isa)) == 0) {
          if (const LaneKernels* k = kernels_for(isa)) return k;
        }
      }
    }
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
      if (const LaneKernels* k = kernels_for(isa)) return k;
    }
    return &kScalar;
  }();
  return *chosen;
}

}  // namespace takagi::simd
