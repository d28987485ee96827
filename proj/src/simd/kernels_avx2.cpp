// Compiled with -mavx2 only; callers reach these through kernels_for(), which
// checks the running CPU first.

#include "takagi/simd/kernels.hpp"

#if defined(TAKAGI_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace takagi::simd {

namespace {

constexpr std::size_t kW = 4;

void add_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    _mm256_storeu_pd(cr + k, _mm256_add_pd(_mm256_loadu_pd(ar + k), _mm256_loadu_pd(br + k)));
    _mm256_storeu_pd(ci + k, _mm256_add_pd(_mm256_loadu_pd(ai + k), _mm256_loadu_pd(bi + k)));
  }
  for (; k < n; ++k) {
    cr[k] = ar[k] + br[k];
    ci[k] = ai[k] + bi[k];
  }
}

void sub_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    _mm256_storeu_pd(cr + k, _mm256_sub_pd(_mm256_loadu_pd(ar + k), _mm256_loadu_pd(br + k)));
    _mm256_storeu_pd(ci + k, _mm256_sub_pd(_mm256_loadu_pd(ai + k), _mm256_loadu_pd(bi + k)));
  }
  for (; k < n; ++k) {
    cr[k] = ar[k] - br[k];
    ci[k] = ai[k] - bi[k];
  }
}

void mul_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    const __m256d xr = _mm256_loadu_pd(ar + k), xi = _mm256_loadu_pd(ai + k);
    const __m256d yr = _mm256_loadu_pd(br + k), yi = _mm256_loadu_pd(bi + k);
    const __m256d re = _mm256_sub_pd(_mm256_mul_pd(xr, yr), _mm256_mul_pd(xi, yi));
    const __m256d im = _mm256_add_pd(_mm256_mul_pd(xr, yi), _mm256_mul_pd(xi, yr));
    _mm256_storeu_pd(cr + k, re);
    _mm256_storeu_pd(ci + k, im);
  }
  for (; k < n; ++k) {
    const double re = ar[k] * br[k] - ai[k] * bi[k];
    const double im = ar[k] * bi[k] + ai[k] * br[k];
    cr[k] = re;
    ci[k] = im;
  }
}

void div_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  std::size_t k = 0;
  const __m256d zero = _mm256_setzero_pd();
  for (; k + kW <= n; k += kW) {
    const __m256d xr = _mm256_loadu_pd(ar + k), xi = _mm256_loadu_pd(ai + k);
    const __m256d yr = _mm256_loadu_pd(br + k), yi = _mm256_loadu_pd(bi + k);
    const __m256d real_lane =
        _mm256_and_pd(_mm256_cmp_pd(xi, zero, _CMP_EQ_OQ), _mm256_cmp_pd(yi, zero, _CMP_EQ_OQ));
    const __m256d d = _mm256_add_pd(_mm256_mul_pd(yr, yr), _mm256_mul_pd(yi, yi));
    const __m256d re =
        _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(xr, yr), _mm256_mul_pd(xi, yi)), d);
    const __m256d im =
        _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(xi, yr), _mm256_mul_pd(xr, yi)), d);
    const __m256d q = _mm256_div_pd(xr, yr);
    _mm256_storeu_pd(cr + k, _mm256_blendv_pd(re, q, real_lane));
    _mm256_storeu_pd(ci + k, _mm256_blendv_pd(im, zero, real_lane));
  }
  for (; k < n; ++k) {
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
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    _mm256_storeu_pd(cr + k, _mm256_xor_pd(_mm256_loadu_pd(ar + k), sign));
    _mm256_storeu_pd(ci + k, _mm256_xor_pd(_mm256_loadu_pd(ai + k), sign));
  }
  for (; k < n; ++k) {
    cr[k] = -ar[k];
    ci[k] = -ai[k];
  }
}

template <class VecOp, class ScalarOp>
void real_binary(const double* a, const double* b, double* c, std::size_t n, VecOp vop,
                 ScalarOp sop) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    _mm256_storeu_pd(c + k, vop(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  for (; k < n; ++k) c[k] = sop(a[k], b[k]);
}

void add_r(const double* a, const double* b, double* c, std::size_t n) {
  real_binary(a, b, c, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); },
              [](double x, double y) { return x + y; });
}
void sub_r(const double* a, const double* b, double* c, std::size_t n) {
  real_binary(a, b, c, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); },
              [](double x, double y) { return x - y; });
}
void mul_r(const double* a, const double* b, double* c, std::size_t n) {
  real_binary(a, b, c, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); },
              [](double x, double y) { return x * y; });
}
void div_r(const double* a, const double* b, double* c, std::size_t n) {
  real_binary(a, b, c, n, [](__m256d x, __m256d y) { return _mm256_div_pd(x, y); },
              [](double x, double y) { return x / y; });
}

double horizontal_max(__m256d v) {
  alignas(32) double lanes[kW];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (std::size_t i = 1; i < kW; ++i) m = lanes[i] > m ? lanes[i] : m;
  return m;
}

// Interleaved complex input: one vector holds [re0 im0 re1 im1].
double max_abs_c(const double* z, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d nan = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(z + 2 * k);
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d mag = _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq));
    nan = _mm256_or_pd(nan, _mm256_cmp_pd(mag, mag, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, mag);
  }
  if (_mm256_movemask_pd(nan) != 0) return std::numeric_limits<double>::quiet_NaN();
  double result = horizontal_max(m);
  for (; k < n; ++k) {
    const double re = z[2 * k], im = z[2 * k + 1];
    const double v = std::sqrt(re * re + im * im);
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    if (v > result) result = v;
  }
  return result;
}

double max_abs_diff_c(const double* a, const double* b, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d nan = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(a + 2 * k), _mm256_loadu_pd(b + 2 * k));
    const __m256d sq = _mm256_mul_pd(v, v);
    const __m256d mag = _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq));
    nan = _mm256_or_pd(nan, _mm256_cmp_pd(mag, mag, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, mag);
  }
  if (_mm256_movemask_pd(nan) != 0) return std::numeric_limits<double>::quiet_NaN();
  double result = horizontal_max(m);
  for (; k < n; ++k) {
    const double re = a[2 * k] - b[2 * k], im = a[2 * k + 1] - b[2 * k + 1];
    const double v = std::sqrt(re * re + im * im);
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    if (v > result) result = v;
  }
  return result;
}

constexpr LaneKernels kAvx2{
    Isa::Avx2, add_c, sub_c, mul_c, div_c, neg_c, add_r, sub_r, mul_r, div_r,
    max_abs_c, max_abs_diff_c,
};

}  // namespace

const LaneKernels* detail::avx2_table() noexcept { return &kAvx2; }

}  // namespace takagi::simd

#else

namespace takagi::simd {
const LaneKernels* detail::avx2_table() noexcept { return nullptr; }
}  // namespace takagi::simd

#endif
