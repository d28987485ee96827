#include "takagi/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>
#include <limits>

namespace takagi::simd {

namespace {

constexpr std::size_t kW = 2;

void add_c(const double* ar, const double* ai, const double* br, const double* bi, double* cr,
           double* ci, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    vst1q_f64(cr + k, vaddq_f64(vld1q_f64(ar + k), vld1q_f64(br + k)));
    vst1q_f64(ci + k, vaddq_f64(vld1q_f64(ai + k), vld1q_f64(bi + k)));
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
    vst1q_f64(cr + k, vsubq_f64(vld1q_f64(ar + k), vld1q_f64(br + k)));
    vst1q_f64(ci + k, vsubq_f64(vld1q_f64(ai + k), vld1q_f64(bi + k)));
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
    const float64x2_t xr = vld1q_f64(ar + k), xi = vld1q_f64(ai + k);
    const float64x2_t yr = vld1q_f64(br + k), yi = vld1q_f64(bi + k);
    vst1q_f64(cr + k, vsubq_f64(vmulq_f64(xr, yr), vmulq_f64(xi, yi)));
    vst1q_f64(ci + k, vaddq_f64(vmulq_f64(xr, yi), vmulq_f64(xi, yr)));
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
  const float64x2_t zero = vdupq_n_f64(0.0);
  for (; k + kW <= n; k += kW) {
    const float64x2_t xr = vld1q_f64(ar + k), xi = vld1q_f64(ai + k);
    const float64x2_t yr = vld1q_f64(br + k), yi = vld1q_f64(bi + k);
    const uint64x2_t real_lane = vandq_u64(vceqq_f64(xi, zero), vceqq_f64(yi, zero));
    const float64x2_t d = vaddq_f64(vmulq_f64(yr, yr), vmulq_f64(yi, yi));
    const float64x2_t re = vdivq_f64(vaddq_f64(vmulq_f64(xr, yr), vmulq_f64(xi, yi)), d);
    const float64x2_t im = vdivq_f64(vsubq_f64(vmulq_f64(xi, yr), vmulq_f64(xr, yi)), d);
    const float64x2_t q = vdivq_f64(xr, yr);
    vst1q_f64(cr + k, vbslq_f64(real_lane, q, re));
    vst1q_f64(ci + k, vbslq_f64(real_lane, zero, im));
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
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) {
    vst1q_f64(cr + k, vnegq_f64(vld1q_f64(ar + k)));
    vst1q_f64(ci + k, vnegq_f64(vld1q_f64(ai + k)));
  }
  for (; k < n; ++k) {
    cr[k] = -ar[k];
    ci[k] = -ai[k];
  }
}

void add_r(const double* a, const double* b, double* c, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) vst1q_f64(c + k, vaddq_f64(vld1q_f64(a + k), vld1q_f64(b + k)));
  for (; k < n; ++k) c[k] = a[k] + b[k];
}
void sub_r(const double* a, const double* b, double* c, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) vst1q_f64(c + k, vsubq_f64(vld1q_f64(a + k), vld1q_f64(b + k)));
  for (; k < n; ++k) c[k] = a[k] - b[k];
}
void mul_r(const double* a, const double* b, double* c, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) vst1q_f64(c + k, vmulq_f64(vld1q_f64(a + k), vld1q_f64(b + k)));
  for (; k < n; ++k) c[k] = a[k] * b[k];
}
void div_r(const double* a, const double* b, double* c, std::size_t n) {
  std::size_t k = 0;
  for (; k + kW <= n; k += kW) vst1q_f64(c + k, vdivq_f64(vld1q_f64(a + k), vld1q_f64(b + k)));
  for (; k < n; ++k) c[k] = a[k] / b[k];
}

// One vector holds a single interleaved complex value [re im].
double reduce_max(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    float64x2_t v = vld1q_f64(a + 2 * k);
    if (b != nullptr) v = vsubq_f64(v, vld1q_f64(b + 2 * k));
    const float64x2_t sq = vmulq_f64(v, v);
    const double mag = std::sqrt(vgetq_lane_f64(sq, 0) + vgetq_lane_f64(sq, 1));
    if (std::isnan(mag)) return std::numeric_limits<double>::quiet_NaN();
    if (mag > m) m = mag;
  }
  return m;
}

double max_abs_c(const double* z, std::size_t n) { return reduce_max(z, nullptr, n); }
double max_abs_diff_c(const double* a, const double* b, std::size_t n) {
  return reduce_max(a, b, n);
}

constexpr LaneKernels kNeon{
    Isa::Neon, add_c, sub_c, mul_c, div_c, neg_c, add_r, sub_r, mul_r, div_r,
    max_abs_c, max_abs_diff_c,
};

}  // namespace

const LaneKernels* detail::neon_table() noexcept { return &kNeon; }

}  // namespace takagi::simd

#else

namespace takagi::simd {
const LaneKernels* detail::neon_table() noexcept { return nullptr; }
}  // namespace takagi::simd

#endif
