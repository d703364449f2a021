#include "lmsv/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#define LMSV_X86 1
#include <immintrin.h>
#else
#define LMSV_X86 0
#endif

#if defined(__aarch64__)
#define LMSV_NEON 1
#include <arm_neon.h>
#else
#define LMSV_NEON 0
#endif

namespace lmsv::kernels {

namespace detail {

// Scalar reference: four independent accumulators mirroring the 4-wide
// vector lanes, combined as (l0+l1)+(l2+l3), then a sequential tail.
double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double s = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += a[i] * b[i];
    a1 += a[i + 1] * b[i + 1];
    a2 += a[i + 2] * b[i + 2];
    a3 += a[i + 3] * b[i + 3];
  }
  double s = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::size_t count_greater_scalar(const double* x, std::size_t n, double t) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] > t) ? 1 : 0;
  return c;
}

}  // namespace detail

#if LMSV_X86

__attribute__((target("avx2"))) static double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

__attribute__((target("avx2"))) static double dot_avx2(const double* a, const double* b,
                                                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2"))) static std::size_t count_greater_avx2(const double* x,
                                                                      std::size_t n, double t) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_GT_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i) c += (x[i] > t) ? 1 : 0;
  return c;
}

#endif  // LMSV_X86

#if LMSV_NEON

static double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0), acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vld1q_f64(x + i));
    acc23 = vaddq_f64(acc23, vld1q_f64(x + i + 2));
  }
  double s = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
             (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
  for (; i < n; ++i) s += x[i];
  return s;
}

static double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0), acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
             (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

static std::size_t count_greater_neon(const double* x, std::size_t n, double t) {
  const float64x2_t vt = vdupq_n_f64(t);
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // cmp lanes are all-ones (== -1 as u64) on true; subtract to count.
    acc = vsubq_u64(acc, vshrq_n_u64(vcgtq_f64(vld1q_f64(x + i), vt), 63));
  }
  std::size_t c = static_cast<std::size_t>(vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1));
  for (; i < n; ++i) c += (x[i] > t) ? 1 : 0;
  return c;
}

#endif  // LMSV_NEON

namespace {

struct Dispatch {
  Backend backend;
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  std::size_t (*count_greater)(const double*, std::size_t, double);
};

Dispatch make_dispatch(Backend b) {
  switch (b) {
#if LMSV_X86
    case Backend::avx2:
      return {Backend::avx2, sum_avx2, dot_avx2, count_greater_avx2};
#endif
#if LMSV_NEON
    case Backend::neon:
      return {Backend::neon, sum_neon, dot_neon, count_greater_neon};
#endif
    case Backend::scalar:
    default:
      return {Backend::scalar, detail::sum_scalar, detail::dot_scalar,
              detail::count_greater_scalar};
  }
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if LMSV_X86
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
      return LMSV_NEON != 0;
  }
  return false;
}

Backend probe_backend() {
  if (const char* env = std::getenv("LMSV_KERNEL_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2)) return Backend::avx2;
    if (std::strcmp(env, "neon") == 0 && backend_supported(Backend::neon)) return Backend::neon;
  }
  if (backend_supported(Backend::avx2)) return Backend::avx2;
  if (backend_supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch(probe_backend());
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "?";
}

void force_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument(std::string("kernel backend not supported here: ") +
                                backend_name(b));
  dispatch() = make_dispatch(b);
}

double sum(std::span<const double> x) { return dispatch().sum(x.data(), x.size()); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  return dispatch().dot(a.data(), b.data(), a.size());
}

double lagged_dot(std::span<const double> x, std::size_t lag) {
  if (lag >= x.size()) return 0.0;
  return dispatch().dot(x.data(), x.data() + lag, x.size() - lag);
}

std::size_t count_greater(std::span<const double> x, double threshold) {
  return dispatch().count_greater(x.data(), x.size(), threshold);
}

}  // namespace lmsv::kernels
