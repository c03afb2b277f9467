#include "ei/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>

// AVX2 variants. Each mirrors the scalar reference operation for operation:
// identical blocked accumulation order, identical log() polynomial, plain
// mul+add (no FMA). Lanes holding zero, negative, subnormal or non-finite
// inputs are redone through log_ref so the special-case handling matches.

namespace ei::kernels::detail {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLg1 = 6.666666666666735130e-01;
constexpr double kLg2 = 3.999999999940941908e-01;
constexpr double kLg3 = 2.857142874366239149e-01;
constexpr double kLg4 = 2.222219843214978396e-01;
constexpr double kLg5 = 1.818357216161805012e-01;
constexpr double kLg6 = 1.531383769920937332e-01;
constexpr double kLg7 = 1.479819860511658591e-01;

constexpr long long kSqrt2Over2Bits = 0x3fe6a09e667f3bcdLL;

inline double combine_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

inline __m256d log4(__m256d x) {
  const __m256i ix = _mm256_castpd_si256(x);

  // Lanes below DBL_MIN (covers zero, negatives, subnormals via the signed
  // compare) or at/above the exponent ceiling take the scalar path.
  const __m256i too_low =
      _mm256_cmpgt_epi64(_mm256_set1_epi64x(0x0010000000000000LL), ix);
  const __m256i too_high =
      _mm256_cmpgt_epi64(ix, _mm256_set1_epi64x(0x7fefffffffffffffLL));
  const int special = _mm256_movemask_pd(
      _mm256_castsi256_pd(_mm256_or_si256(too_low, too_high)));

  __m256i jx = _mm256_add_epi64(
      ix, _mm256_set1_epi64x(0x3ff0000000000000LL - kSqrt2Over2Bits));
  const __m256i k64 = _mm256_sub_epi64(_mm256_srli_epi64(jx, 52),
                                       _mm256_set1_epi64x(0x3ff));
  // k fits in 32 bits; compress the low dwords and convert
  const __m256i k32 = _mm256_permutevar8x32_epi32(
      k64, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
  const __m256d dk = _mm256_cvtepi32_pd(_mm256_castsi256_si128(k32));

  jx = _mm256_add_epi64(
      _mm256_and_si256(jx, _mm256_set1_epi64x(0x000fffffffffffffLL)),
      _mm256_set1_epi64x(kSqrt2Over2Bits));
  const __m256d m = _mm256_castsi256_pd(jx);

  const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d hfsq =
      _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(0.5), f), f);
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  const __m256d w = _mm256_mul_pd(z, z);
  const __m256d t1 = _mm256_mul_pd(
      w, _mm256_add_pd(
             _mm256_set1_pd(kLg2),
             _mm256_mul_pd(w, _mm256_add_pd(_mm256_set1_pd(kLg4),
                                            _mm256_mul_pd(
                                                w, _mm256_set1_pd(kLg6))))));
  const __m256d t2 = _mm256_mul_pd(
      z,
      _mm256_add_pd(
          _mm256_set1_pd(kLg1),
          _mm256_mul_pd(
              w, _mm256_add_pd(
                     _mm256_set1_pd(kLg3),
                     _mm256_mul_pd(
                         w, _mm256_add_pd(_mm256_set1_pd(kLg5),
                                          _mm256_mul_pd(
                                              w, _mm256_set1_pd(kLg7))))))));
  const __m256d r = _mm256_add_pd(t2, t1);

  // s*(hfsq+r) + dk*ln2_lo - hfsq + f + dk*ln2_hi, associated left to right
  __m256d res = _mm256_mul_pd(s, _mm256_add_pd(hfsq, r));
  res = _mm256_add_pd(res, _mm256_mul_pd(dk, _mm256_set1_pd(kLn2Lo)));
  res = _mm256_sub_pd(res, hfsq);
  res = _mm256_add_pd(res, f);
  res = _mm256_add_pd(res, _mm256_mul_pd(dk, _mm256_set1_pd(kLn2Hi)));

  if (special) {
    alignas(32) double xin[4];
    alignas(32) double out[4];
    _mm256_store_pd(xin, x);
    _mm256_store_pd(out, res);
    for (int lane = 0; lane < 4; ++lane) {
      if (special & (1 << lane)) out[lane] = log_ref(xin[lane]);
    }
    res = _mm256_load_pd(out);
  }
  return res;
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = combine_lanes(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double total = combine_lanes(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double sum_log_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, log4(_mm256_loadu_pd(x + i)));
  double total = combine_lanes(acc);
  for (; i < n; ++i) total += log_ref(x[i]);
  return total;
}

void log_array_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = log_ref(x[i]);
}

void add_inplace_avx2(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                             _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace ei::kernels::detail

#endif  // x86_64
