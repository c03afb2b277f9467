#include "ei/kernels.hpp"

#include <bit>
#include <cstdint>
#include <limits>

// Reference kernels. Reductions run four independent accumulators over full
// blocks of 4 and combine them as (acc0+acc1)+(acc2+acc3) before the tail;
// the AVX2 variants replay exactly that order, which is what makes the two
// paths bit-identical. This translation unit is compiled with
// -ffp-contract=off.

namespace ei::kernels::detail {

namespace {

// fdlibm log() constants (ln2 split plus the minimax polynomial in s^2).
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLg1 = 6.666666666666735130e-01;
constexpr double kLg2 = 3.999999999940941908e-01;
constexpr double kLg3 = 2.857142874366239149e-01;
constexpr double kLg4 = 2.222219843214978396e-01;
constexpr double kLg5 = 1.818357216161805012e-01;
constexpr double kLg6 = 1.531383769920937332e-01;
constexpr double kLg7 = 1.479819860511658591e-01;

constexpr std::uint64_t kSqrt2Over2Bits = 0x3fe6a09e667f3bcdULL;

}  // namespace

double log_ref(double x) {
  std::uint64_t ix = std::bit_cast<std::uint64_t>(x);
  int k = 0;
  if (ix < 0x0010000000000000ULL || (ix >> 63) != 0) {
    if ((ix << 1) == 0) return -std::numeric_limits<double>::infinity();  // +-0
    if ((ix >> 63) != 0) return std::numeric_limits<double>::quiet_NaN();  // x < 0
    // subnormal: scale into the normal range
    k -= 54;
    x *= 0x1p54;
    ix = std::bit_cast<std::uint64_t>(x);
  } else if (ix >= 0x7ff0000000000000ULL) {
    return x;  // +inf or nan
  }

  // reduce to x = 2^k * m with m in [sqrt(2)/2, sqrt(2))
  ix += 0x3ff0000000000000ULL - kSqrt2Over2Bits;
  k += static_cast<int>(ix >> 52) - 0x3ff;
  ix = (ix & 0x000fffffffffffffULL) + kSqrt2Over2Bits;
  const double m = std::bit_cast<double>(ix);

  const double f = m - 1.0;
  const double hfsq = 0.5 * f * f;
  const double s = f / (2.0 + f);
  const double z = s * s;
  const double w = z * z;
  const double t1 = w * (kLg2 + w * (kLg4 + w * kLg6));
  const double t2 = z * (kLg1 + w * (kLg3 + w * (kLg5 + w * kLg7)));
  const double r = t2 + t1;
  const double dk = static_cast<double>(k);
  return s * (hfsq + r) + dk * kLn2Lo - hfsq + f + dk * kLn2Hi;
}

double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double total = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += a[i] * b[i];
    a1 += a[i + 1] * b[i + 1];
    a2 += a[i + 2] * b[i + 2];
    a3 += a[i + 3] * b[i + 3];
  }
  double total = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double sum_log_scalar(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += log_ref(x[i]);
    a1 += log_ref(x[i + 1]);
    a2 += log_ref(x[i + 2]);
    a3 += log_ref(x[i + 3]);
  }
  double total = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) total += log_ref(x[i]);
  return total;
}

void log_array_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = log_ref(x[i]);
}

void add_inplace_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace ei::kernels::detail
