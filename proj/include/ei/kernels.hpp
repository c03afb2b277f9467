#pragma once

#include <cstddef>
#include <span>

// Numeric kernels behind the estimator inner loops. Each kernel has a scalar
// reference implementation and an AVX2 variant; the variant is picked once at
// startup from CPUID and can be overridden with EI_SIMD=scalar|avx2.
//
// Every variant is bit-exact with the scalar reference: reductions use a
// fixed 4-lane blocked accumulation order, log() is evaluated with the same
// polynomial in every lane, and no FMA contraction is allowed. Results
// therefore do not depend on which variant the dispatcher picked.

namespace ei::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

// sum of x[i]
double sum(std::span<const double> x);

// sum of a[i] * b[i]; a and b must have equal length
double dot(std::span<const double> a, std::span<const double> b);

// sum of log(x[i])
double sum_log(std::span<const double> x);

// out[i] = log(x[i])
void log_array(std::span<const double> x, std::span<double> out);

// dst[i] += src[i]
void add_inplace(std::span<double> dst, std::span<const double> src);

// y[i] += a * x[i]
void axpy(double a, std::span<const double> x, std::span<double> y);

namespace detail {

// Reference path, always compiled. log_ref is the shared log(): the fdlibm
// polynomial after the usual [sqrt(2)/2, sqrt(2)) mantissa reduction.
double log_ref(double x);
double sum_scalar(const double* x, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
double sum_log_scalar(const double* x, std::size_t n);
void log_array_scalar(const double* x, double* out, std::size_t n);
void add_inplace_scalar(double* dst, const double* src, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2();
double sum_avx2(const double* x, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
double sum_log_avx2(const double* x, std::size_t n);
void log_array_avx2(const double* x, double* out, std::size_t n);
void add_inplace_avx2(double* dst, const double* src, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
#endif

}  // namespace detail

}  // namespace ei::kernels
