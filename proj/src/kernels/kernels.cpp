#include "ei/kernels.hpp"

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#include <cpuid.h>
#endif

namespace ei::kernels {

namespace detail {

#if defined(__x86_64__) || defined(_M_X64)
namespace {
std::uint64_t xgetbv0() {
  std::uint32_t eax, edx;
  __asm__("xgetbv" : "=a"(eax), "=d"(edx) : "c"(0));
  return (static_cast<std::uint64_t>(edx) << 32) | eax;
}
}  // namespace

bool cpu_has_avx2() {
  unsigned int eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
  const bool osxsave = (ecx & (1u << 27)) != 0;
  const bool avx = (ecx & (1u << 28)) != 0;
  if (!osxsave || !avx) return false;
  if ((xgetbv0() & 0x6) != 0x6) return false;  // XMM and YMM state enabled
  if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
  return (ebx & (1u << 5)) != 0;
}
#endif

}  // namespace detail

namespace {

struct Table {
  Isa isa;
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_log)(const double*, std::size_t);
  void (*log_array)(const double*, double*, std::size_t);
  void (*add_inplace)(double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

constexpr Table kScalarTable = {
    Isa::scalar,          detail::sum_scalar,       detail::dot_scalar,
    detail::sum_log_scalar, detail::log_array_scalar, detail::add_inplace_scalar,
    detail::axpy_scalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2Table = {
    Isa::avx2,          detail::sum_avx2,       detail::dot_avx2,
    detail::sum_log_avx2, detail::log_array_avx2, detail::add_inplace_avx2,
    detail::axpy_avx2};
#endif

Table pick_table() {
#if defined(__x86_64__) || defined(_M_X64)
  const bool supported = detail::cpu_has_avx2();
  if (const char* env = std::getenv("EI_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return kScalarTable;
    if (std::strcmp(env, "avx2") == 0 && supported) return kAvx2Table;
    if (std::strcmp(env, "auto") != 0) return kScalarTable;  // unknown value
  }
  if (supported) return kAvx2Table;
#else
  if (const char* env = std::getenv("EI_SIMD")) (void)env;
#endif
  return kScalarTable;
}

const Table& table() {
  static const Table t = pick_table();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

double sum(std::span<const double> x) { return table().sum(x.data(), x.size()); }

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return table().dot(a.data(), b.data(), a.size());
}

double sum_log(std::span<const double> x) {
  return table().sum_log(x.data(), x.size());
}

void log_array(std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  table().log_array(x.data(), out.data(), x.size());
}

void add_inplace(std::span<double> dst, std::span<const double> src) {
  assert(dst.size() == src.size());
  table().add_inplace(dst.data(), src.data(), dst.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  table().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace ei::kernels
