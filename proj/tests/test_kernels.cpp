#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "ei/kernels.hpp"
#include "ei/rng.hpp"

namespace k = ei::kernels;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::int64_t ulp_distance(double a, double b) {
  if (same_bits(a, b)) return 0;
  const auto to_ordered = [](double x) {
    auto bits = std::bit_cast<std::int64_t>(x);
    return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
  };
  return std::abs(to_ordered(a) - to_ordered(b));
}

std::vector<double> random_values(std::uint64_t seed, std::size_t n, bool positive) {
  ei::rng::Sampler rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    // spread across many binades, the way log-likelihood terms do
    const double mag = std::exp((rng.uniform() - 0.5) * 60.0);
    v = positive ? mag : (rng.uniform() < 0.5 ? -mag : mag);
  }
  return out;
}

}  // namespace

TEST_CASE("log_ref matches std::log to a couple of ulps") {
  ei::rng::Sampler rng(11);
  for (int t = 0; t < 20000; ++t) {
    const double x = std::exp((rng.uniform() - 0.5) * 120.0);
    CHECK(ulp_distance(k::detail::log_ref(x), std::log(x)) <= 2);
  }
  // values straddling the mantissa-reduction boundary near 1
  for (int t = -1000; t <= 1000; ++t) {
    const double x = 1.0 + static_cast<double>(t) * 1e-6;
    CHECK(ulp_distance(k::detail::log_ref(x), std::log(x)) <= 2);
  }
}

TEST_CASE("log_ref special values") {
  CHECK(k::detail::log_ref(1.0) == 0.0);
  CHECK(k::detail::log_ref(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(k::detail::log_ref(-0.0) == -std::numeric_limits<double>::infinity());
  CHECK(std::isnan(k::detail::log_ref(-1.0)));
  CHECK(k::detail::log_ref(std::numeric_limits<double>::infinity()) ==
        std::numeric_limits<double>::infinity());
  CHECK(std::isnan(k::detail::log_ref(std::numeric_limits<double>::quiet_NaN())));
  // subnormals take the rescaling path
  const double sub = 5e-324;
  CHECK(std::isfinite(k::detail::log_ref(sub)));
  CHECK(ulp_distance(k::detail::log_ref(sub), std::log(sub)) <= 2);
  CHECK(ulp_distance(k::detail::log_ref(2.2250738585072014e-308),
                     std::log(2.2250738585072014e-308)) <= 2);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 kernels are bit-exact against the scalar reference") {
  if (!k::detail::cpu_has_avx2()) {
    MESSAGE("AVX2 not available; skipping equivalence checks");
    return;
  }
  const std::vector<std::size_t> sizes = {0, 1, 2, 3, 4, 5, 7, 8, 9,
                                          15, 16, 17, 63, 64, 65, 1000, 4099};
  for (std::size_t n : sizes) {
    const std::vector<double> a = random_values(100 + n, n, /*positive=*/true);
    const std::vector<double> b = random_values(200 + n, n, /*positive=*/false);

    CHECK(same_bits(k::detail::sum_scalar(b.data(), n), k::detail::sum_avx2(b.data(), n)));
    CHECK(same_bits(k::detail::dot_scalar(a.data(), b.data(), n),
                    k::detail::dot_avx2(a.data(), b.data(), n)));
    CHECK(same_bits(k::detail::sum_log_scalar(a.data(), n),
                    k::detail::sum_log_avx2(a.data(), n)));

    std::vector<double> out_s(n), out_v(n);
    k::detail::log_array_scalar(a.data(), out_s.data(), n);
    k::detail::log_array_avx2(a.data(), out_v.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(out_s[i], out_v[i]));

    std::vector<double> acc_s = b, acc_v = b;
    k::detail::add_inplace_scalar(acc_s.data(), a.data(), n);
    k::detail::add_inplace_avx2(acc_v.data(), a.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(acc_s[i], acc_v[i]));

    acc_s = b;
    acc_v = b;
    k::detail::axpy_scalar(1.7, a.data(), acc_s.data(), n);
    k::detail::axpy_avx2(1.7, a.data(), acc_v.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(acc_s[i], acc_v[i]));
  }
}

TEST_CASE("avx2 log_array handles special lanes mixed with normal ones") {
  if (!k::detail::cpu_has_avx2()) return;
  const std::vector<double> x = {1.0, 0.0, -3.0, 5e-324,
                                 std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::quiet_NaN(), 2.5, 1e300};
  std::vector<double> out_s(x.size()), out_v(x.size());
  k::detail::log_array_scalar(x.data(), out_s.data(), x.size());
  k::detail::log_array_avx2(x.data(), out_v.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(same_bits(out_s[i], out_v[i]));
}
#endif

TEST_CASE("public entry points agree with the scalar reference") {
  // regardless of which ISA the dispatcher picked
  const std::vector<double> a = random_values(7, 1003, true);
  const std::vector<double> b = random_values(8, 1003, false);
  CHECK(same_bits(k::sum(b), k::detail::sum_scalar(b.data(), b.size())));
  CHECK(same_bits(k::dot(a, b), k::detail::dot_scalar(a.data(), b.data(), a.size())));
  CHECK(same_bits(k::sum_log(a), k::detail::sum_log_scalar(a.data(), a.size())));

  std::vector<double> out_pub(a.size()), out_ref(a.size());
  k::log_array(a, out_pub);
  k::detail::log_array_scalar(a.data(), out_ref.data(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_bits(out_pub[i], out_ref[i]));

  const char* name = k::isa_name(k::active_isa());
  CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
}
