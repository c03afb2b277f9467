#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ei::rng {

// Derives an independent stream seed from (seed, stream). splitmix64 finisher.
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

// Deterministic sampler: the engine is std::mt19937_64 (whose sequence the
// standard pins down) and all distributions are implemented here, so a given
// seed yields the same draws on every platform and standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  // uniform on [0, 1), 53-bit resolution
  double uniform();

  // uniform integer on [0, n); n >= 1
  std::uint64_t uniform_int(std::uint64_t n);

  // standard normal via the polar method
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1
  double gamma(double shape);

  // Dirichlet(alpha) draw written into out (same length as alpha)
  void dirichlet(std::span<const double> alpha, std::span<double> out);

  // index draw from unnormalized non-negative weights
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ei::rng
