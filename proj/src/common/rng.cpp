#include "ei/rng.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ei::rng {

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Sampler::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

std::uint64_t Sampler::uniform_int(std::uint64_t n) {
  assert(n >= 1);
  const std::uint64_t mask = n <= 1 ? 0 : ~std::uint64_t{0} >> std::countl_zero(n - 1);
  for (;;) {
    const std::uint64_t v = eng_() & mask;
    if (v < n) return v;
  }
}

double Sampler::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double scale = std::sqrt(-2.0 * std::log(s) / s);
      spare_ = v * scale;
      have_spare_ = true;
      return u * scale;
    }
  }
}

double Sampler::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (shape < 1.0) {
    // boost: draw for shape+1, scale by u^(1/shape)
    const double u = 1.0 - uniform();  // (0, 1]
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = 1.0 - uniform();  // (0, 1], safe to log
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void Sampler::dirichlet(std::span<const double> alpha, std::span<double> out) {
  assert(alpha.size() == out.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    // floor keeps downstream log() finite even if a tiny shape underflows
    out[i] = std::max(gamma(alpha[i]), 1e-300);
    total += out[i];
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) out[i] /= total;
}

std::size_t Sampler::categorical(std::span<const double> weights) {
  assert(!weights.empty());
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace ei::rng
