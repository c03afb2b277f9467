#include "ei/diagnostics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>

#include "ei/kernels.hpp"

namespace ei {

namespace {

double chain_mean(const std::vector<double>& xs) {
  return kernels::sum(xs) / static_cast<double>(xs.size());
}

// Sample variance (ddof = 1).
double chain_var(const std::vector<double>& xs, double mean) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(n - 1);
}

// Autocovariance at lag t with the n (not n - t) denominator, as used in the
// initial-sequence estimators.
double autocov(const std::vector<double>& xs, double mean, std::size_t t) {
  const std::size_t n = xs.size();
  double acc = 0.0;
  for (std::size_t k = 0; k + t < n; ++k) acc += (xs[k] - mean) * (xs[k + t] - mean);
  return acc / static_cast<double>(n);
}

}  // namespace

double potential_scale_reduction(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  assert(m >= 2);
  const std::size_t n = chains[0].size();
  if (n < 2) return 1.0;

  std::vector<double> means(m);
  double w = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    assert(chains[c].size() == n);
    means[c] = chain_mean(chains[c]);
    w += chain_var(chains[c], means[c]);
  }
  w /= static_cast<double>(m);

  const double grand = chain_mean(means);
  double b_over_n = 0.0;
  for (double mu : means) b_over_n += (mu - grand) * (mu - grand);
  b_over_n /= static_cast<double>(m - 1);

  if (w <= 0.0) return b_over_n <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double dn = static_cast<double>(n);
  const double var_plus = (dn - 1.0) / dn * w + b_over_n;
  return std::sqrt(var_plus / w);
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  assert(m >= 1);
  const std::size_t n = chains[0].size();
  const double total = static_cast<double>(m) * static_cast<double>(n);
  if (n < 4) return total;

  std::vector<double> means(m);
  double w = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    means[c] = chain_mean(chains[c]);
    w += chain_var(chains[c], means[c]);
  }
  w /= static_cast<double>(m);

  double var_plus = w * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
  if (m > 1) {
    const double grand = chain_mean(means);
    double b_over_n = 0.0;
    for (double mu : means) b_over_n += (mu - grand) * (mu - grand);
    b_over_n /= static_cast<double>(m - 1);
    var_plus += b_over_n;
  }
  if (var_plus <= 0.0) return total;  // constant chains: every draw "counts"

  // rho_t from the chain-averaged autocovariance, then Geyer's initial
  // positive (and monotone) sequence over lag pairs.
  const std::size_t max_lag = std::min(n - 1, static_cast<std::size_t>(2000));
  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  for (std::size_t t = 1; t <= max_lag; ++t) {
    double acov = 0.0;
    for (std::size_t c = 0; c < m; ++c) acov += autocov(chains[c], means[c], t);
    acov /= static_cast<double>(m);
    rho[t] = 1.0 - (w - acov) / var_plus;
  }

  double tau = 1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t + 1 <= max_lag; t += 2) {
    double pair = rho[t] + rho[t + 1];
    if (pair < 0.0) break;
    pair = std::min(pair, prev_pair);  // enforce monotone decrease
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  return std::clamp(total / tau, 1.0, total);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  assert(!sorted.empty());
  assert(q >= 0.0 && q <= 1.0);
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, q);
}

}  // namespace ei
