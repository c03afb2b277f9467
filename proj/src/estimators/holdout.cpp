#include "ei/holdout.hpp"

#include <cmath>
#include <numeric>

#include "ei/errors.hpp"
#include "ei/goodman.hpp"
#include "ei/rng.hpp"
#include "ei/weighted_average.hpp"

namespace ei {

HoldoutReport holdout_validate(const std::vector<PrecinctRecord>& records,
                               const BracketPartition& partition,
                               const OptionSet& options, Method method,
                               double split_fraction, std::uint64_t seed,
                               const McmcConfig& config) {
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw SplitTooSmall("holdout: split fraction " + std::to_string(split_fraction) +
                        " is outside (0, 1)");
  const std::size_t I = records.size();
  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(split_fraction * static_cast<double>(I)));
  if (n_train == 0 || n_train >= I)
    throw SplitTooSmall("holdout: " + std::to_string(I) + " precincts at fraction " +
                        std::to_string(split_fraction) +
                        " leaves an empty train or test side");

  // Fisher-Yates on the index vector; the sampler keeps this reproducible.
  std::vector<std::size_t> order(I);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng::Sampler sampler(rng::mix(seed, 0x686f6c64));  // "hold"
  for (std::size_t k = I - 1; k > 0; --k) {
    const std::size_t j = static_cast<std::size_t>(sampler.uniform_int(k + 1));
    std::swap(order[k], order[j]);
  }

  std::vector<PrecinctRecord> train;
  train.reserve(n_train);
  for (std::size_t k = 0; k < n_train; ++k) train.push_back(records[order[k]]);

  CellProbabilityMatrix beta = [&]() {
    switch (method) {
      case Method::weighted_average:
        return weighted_average_fit(train, partition, options);
      case Method::goodman:
        return goodman_fit(train, partition, options).beta;
      case Method::md: {
        McmcConfig cfg = config;
        cfg.seed = seed;
        return md_fit(train, partition, options, cfg).mean;
      }
    }
    throw ValidationError("holdout: unknown method");
  }();

  const std::size_t R = partition.size();
  const std::size_t C = options.size();
  HoldoutReport report;
  report.n_train = n_train;
  report.n_test = I - n_train;
  report.per_option_mae.assign(C, 0.0);
  std::size_t used = 0;
  for (std::size_t k = n_train; k < I; ++k) {
    const auto& rec = records[order[k]];
    const std::int64_t roll = rec.roll();
    const std::int64_t cast = rec.votes_total();
    if (roll <= 0 || cast <= 0) continue;
    ++used;
    for (std::size_t p = 0; p < C; ++p) {
      double pred = 0.0;
      for (std::size_t g = 0; g < R; ++g)
        pred += static_cast<double>(rec.row_marginals[g]) / static_cast<double>(roll) *
                beta.at(g, p);
      const double obs =
          static_cast<double>(rec.col_marginals[p]) / static_cast<double>(cast);
      report.per_option_mae[p] += std::abs(pred - obs);
    }
  }
  if (used == 0)
    throw SplitTooSmall("holdout: every held-out precinct is empty");
  for (double& e : report.per_option_mae) e /= static_cast<double>(used);
  report.mae = std::accumulate(report.per_option_mae.begin(), report.per_option_mae.end(), 0.0) /
               static_cast<double>(C);
  return report;
}

}  // namespace ei
