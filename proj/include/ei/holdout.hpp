#pragma once

#include <cstdint>
#include <vector>

#include "ei/mcmc.hpp"
#include "ei/method.hpp"
#include "ei/types.hpp"

namespace ei {

struct HoldoutReport {
  double mae = 0.0;                    // mean |predicted - observed| share
  std::vector<double> per_option_mae;  // same, per option
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

// Precinct-level holdout check of an estimator: fit beta on a random
// `split_fraction` of precincts, predict each held-out precinct's option
// shares as w_i' * beta from its bracket composition, and report the mean
// absolute error against the observed shares.
//
// Throws SplitTooSmall when the fraction is outside (0, 1) or either side of
// the split would be empty.
HoldoutReport holdout_validate(const std::vector<PrecinctRecord>& records,
                               const BracketPartition& partition,
                               const OptionSet& options, Method method,
                               double split_fraction, std::uint64_t seed,
                               const McmcConfig& config = {});

}  // namespace ei
