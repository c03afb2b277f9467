#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ei/types.hpp"

namespace ei {

// Synthetic election setup. age_clustering interpolates between mesas that
// sample the whole age pyramid (0) and mesas concentrated on a single age
// (1): each mesa draws a center age, and each elector takes the center age
// with probability age_clustering, otherwise a fresh pyramid draw.
struct SimConfig {
  int n_precincts = 100;
  int electors_per_precinct = 400;
  double age_clustering = 0.8;
  CellProbabilityMatrix beta_true;
  BracketPartition partition;
  OptionSet options;
  std::uint64_t seed = 0;
  // relative frequency per age starting at 18; empty = uniform over 18..max_age
  std::vector<double> age_weights;
  int max_age = 90;
};

// Generated records plus the hidden per-precinct tables they came from.
struct SyntheticTruth {
  std::vector<PrecinctRecord> records;
  std::vector<std::vector<std::int64_t>> true_tables;  // [i] row-major R x C
  CellProbabilityMatrix beta_true;
  // exact elector ages per precinct, (age, count) sorted by age; lets the
  // padron writer emit per-age rows (empty when only bracket counts exist)
  std::vector<std::vector<std::pair<int, std::int64_t>>> age_counts;
};

// Deterministic given the seed; precinct i draws from an independent stream
// derived from (seed, i), so parallel and serial runs agree.
SyntheticTruth simulate_election(const SimConfig& config);

// Draws votes for precincts whose row marginals are already known: each row
// g scatters row_marginals[i][g] electors over the options with the
// probabilities in beta.row(g). Used for second-round and plebiscite
// synthesis where the rows are first-round counts.
SyntheticTruth simulate_votes(const std::vector<std::string>& precinct_ids,
                              const std::vector<std::vector<std::int64_t>>& row_marginals,
                              const CellProbabilityMatrix& beta,
                              std::uint64_t seed);

}  // namespace ei
