#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ei/mcmc.hpp"
#include "ei/method.hpp"
#include "ei/types.hpp"

namespace ei {

// Common shape for every analysis product: a cell matrix plus optional
// uncertainty columns (empty for the point estimators) and an optional
// x-axis (bracket midpoints) when the rows trace a curve over age.
struct EstimateResult {
  CellProbabilityMatrix mean;
  std::vector<double> sd;      // row-major R*C; empty for point estimates
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
  std::vector<double> axis;    // per-row plot position; empty when not a curve
  std::vector<std::string> warnings;
};

// P(option | age bracket) for a first-round dataset, with the bracket
// midpoints attached so the result plots as support-by-age curves.
EstimateResult age_party_curve(const Dataset& dataset, Method method,
                               const McmcConfig& config = {});

// Paired two-round data reshaped for transition estimation: rows are
// first-round options, columns second-round options.  Roll drift between
// rounds is absorbed into the second round's abstention column.
struct TransitionInput {
  std::vector<PrecinctRecord> paired;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::size_t n_only_first = 0;   // precincts dropped from each side
  std::size_t n_only_second = 0;

  std::size_t n_pairs() const { return paired.size(); }
};

// Joins two rounds on precinct_id.  Drops one-sided precincts (counted in
// the result), errors with RollDriftExceeded when |roll2 - roll1| / roll1
// exceeds max_roll_drift, and NoPairedPrecincts when nothing matches.
// The second round must carry an abstention column to absorb the drift.
TransitionInput pair_rounds(const Dataset& first, const Dataset& second,
                            double max_roll_drift = 0.01);

// P(second-round option | first-round option).
EstimateResult transition_matrix(const TransitionInput& input, Method method,
                                 const McmcConfig& config = {});

// First-round options crossed with a two-column plebiscite outcome
// ("si" vs everything else).  si_votes maps precinct_id -> yes votes.
TransitionInput pair_plebiscite(const Dataset& first,
                                const std::map<std::string, std::int64_t>& si_votes);

EstimateResult plebiscite_cross(const Dataset& first,
                                const std::map<std::string, std::int64_t>& si_votes,
                                Method method, const McmcConfig& config = {});

}  // namespace ei
