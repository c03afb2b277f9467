#pragma once

#include <string>
#include <vector>

#include "ei/types.hpp"

namespace ei {

// Deterministic closed-form estimator: each cell is the elector-weighted
// average of the per-precinct option shares,
//
//   beta[g][p] = sum_i w[i][g] * v[i][p] / sum_i w[i][g]
//
// with w[i][g] = X[i][g] / roll_i and v[i][p] the share of option p among
// the votes cast in precinct i.  Rows are convex combinations of the v
// vectors, so they land in [0,1] and sum to one by construction.
//
// Throws EmptyBracket if some row has zero electors across every precinct.
CellProbabilityMatrix weighted_average_fit(const std::vector<PrecinctRecord>& records,
                                           const std::vector<std::string>& row_labels,
                                           const std::vector<std::string>& col_labels);

CellProbabilityMatrix weighted_average_fit(const std::vector<PrecinctRecord>& records,
                                           const BracketPartition& partition,
                                           const OptionSet& options);

}  // namespace ei
