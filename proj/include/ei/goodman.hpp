#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ei/types.hpp"

namespace ei {

struct GoodmanFit {
  CellProbabilityMatrix beta;            // box-constrained solution, rows renormalized
  std::vector<double> raw;               // unconstrained WLS solution, row-major R*C
  std::vector<double> row_renorm_delta;  // |pre-renormalization row sum - 1| per row
  std::size_t rank = 0;                  // rank of the weighted normal matrix
};

// Ecological (Goodman) regression of option shares on bracket weights.
// For each option p it minimizes sum_i N_i (v[i][p] - sum_g w[i][g] beta[g][p])^2
// over 0 <= beta[g][p] <= 1, then renormalizes each row to sum to one and
// reports how far the constrained row sums were from 1.  The unconstrained
// least-squares solution is kept in `raw` as a diagnostic; it may leave [0,1].
//
// Throws RankDeficient when the weighted design has rank < R (e.g. all
// precincts share the same age composition).
GoodmanFit goodman_fit(const std::vector<PrecinctRecord>& records,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels);

GoodmanFit goodman_fit(const std::vector<PrecinctRecord>& records,
                       const BracketPartition& partition, const OptionSet& options);

}  // namespace ei
