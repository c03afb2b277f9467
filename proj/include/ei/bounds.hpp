#pragma once

#include <vector>

#include "ei/types.hpp"

namespace ei {

// Method-of-bounds feasibility envelope. For precinct i with roll N and
// bracket electors X[g]:
//   lo = max(0, T[p] - (N - X[g])) / X[g]
//   hi = min(X[g], T[p]) / X[g]
// Cells with X[g] == 0 get [0, 0]. The aggregate bounds are the
// elector-weighted averages of the per-precinct bounds, which is valid
// because the aggregate fraction is the elector-weighted average of the
// per-precinct fractions.
CellBounds duncan_davis_bounds(const std::vector<PrecinctRecord>& records);

}  // namespace ei
