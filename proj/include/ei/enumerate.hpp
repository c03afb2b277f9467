#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ei/types.hpp"

namespace ei {

// Visits every non-negative integer R x C table with the given row and
// column sums, in lexicographic cell order with marginal-feasibility
// pruning. Tables are passed row-major. Throws NoFeasibleTable when the
// marginal sums disagree.
void for_each_feasible_table(
    const std::vector<std::int64_t>& row_sums,
    const std::vector<std::int64_t>& col_sums,
    const std::function<void(const std::vector<std::int64_t>&)>& visit);

std::uint64_t count_feasible_tables(const std::vector<std::int64_t>& row_sums,
                                    const std::vector<std::int64_t>& col_sums);

// Exact posterior cell-fraction means for one small precinct: enumerates
// every feasible table and weights it by its Dirichlet-multinomial marginal
// likelihood under the fixed alpha (R x C, row-major). Returns E[N/X]
// row-major, with zero rows reported as zeros. Throws TooLargeToEnumerate
// above 14 electors.
std::vector<double> brute_force_posterior(const PrecinctRecord& record,
                                          const std::vector<double>& alpha);

inline constexpr std::int64_t kMaxEnumerableElectors = 14;

}  // namespace ei
