#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ei/rng.hpp"

namespace ei::mcmc_detail {

// Integer R x C table matching the given marginals exactly, built from the
// floor of the independence table plus a largest-remainder repair pass and a
// northwest-corner sweep for whatever deficit remains.
// Throws NoFeasibleTable when sum(rows) != sum(cols).
std::vector<std::int64_t> initial_feasible_table(const std::vector<std::int64_t>& rows,
                                                 const std::vector<std::int64_t>& cols);

// One round of `proposals` random 2x2 swap moves on `table` (row-major
// rows x cols) under cell probabilities `theta` (same layout).  Each move
// picks rows g1 != g2, columns p1 != p2 and a magnitude delta in
// [1, max_step], adds delta at (g1,p1),(g2,p2) and subtracts it at
// (g1,p2),(g2,p1); both marginals are invariant and the move set connects
// the whole feasibility polytope.  Returns the number of accepted moves.
int sweep_swaps(std::span<std::int64_t> table, std::size_t rows, std::size_t cols,
                std::span<const double> theta, int proposals, int max_step,
                rng::Sampler& sampler);

bool marginals_match(std::span<const std::int64_t> table, std::size_t rows,
                     std::size_t cols, std::span<const std::int64_t> row_sums,
                     std::span<const std::int64_t> col_sums);

}  // namespace ei::mcmc_detail
