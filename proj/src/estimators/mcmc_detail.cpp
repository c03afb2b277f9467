#include "ei/mcmc_detail.hpp"

#include <algorithm>
#include <numeric>

#include "ei/errors.hpp"

namespace ei::mcmc_detail {

std::vector<std::int64_t> initial_feasible_table(const std::vector<std::int64_t>& rows,
                                                 const std::vector<std::int64_t>& cols) {
  const std::size_t R = rows.size();
  const std::size_t C = cols.size();
  const std::int64_t rsum = std::accumulate(rows.begin(), rows.end(), std::int64_t{0});
  const std::int64_t csum = std::accumulate(cols.begin(), cols.end(), std::int64_t{0});
  if (rsum != csum)
    throw NoFeasibleTable("marginals are inconsistent: rows sum to " +
                          std::to_string(rsum) + ", columns to " + std::to_string(csum));

  std::vector<std::int64_t> table(R * C, 0);
  if (rsum == 0) return table;

  // Floor of the independence table, tracking remainders for the repair pass.
  std::vector<std::int64_t> row_rem = rows;
  std::vector<std::int64_t> col_rem = cols;
  std::vector<std::pair<std::int64_t, std::size_t>> frac;  // (-remainder, cell)
  frac.reserve(R * C);
  for (std::size_t g = 0; g < R; ++g) {
    for (std::size_t p = 0; p < C; ++p) {
      const std::int64_t prod = rows[g] * cols[p];
      const std::int64_t q = prod / rsum;
      table[g * C + p] = q;
      row_rem[g] -= q;
      col_rem[p] -= q;
      frac.emplace_back(-(prod % rsum), g * C + p);
    }
  }

  // Hand the leftover counts to the cells with the largest fractional parts
  // first; ties break on cell index, keeping the result deterministic.
  std::sort(frac.begin(), frac.end());
  for (const auto& [neg_rem, cell] : frac) {
    const std::size_t g = cell / C;
    const std::size_t p = cell % C;
    const std::int64_t d = std::min(row_rem[g], col_rem[p]);
    if (d > 0) {
      table[cell] += d;
      row_rem[g] -= d;
      col_rem[p] -= d;
    }
  }
  // Northwest-corner sweep mops up any deficit the greedy pass stranded.
  for (std::size_t g = 0; g < R; ++g) {
    for (std::size_t p = 0; p < C && row_rem[g] > 0; ++p) {
      const std::int64_t d = std::min(row_rem[g], col_rem[p]);
      if (d > 0) {
        table[g * C + p] += d;
        row_rem[g] -= d;
        col_rem[p] -= d;
      }
    }
  }
  return table;
}

int sweep_swaps(std::span<std::int64_t> table, std::size_t rows, std::size_t cols,
                std::span<const double> theta, int proposals, int max_step,
                rng::Sampler& sampler) {
  if (rows < 2 || cols < 2) return 0;
  int accepted = 0;
  for (int k = 0; k < proposals; ++k) {
    std::size_t g1 = sampler.uniform_int(rows);
    std::size_t g2 = sampler.uniform_int(rows - 1);
    if (g2 >= g1) ++g2;
    std::size_t p1 = sampler.uniform_int(cols);
    std::size_t p2 = sampler.uniform_int(cols - 1);
    if (p2 >= p1) ++p2;
    const std::int64_t delta =
        max_step > 1 ? 1 + static_cast<std::int64_t>(sampler.uniform_int(
                               static_cast<std::uint64_t>(max_step)))
                     : 1;

    const std::size_t a = g1 * cols + p1;  // +delta
    const std::size_t b = g1 * cols + p2;  // -delta
    const std::size_t c = g2 * cols + p1;  // -delta
    const std::size_t d = g2 * cols + p2;  // +delta
    if (table[b] < delta || table[c] < delta) continue;

    // pi(N')/pi(N) for the multinomial likelihood, in ratio form so the hot
    // loop never touches lgamma.  theta is floored well above zero by the
    // Dirichlet sampler, so the per-unit ratio is finite or +inf, never NaN.
    const double unit = (theta[a] / theta[b]) * (theta[d] / theta[c]);
    double r = 1.0;
    for (std::int64_t t = 1; t <= delta; ++t) {
      r *= unit;
      r *= static_cast<double>(table[b] - t + 1) * static_cast<double>(table[c] - t + 1) /
           (static_cast<double>(table[a] + t) * static_cast<double>(table[d] + t));
    }
    if (r >= 1.0 || sampler.uniform() < r) {
      table[a] += delta;
      table[d] += delta;
      table[b] -= delta;
      table[c] -= delta;
      ++accepted;
    }
  }
  return accepted;
}

bool marginals_match(std::span<const std::int64_t> table, std::size_t rows,
                     std::size_t cols, std::span<const std::int64_t> row_sums,
                     std::span<const std::int64_t> col_sums) {
  for (std::size_t g = 0; g < rows; ++g) {
    std::int64_t s = 0;
    for (std::size_t p = 0; p < cols; ++p) s += table[g * cols + p];
    if (s != row_sums[g]) return false;
  }
  for (std::size_t p = 0; p < cols; ++p) {
    std::int64_t s = 0;
    for (std::size_t g = 0; g < rows; ++g) s += table[g * cols + p];
    if (s != col_sums[p]) return false;
  }
  return true;
}

}  // namespace ei::mcmc_detail
