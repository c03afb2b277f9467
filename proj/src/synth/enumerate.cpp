#include "ei/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ei/errors.hpp"

namespace ei {

namespace {

struct Enumerator {
  std::size_t R, C;
  std::vector<std::int64_t> col_rem;
  std::vector<std::int64_t> table;
  const std::vector<std::int64_t>* row_sums;
  const std::function<void(const std::vector<std::int64_t>&)>* visit;

  // Fills row g given the remaining capacity of each column. suffix is the
  // total column capacity from column p onward.
  void fill_row(std::size_t g, std::size_t p, std::int64_t row_rem) {
    if (p + 1 == C) {
      if (row_rem > col_rem[p]) return;
      table[g * C + p] = row_rem;
      col_rem[p] -= row_rem;
      next_row(g + 1);
      col_rem[p] += row_rem;
      return;
    }
    std::int64_t suffix = 0;
    for (std::size_t q = p + 1; q < C; ++q) suffix += col_rem[q];
    const std::int64_t lo = std::max<std::int64_t>(0, row_rem - suffix);
    const std::int64_t hi = std::min(row_rem, col_rem[p]);
    for (std::int64_t v = lo; v <= hi; ++v) {
      table[g * C + p] = v;
      col_rem[p] -= v;
      fill_row(g, p + 1, row_rem - v);
      col_rem[p] += v;
    }
  }

  void next_row(std::size_t g) {
    if (g == R) {
      (*visit)(table);
      return;
    }
    fill_row(g, 0, (*row_sums)[g]);
  }
};

}  // namespace

void for_each_feasible_table(
    const std::vector<std::int64_t>& row_sums,
    const std::vector<std::int64_t>& col_sums,
    const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  for (std::int64_t x : row_sums)
    if (x < 0) throw ValidationError("negative row sum");
  for (std::int64_t t : col_sums)
    if (t < 0) throw ValidationError("negative column sum");
  const std::int64_t total_rows =
      std::accumulate(row_sums.begin(), row_sums.end(), std::int64_t{0});
  const std::int64_t total_cols =
      std::accumulate(col_sums.begin(), col_sums.end(), std::int64_t{0});
  if (total_rows != total_cols)
    throw NoFeasibleTable("row sums total " + std::to_string(total_rows) +
                          " but column sums total " + std::to_string(total_cols));

  Enumerator e;
  e.R = row_sums.size();
  e.C = col_sums.size();
  e.col_rem = col_sums;
  e.table.assign(e.R * e.C, 0);
  e.row_sums = &row_sums;
  e.visit = &visit;
  e.next_row(0);
}

std::uint64_t count_feasible_tables(const std::vector<std::int64_t>& row_sums,
                                    const std::vector<std::int64_t>& col_sums) {
  std::uint64_t count = 0;
  for_each_feasible_table(row_sums, col_sums,
                          [&](const std::vector<std::int64_t>&) { ++count; });
  return count;
}

std::vector<double> brute_force_posterior(const PrecinctRecord& record,
                                          const std::vector<double>& alpha) {
  const std::size_t R = record.row_marginals.size();
  const std::size_t C = record.col_marginals.size();
  if (alpha.size() != R * C)
    throw DimensionMismatch("alpha has " + std::to_string(alpha.size()) +
                            " entries, expected " + std::to_string(R * C));
  for (double a : alpha)
    if (!(a > 0.0)) throw ValidationError("alpha entries must be positive");
  const std::int64_t total = record.roll();
  if (total > kMaxEnumerableElectors) throw TooLargeToEnumerate(total);
  if (total != record.votes_total())
    throw NoFeasibleTable("precinct " + record.precinct_id +
                          ": marginal sums disagree");

  // Per-table log weight: the row-wise Dirichlet-multinomial likelihoods,
  // dropping terms constant across tables with these marginals.
  std::vector<double> mean(R * C, 0.0);
  double max_logw = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::vector<std::int64_t>, double>> tables;
  for_each_feasible_table(
      record.row_marginals, record.col_marginals,
      [&](const std::vector<std::int64_t>& table) {
        double logw = 0.0;
        for (std::size_t cell = 0; cell < R * C; ++cell) {
          const double n = static_cast<double>(table[cell]);
          logw += std::lgamma(alpha[cell] + n) - std::lgamma(n + 1.0);
        }
        tables.emplace_back(table, logw);
        max_logw = std::max(max_logw, logw);
      });

  double total_w = 0.0;
  for (const auto& [table, logw] : tables) {
    const double w = std::exp(logw - max_logw);
    total_w += w;
    for (std::size_t cell = 0; cell < R * C; ++cell)
      mean[cell] += w * static_cast<double>(table[cell]);
  }
  for (std::size_t g = 0; g < R; ++g) {
    const std::int64_t xg = record.row_marginals[g];
    for (std::size_t p = 0; p < C; ++p) {
      if (xg == 0) {
        mean[g * C + p] = 0.0;
      } else {
        mean[g * C + p] /= total_w * static_cast<double>(xg);
      }
    }
  }
  return mean;
}

}  // namespace ei
