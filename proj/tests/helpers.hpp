#pragma once

// Shared fixture builders for the unit suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ei/rng.hpp"
#include "ei/types.hpp"

namespace testutil {

inline ei::PrecinctRecord rec(std::string id, std::vector<std::int64_t> rows,
                              std::vector<std::int64_t> cols) {
  ei::PrecinctRecord r;
  r.precinct_id = std::move(id);
  r.series = "S1";
  r.department = "T";
  r.row_marginals = std::move(rows);
  r.col_marginals = std::move(cols);
  return r;
}

inline std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k + 1));
  return out;
}

// A random feasible instance: draw a table cell by cell, read off marginals.
struct SmallInstance {
  std::vector<std::int64_t> rows, cols, table;  // table row-major R x C
};

inline SmallInstance random_instance(ei::rng::Sampler& sampler, std::size_t R,
                                     std::size_t C, std::int64_t max_per_cell) {
  SmallInstance inst;
  inst.rows.assign(R, 0);
  inst.cols.assign(C, 0);
  inst.table.resize(R * C);
  for (std::size_t g = 0; g < R; ++g)
    for (std::size_t p = 0; p < C; ++p) {
      const std::int64_t v =
          static_cast<std::int64_t>(sampler.uniform_int(
              static_cast<std::uint64_t>(max_per_cell + 1)));
      inst.table[g * C + p] = v;
      inst.rows[g] += v;
      inst.cols[p] += v;
    }
  return inst;
}

// Spearman rank correlation; assumes no ties matter much (test data is
// continuous). Average ranks are used for exact ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const auto ranks = [n](const std::vector<double>& x) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      return x[i] < x[j];
    });
    std::vector<double> r(n);
    std::size_t k = 0;
    while (k < n) {
      std::size_t j = k;
      while (j + 1 < n && x[idx[j + 1]] == x[idx[k]]) ++j;
      const double avg = 0.5 * (static_cast<double>(k) + static_cast<double>(j)) + 1.0;
      for (std::size_t t = k; t <= j; ++t) r[idx[t]] = avg;
      k = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    num += (ra[k] - mean) * (rb[k] - mean);
    da += (ra[k] - mean) * (ra[k] - mean);
    db += (rb[k] - mean) * (rb[k] - mean);
  }
  return num / std::sqrt(da * db);
}

}  // namespace testutil
