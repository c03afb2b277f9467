#include "ei/weighted_average.hpp"

#include <algorithm>

#include "ei/errors.hpp"
#include "ei/kernels.hpp"
#include "ei/validate.hpp"

namespace ei {

CellProbabilityMatrix weighted_average_fit(const std::vector<PrecinctRecord>& records,
                                           const std::vector<std::string>& row_labels,
                                           const std::vector<std::string>& col_labels) {
  const std::size_t R = row_labels.size();
  const std::size_t C = col_labels.size();
  if (records.empty()) throw ValidationError("weighted_average_fit: no precincts");
  for (const auto& rec : records) {
    if (rec.row_marginals.size() != R || rec.col_marginals.size() != C)
      throw DimensionMismatch("weighted_average_fit: record shape " +
                              std::to_string(rec.row_marginals.size()) + "x" +
                              std::to_string(rec.col_marginals.size()) + ", expected " +
                              std::to_string(R) + "x" + std::to_string(C));
  }

  // Column-major scratch: one contiguous array per bracket (weights) and per
  // option (shares), so the reductions below are plain dot products.
  const std::size_t I = records.size();
  std::vector<double> w(R * I, 0.0);
  std::vector<double> v(C * I, 0.0);
  for (std::size_t i = 0; i < I; ++i) {
    const auto& rec = records[i];
    const std::int64_t roll = rec.roll();
    const std::int64_t cast = rec.votes_total();
    if (roll <= 0 || cast <= 0) continue;  // empty precinct carries no information
    for (std::size_t g = 0; g < R; ++g)
      w[g * I + i] = static_cast<double>(rec.row_marginals[g]) / static_cast<double>(roll);
    for (std::size_t p = 0; p < C; ++p)
      v[p * I + i] = static_cast<double>(rec.col_marginals[p]) / static_cast<double>(cast);
  }

  std::vector<double> beta(R * C, 0.0);
  for (std::size_t g = 0; g < R; ++g) {
    std::span<const double> wg(w.data() + g * I, I);
    const double den = kernels::sum(wg);
    if (den <= 0.0) throw EmptyBracket(row_labels[g]);
    for (std::size_t p = 0; p < C; ++p) {
      const double num = kernels::dot(wg, std::span<const double>(v.data() + p * I, I));
      beta[g * C + p] = std::clamp(num / den, 0.0, 1.0);
    }
  }
  return CellProbabilityMatrix(row_labels, col_labels, std::move(beta));
}

CellProbabilityMatrix weighted_average_fit(const std::vector<PrecinctRecord>& records,
                                           const BracketPartition& partition,
                                           const OptionSet& options) {
  return weighted_average_fit(records, partition.labels(), options.labels());
}

}  // namespace ei
