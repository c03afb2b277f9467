#include "ei/bounds.hpp"

#include <algorithm>

#include "ei/errors.hpp"

namespace ei {

CellBounds duncan_davis_bounds(const std::vector<PrecinctRecord>& records) {
  if (records.empty()) throw ValidationError("no records to bound");
  const std::size_t R = records[0].row_marginals.size();
  const std::size_t C = records[0].col_marginals.size();

  CellBounds b;
  b.n_precincts = records.size();
  b.rows = R;
  b.cols = C;
  b.lo.assign(records.size() * R * C, 0.0);
  b.hi.assign(records.size() * R * C, 0.0);
  b.agg_lo.assign(R * C, 0.0);
  b.agg_hi.assign(R * C, 0.0);

  std::vector<double> weight(R * C, 0.0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PrecinctRecord& rec = records[i];
    if (rec.row_marginals.size() != R || rec.col_marginals.size() != C)
      throw DimensionMismatch("precinct " + rec.precinct_id +
                              " has inconsistent dimensions");
    const std::int64_t n = rec.roll();
    for (std::size_t g = 0; g < R; ++g) {
      const std::int64_t xg = rec.row_marginals[g];
      for (std::size_t p = 0; p < C; ++p) {
        const std::size_t cell = (i * R + g) * C + p;
        if (xg == 0) continue;  // [0, 0] by convention
        const std::int64_t tp = rec.col_marginals[p];
        const std::int64_t lo_count = std::max<std::int64_t>(0, tp - (n - xg));
        const std::int64_t hi_count = std::min<std::int64_t>(xg, tp);
        b.lo[cell] = static_cast<double>(lo_count) / static_cast<double>(xg);
        b.hi[cell] = static_cast<double>(hi_count) / static_cast<double>(xg);
        const double w = static_cast<double>(xg);
        b.agg_lo[g * C + p] += w * b.lo[cell];
        b.agg_hi[g * C + p] += w * b.hi[cell];
        weight[g * C + p] += w;
      }
    }
  }
  for (std::size_t cell = 0; cell < R * C; ++cell) {
    if (weight[cell] > 0.0) {
      b.agg_lo[cell] /= weight[cell];
      b.agg_hi[cell] /= weight[cell];
    }
  }
  return b;
}

}  // namespace ei
