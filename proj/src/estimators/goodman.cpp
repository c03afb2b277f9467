#include "ei/goodman.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ei/errors.hpp"

namespace ei {

namespace {

// Coordinate descent for min 0.5 b'Mb - c'b over the box [0,1]^R.  M is
// positive definite here (full-rank check precedes the call), so the sweep
// map is a contraction and a few hundred passes are plenty.
void solve_box_qp(const Eigen::MatrixXd& M, const Eigen::VectorXd& c, Eigen::VectorXd& b) {
  const auto R = M.rows();
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index g = 0; g < R; ++g) {
      double resid = c[g];
      for (Eigen::Index h = 0; h < R; ++h)
        if (h != g) resid -= M(g, h) * b[h];
      const double prev = b[g];
      b[g] = std::clamp(resid / M(g, g), 0.0, 1.0);
      max_delta = std::max(max_delta, std::abs(b[g] - prev));
    }
    if (max_delta < 1e-13) break;
  }
}

}  // namespace

GoodmanFit goodman_fit(const std::vector<PrecinctRecord>& records,
                       const std::vector<std::string>& row_labels,
                       const std::vector<std::string>& col_labels) {
  const std::size_t R = row_labels.size();
  const std::size_t C = col_labels.size();
  if (records.empty()) throw ValidationError("goodman_fit: no precincts");
  for (const auto& rec : records) {
    if (rec.row_marginals.size() != R || rec.col_marginals.size() != C)
      throw DimensionMismatch("goodman_fit: record shape " +
                              std::to_string(rec.row_marginals.size()) + "x" +
                              std::to_string(rec.col_marginals.size()) + ", expected " +
                              std::to_string(R) + "x" + std::to_string(C));
  }

  // Weighted normal equations: M = sum_i N_i w_i w_i', rhs_p = sum_i N_i v_ip w_i.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(R),
                                            static_cast<Eigen::Index>(R));
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(R),
                                              static_cast<Eigen::Index>(C));
  Eigen::VectorXd w(static_cast<Eigen::Index>(R));
  for (const auto& rec : records) {
    const std::int64_t roll = rec.roll();
    const std::int64_t cast = rec.votes_total();
    if (roll <= 0 || cast <= 0) continue;
    const double n = static_cast<double>(roll);
    for (std::size_t g = 0; g < R; ++g)
      w[static_cast<Eigen::Index>(g)] = static_cast<double>(rec.row_marginals[g]) / n;
    M.noalias() += n * (w * w.transpose());
    for (std::size_t p = 0; p < C; ++p) {
      const double v = static_cast<double>(rec.col_marginals[p]) / static_cast<double>(cast);
      rhs.col(static_cast<Eigen::Index>(p)) += (n * v) * w;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  const std::size_t rank = static_cast<std::size_t>(lu.rank());
  if (rank < R) throw RankDeficient(rank, R);

  GoodmanFit fit;
  fit.rank = rank;
  fit.raw.resize(R * C);
  std::vector<double> beta(R * C);
  for (std::size_t p = 0; p < C; ++p) {
    Eigen::VectorXd raw_p = lu.solve(rhs.col(static_cast<Eigen::Index>(p)));
    Eigen::VectorXd b = raw_p.cwiseMax(0.0).cwiseMin(1.0);
    solve_box_qp(M, rhs.col(static_cast<Eigen::Index>(p)), b);
    for (std::size_t g = 0; g < R; ++g) {
      fit.raw[g * C + p] = raw_p[static_cast<Eigen::Index>(g)];
      beta[g * C + p] = b[static_cast<Eigen::Index>(g)];
    }
  }

  // Constrained per-option solves do not know rows must be simplexes; fix that
  // up and keep the discrepancy as a fit diagnostic.
  fit.row_renorm_delta.resize(R);
  for (std::size_t g = 0; g < R; ++g) {
    double s = 0.0;
    for (std::size_t p = 0; p < C; ++p) s += beta[g * C + p];
    fit.row_renorm_delta[g] = std::abs(s - 1.0);
    if (s > 0.0) {
      for (std::size_t p = 0; p < C; ++p)
        beta[g * C + p] = std::clamp(beta[g * C + p] / s, 0.0, 1.0);
    } else {
      for (std::size_t p = 0; p < C; ++p) beta[g * C + p] = 1.0 / static_cast<double>(C);
    }
  }
  fit.beta = CellProbabilityMatrix(row_labels, col_labels, std::move(beta));
  return fit;
}

GoodmanFit goodman_fit(const std::vector<PrecinctRecord>& records,
                       const BracketPartition& partition, const OptionSet& options) {
  return goodman_fit(records, partition.labels(), options.labels());
}

}  // namespace ei
