#include "ei/mcmc.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "ei/diagnostics.hpp"
#include "ei/errors.hpp"
#include "ei/kernels.hpp"
#include "ei/mcmc_detail.hpp"
#include "ei/rng.hpp"
#include "ei/validate.hpp"

namespace ei {

void McmcConfig::validate() const {
  if (chains < 1) throw ValidationError("mcmc: chains must be >= 1");
  if (iterations < 1) throw ValidationError("mcmc: iterations must be >= 1");
  if (burn_in < 0) throw ValidationError("mcmc: burn_in must be >= 0");
  if (burn_in >= iterations)
    throw ValidationError("mcmc: burn_in must be smaller than iterations");
  if (thinning < 1) throw ValidationError("mcmc: thinning must be >= 1");
  if (!(prior_shape > 0.0) || !(prior_rate > 0.0))
    throw ValidationError("mcmc: the Gamma hyperprior needs positive shape and rate");
  if (proposal_step < 1) throw ValidationError("mcmc: proposal_step must be >= 1");
  if (alpha_fixed && !(*alpha_fixed > 0.0))
    throw ValidationError("mcmc: alpha_fixed must be positive");
}

namespace {

struct Problem {
  std::size_t R = 0, C = 0, I = 0;
  std::vector<std::vector<std::int64_t>> rows;  // per precinct
  std::vector<std::vector<std::int64_t>> cols;
  std::vector<double> xtot;  // per row category, summed over precincts
};

struct ChainOut {
  std::vector<double> draws;         // kept * R*C aggregate fractions F
  std::vector<double> precinct_acc;  // I * R*C summed per-draw fractions
  std::size_t kept = 0;
};

int thread_budget(int chains) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("EI_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) budget = v;
  }
  return std::min(budget, chains);
}

ChainOut run_chain(const Problem& pb, const McmcConfig& cfg, int chain_idx) {
  const std::size_t R = pb.R, C = pb.C, I = pb.I, RC = R * C;
  rng::Sampler sampler(rng::mix(cfg.seed + static_cast<std::uint64_t>(chain_idx), 0));

  // Latent tables start from the deterministic independence-based fill.
  std::vector<std::vector<std::int64_t>> tables(I);
  for (std::size_t i = 0; i < I; ++i)
    tables[i] = mcmc_detail::initial_feasible_table(pb.rows[i], pb.cols[i]);

  const bool sample_alpha = !cfg.alpha_fixed.has_value();
  std::vector<double> alpha(RC, cfg.alpha_fixed.value_or(cfg.prior_shape / cfg.prior_rate));
  std::vector<double> alpha_row(R, 0.0);
  for (std::size_t g = 0; g < R; ++g)
    for (std::size_t p = 0; p < C; ++p) alpha_row[g] += alpha[g * C + p];

  std::vector<double> theta(I * RC, 0.0);
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t g = 0; g < R; ++g) {
      const double denom =
          static_cast<double>(pb.rows[i][g]) + static_cast<double>(C);
      for (std::size_t p = 0; p < C; ++p)
        theta[i * RC + g * C + p] =
            (static_cast<double>(tables[i][g * C + p]) + 1.0) / denom;
    }

  std::vector<double> log_theta;
  std::vector<double> suff;  // S[g][p] = sum_i log theta[i][g][p]
  std::vector<double> log_step(RC, 0.0);
  if (sample_alpha) {
    log_theta.resize(I * RC);
    suff.resize(RC);
  }

  const int swaps_per_precinct = std::max(4, static_cast<int>(RC));
  const int total_iters = cfg.iterations;  // includes burn-in
  const std::size_t kept_target =
      (static_cast<std::size_t>(cfg.iterations - cfg.burn_in) + cfg.thinning - 1) /
      static_cast<std::size_t>(cfg.thinning);

  ChainOut out;
  out.draws.reserve(kept_target * RC);
  out.precinct_acc.assign(I * RC, 0.0);

  std::vector<double> alpha_post(C);
  std::vector<std::int64_t> cell_sum(RC);

  for (int it = 0; it < total_iters; ++it) {
    // 1. latent tables | theta: Metropolis swap moves, marginal-preserving
    for (std::size_t i = 0; i < I; ++i) {
      mcmc_detail::sweep_swaps(tables[i], R, C,
                               std::span<const double>(theta.data() + i * RC, RC),
                               swaps_per_precinct, cfg.proposal_step, sampler);
      assert(mcmc_detail::marginals_match(tables[i], R, C, pb.rows[i], pb.cols[i]));
    }

    // 2. theta | tables, alpha: conjugate Dirichlet rows
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t g = 0; g < R; ++g) {
        for (std::size_t p = 0; p < C; ++p)
          alpha_post[p] = alpha[g * C + p] +
                          static_cast<double>(tables[i][g * C + p]);
        sampler.dirichlet(alpha_post,
                          std::span<double>(theta.data() + i * RC + g * C, C));
      }

    // 3. alpha | theta: random-walk Metropolis on log alpha, adapted toward
    // a 0.44 acceptance rate during burn-in and frozen afterwards.
    if (sample_alpha) {
      kernels::log_array(theta, log_theta);
      std::fill(suff.begin(), suff.end(), 0.0);
      for (std::size_t i = 0; i < I; ++i)
        kernels::add_inplace(suff, std::span<const double>(log_theta.data() + i * RC, RC));

      const double gain = std::pow(static_cast<double>(it + 1), -0.6);
      const double n_rows = static_cast<double>(I);
      for (std::size_t cell = 0; cell < RC; ++cell) {
        const std::size_t g = cell / C;
        const double a = alpha[cell];
        const double la = std::log(a);
        const double la_new = la + std::exp(log_step[cell]) * sampler.normal();
        bool accepted = false;
        if (la_new > -14.0 && la_new < 14.0) {  // keep alpha in a sane range
          const double a_new = std::exp(la_new);
          const double row_new = alpha_row[g] + (a_new - a);
          const double delta = n_rows * (std::lgamma(row_new) - std::lgamma(alpha_row[g])) -
                               n_rows * (std::lgamma(a_new) - std::lgamma(a)) +
                               (a_new - a) * suff[cell] +
                               cfg.prior_shape * (la_new - la) -
                               cfg.prior_rate * (a_new - a);
          if (delta >= 0.0 || std::log(1.0 - sampler.uniform()) < delta) {
            alpha[cell] = a_new;
            alpha_row[g] = row_new;
            accepted = true;
          }
        }
        if (it < cfg.burn_in) {
          log_step[cell] += gain * ((accepted ? 1.0 : 0.0) - 0.44);
          log_step[cell] = std::clamp(log_step[cell], -7.0, 7.0);
        }
      }
    }

    // 4. record
    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thinning == 0) {
      std::fill(cell_sum.begin(), cell_sum.end(), std::int64_t{0});
      for (std::size_t i = 0; i < I; ++i) {
        const auto& tab = tables[i];
        for (std::size_t cell = 0; cell < RC; ++cell) cell_sum[cell] += tab[cell];
        for (std::size_t g = 0; g < R; ++g) {
          const std::int64_t xg = pb.rows[i][g];
          if (xg <= 0) continue;
          for (std::size_t p = 0; p < C; ++p)
            out.precinct_acc[i * RC + g * C + p] +=
                static_cast<double>(tab[g * C + p]) / static_cast<double>(xg);
        }
      }
      for (std::size_t g = 0; g < R; ++g)
        for (std::size_t p = 0; p < C; ++p)
          out.draws.push_back(static_cast<double>(cell_sum[g * C + p]) / pb.xtot[g]);
      ++out.kept;
    }
  }
  assert(out.kept == kept_target);
  return out;
}

}  // namespace

PosteriorSummary md_fit(const std::vector<PrecinctRecord>& records,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const McmcConfig& config) {
  config.validate();
  const std::size_t R = row_labels.size();
  const std::size_t C = col_labels.size();
  if (records.empty()) throw ValidationError("md_fit: no precincts");

  Problem pb;
  pb.R = R;
  pb.C = C;
  pb.I = records.size();
  pb.rows.reserve(pb.I);
  pb.cols.reserve(pb.I);
  pb.xtot.assign(R, 0.0);
  for (const auto& rec : records) {
    if (rec.row_marginals.size() != R || rec.col_marginals.size() != C)
      throw DimensionMismatch("md_fit: record shape " +
                              std::to_string(rec.row_marginals.size()) + "x" +
                              std::to_string(rec.col_marginals.size()) + ", expected " +
                              std::to_string(R) + "x" + std::to_string(C));
    if (rec.roll() != rec.votes_total())
      throw NoFeasibleTable("precinct " + rec.precinct_id + ": rows sum to " +
                            std::to_string(rec.roll()) + " but columns to " +
                            std::to_string(rec.votes_total()) +
                            "; md_fit needs complete tables (derive abstention first)");
    for (std::int64_t x : rec.row_marginals)
      if (x < 0) throw NegativeCount(rec.precinct_id, "row marginals", x);
    for (std::int64_t t : rec.col_marginals)
      if (t < 0) throw NegativeCount(rec.precinct_id, "col marginals", t);
    pb.rows.push_back(rec.row_marginals);
    pb.cols.push_back(rec.col_marginals);
    for (std::size_t g = 0; g < R; ++g)
      pb.xtot[g] += static_cast<double>(rec.row_marginals[g]);
  }
  for (std::size_t g = 0; g < R; ++g)
    if (pb.xtot[g] <= 0.0) throw EmptyBracket(row_labels[g]);

  // Independent chains, merged in chain order so the result does not depend
  // on how many threads actually ran.
  const int n_chains = config.chains;
  std::vector<ChainOut> outs(static_cast<std::size_t>(n_chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
  const int workers = thread_budget(n_chains);
  if (workers <= 1) {
    for (int c = 0; c < n_chains; ++c) outs[static_cast<std::size_t>(c)] = run_chain(pb, config, c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wk = 0; wk < workers; ++wk) {
      pool.emplace_back([&, wk]() {
        for (int c = wk; c < n_chains; c += workers) {
          try {
            outs[static_cast<std::size_t>(c)] = run_chain(pb, config, c);
          } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  const std::size_t RC = R * C;
  const std::size_t kept_per_chain = outs[0].kept;
  std::size_t total = 0;
  for (const auto& o : outs) total += o.kept;

  PosteriorSummary summary;
  summary.total_draws = static_cast<std::int64_t>(total);
  summary.sd.assign(RC, 0.0);
  summary.ci_lo.assign(RC, 0.0);
  summary.ci_hi.assign(RC, 0.0);
  if (n_chains >= 2) summary.rhat.assign(RC, 1.0);

  std::vector<double> mean_values(RC, 0.0);
  double min_ess = static_cast<double>(total);
  std::vector<std::vector<double>> per_chain(static_cast<std::size_t>(n_chains));
  std::vector<double> pooled;
  pooled.reserve(total);
  for (std::size_t cell = 0; cell < RC; ++cell) {
    pooled.clear();
    for (int c = 0; c < n_chains; ++c) {
      const auto& o = outs[static_cast<std::size_t>(c)];
      auto& series = per_chain[static_cast<std::size_t>(c)];
      series.resize(o.kept);
      for (std::size_t k = 0; k < o.kept; ++k) series[k] = o.draws[k * RC + cell];
      pooled.insert(pooled.end(), series.begin(), series.end());
    }
    const double mean = kernels::sum(pooled) / static_cast<double>(total);
    mean_values[cell] = std::clamp(mean, 0.0, 1.0);
    double ss = 0.0;
    for (double x : pooled) ss += (x - mean) * (x - mean);
    summary.sd[cell] = total > 1 ? std::sqrt(ss / static_cast<double>(total - 1)) : 0.0;

    std::sort(pooled.begin(), pooled.end());
    // widen so the (clamped) mean is always covered, as the summary promises
    summary.ci_lo[cell] = std::min(quantile_sorted(pooled, 0.025), mean_values[cell]);
    summary.ci_hi[cell] = std::max(quantile_sorted(pooled, 0.975), mean_values[cell]);

    if (n_chains >= 2 && kept_per_chain >= 2)
      summary.rhat[cell] = potential_scale_reduction(per_chain);
    min_ess = std::min(min_ess, effective_sample_size(per_chain));
  }
  summary.effective_samples =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(min_ess)));
  summary.mean = CellProbabilityMatrix(row_labels, col_labels, std::move(mean_values));

  summary.precinct_mean_fractions.assign(pb.I, std::vector<double>(RC, 0.0));
  for (std::size_t i = 0; i < pb.I; ++i) {
    auto& frac = summary.precinct_mean_fractions[i];
    for (int c = 0; c < n_chains; ++c) {
      const auto& acc = outs[static_cast<std::size_t>(c)].precinct_acc;
      for (std::size_t cell = 0; cell < RC; ++cell) frac[cell] += acc[i * RC + cell];
    }
    for (std::size_t cell = 0; cell < RC; ++cell) frac[cell] /= static_cast<double>(total);
  }

  if (!summary.rhat.empty()) {
    const double worst = *std::max_element(summary.rhat.begin(), summary.rhat.end());
    if (!(worst <= 1.1)) {
      summary.converged = false;
      summary.warnings.push_back("chains may not have converged: max rhat = " +
                                 std::to_string(worst));
    }
  }
  return summary;
}

PosteriorSummary md_fit(const std::vector<PrecinctRecord>& records,
                        const BracketPartition& partition, const OptionSet& options,
                        const McmcConfig& config) {
  return md_fit(records, partition.labels(), options.labels(), config);
}

}  // namespace ei
