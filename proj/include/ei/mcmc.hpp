#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ei/types.hpp"

namespace ei {

// Sampler configuration for md_fit. The defaults are the production settings;
// tests and the holdout harness dial them down.
struct McmcConfig {
  int chains = 4;
  int iterations = 5000;  // total per chain, burn-in included
  int burn_in = 1000;
  int thinning = 5;
  std::uint64_t seed = 0;
  double prior_shape = 4.0;  // Gamma hyperprior on each alpha[g][p]
  double prior_rate = 2.0;
  int proposal_step = 1;  // max +/- delta of a latent-table swap proposal
  // When set, the Dirichlet hyperparameters are pinned to this value instead
  // of being sampled; with alpha_fixed = 1 the latent tables are uniform over
  // the feasibility polytope, which is what the enumeration oracle computes.
  std::optional<double> alpha_fixed;

  void validate() const;  // throws ValidationError on nonsense settings
};

// Posterior summary of the aggregate cell fractions
//   F[g][p] = sum_i N[i][g][p] / sum_i X[i][g].
struct PosteriorSummary {
  CellProbabilityMatrix mean;
  std::vector<double> sd;     // row-major R*C
  std::vector<double> ci_lo;  // central 95% credible interval
  std::vector<double> ci_hi;
  std::vector<double> rhat;   // per cell; empty when chains < 2
  std::int64_t effective_samples = 0;  // min over cells, Geyer initial-positive
  std::int64_t total_draws = 0;        // kept draws across chains
  // Posterior mean of the per-precinct cell fractions N[i][g][p] / X[i][g],
  // one row-major R*C block per precinct (zero rows where X[i][g] = 0).
  std::vector<std::vector<double>> precinct_mean_fractions;
  std::vector<std::string> warnings;
  bool converged = true;
};

// Hierarchical multinomial-Dirichlet ecological inference fit.
//
// Model, per precinct i and row category g:
//   N[i][g][.] ~ Multinomial(X[i][g], theta[i][g][.])
//   theta[i][g][.] ~ Dirichlet(alpha[g][.])
//   alpha[g][p] ~ Gamma(prior_shape, prior_rate)
// conditioned on the observed column sums sum_g N[i][g][p] = T[i][p].
//
// Sampled by Metropolis-within-Gibbs: 2x2 swap proposals on the latent
// tables (both marginals preserved), conjugate Dirichlet updates for theta,
// and an adaptive random-walk on log alpha.  Runs `chains` independent
// chains (seeded seed, seed+1, ...) and pools kept draws in chain order, so
// results are bit-identical for a given (config, records) regardless of
// thread count.
PosteriorSummary md_fit(const std::vector<PrecinctRecord>& records,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const McmcConfig& config = {});

PosteriorSummary md_fit(const std::vector<PrecinctRecord>& records,
                        const BracketPartition& partition, const OptionSet& options,
                        const McmcConfig& config = {});

}  // namespace ei
