#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ei/bounds.hpp"
#include "ei/diagnostics.hpp"
#include "ei/enumerate.hpp"
#include "ei/errors.hpp"
#include "ei/mcmc.hpp"
#include "ei/mcmc_detail.hpp"
#include "ei/rng.hpp"
#include "ei/types.hpp"
#include "helpers.hpp"

using namespace ei;

TEST_CASE("mcmc config validation") {
  McmcConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  auto bad = cfg;
  bad.chains = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.burn_in = bad.iterations;  // burn-in must leave draws to keep
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.thinning = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.prior_shape = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.prior_rate = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.proposal_step = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.alpha_fixed = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("initial feasible table hits both marginals") {
  ei::rng::Sampler sampler(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t R = 1 + sampler.uniform_int(4);
    const std::size_t C = 2 + sampler.uniform_int(3);
    const auto inst = testutil::random_instance(sampler, R, C, 50);
    const auto table = mcmc_detail::initial_feasible_table(inst.rows, inst.cols);
    REQUIRE(table.size() == R * C);
    for (std::int64_t v : table) CHECK(v >= 0);
    CHECK(mcmc_detail::marginals_match(table, R, C, inst.rows, inst.cols));
  }
  CHECK_THROWS_AS(mcmc_detail::initial_feasible_table({3, 3}, {2, 2}),
                  NoFeasibleTable);
}

TEST_CASE("swap sweeps preserve marginals and report acceptances") {
  ei::rng::Sampler sampler(77);
  const auto inst = testutil::random_instance(sampler, 3, 3, 30);
  auto table = mcmc_detail::initial_feasible_table(inst.rows, inst.cols);
  std::vector<double> theta(9);
  for (auto& t : theta) t = 0.05 + 0.9 * sampler.uniform();
  // normalize rows so theta is a genuine cell distribution
  for (std::size_t g = 0; g < 3; ++g) {
    double s = 0.0;
    for (std::size_t p = 0; p < 3; ++p) s += theta[g * 3 + p];
    for (std::size_t p = 0; p < 3; ++p) theta[g * 3 + p] /= s;
  }
  int accepted_total = 0;
  for (int sweep = 0; sweep < 300; ++sweep) {
    const int acc = mcmc_detail::sweep_swaps(table, 3, 3, theta, 10, 2, sampler);
    CHECK(acc >= 0);
    CHECK(acc <= 10);
    accepted_total += acc;
    REQUIRE(mcmc_detail::marginals_match(table, 3, 3, inst.rows, inst.cols));
    for (std::int64_t v : table) REQUIRE(v >= 0);
  }
  CHECK(accepted_total > 0);  // the chain actually moves
}

TEST_CASE("gelman-rubin and ess diagnostics") {
  // identical degenerate chains: rhat exactly 1
  CHECK(potential_scale_reduction({{2.0, 2.0, 2.0}, {2.0, 2.0, 2.0}}) == 1.0);
  // between-chain spread with no within-chain variance: infinite rhat
  CHECK(std::isinf(potential_scale_reduction({{1.0, 1.0}, {2.0, 2.0}})));
  // well-mixed chains: rhat close to 1
  ei::rng::Sampler sampler(3);
  std::vector<std::vector<double>> chains(4, std::vector<double>(500));
  for (auto& c : chains)
    for (auto& x : c) x = sampler.normal();
  CHECK(potential_scale_reduction(chains) < 1.02);

  // iid draws: ESS within a sane band of the total
  const double ess = effective_sample_size(chains);
  CHECK(ess > 1000.0);
  CHECK(ess <= 2000.0);

  // strongly autocorrelated draws: ESS far below the total
  std::vector<std::vector<double>> sticky(2, std::vector<double>(500));
  for (auto& c : sticky) {
    double x = 0.0;
    for (auto& v : c) {
      x = 0.98 * x + 0.02 * sampler.normal();
      v = x;
    }
  }
  CHECK(effective_sample_size(sticky) < 200.0);

  // constant chains clamp to the floor instead of dividing by zero
  CHECK(effective_sample_size({{1.0, 1.0, 1.0, 1.0, 1.0}}) >= 1.0);
}

TEST_CASE("type-7 quantiles") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5.0}, 0.975) == 5.0);
  CHECK(quantile({1.0, 2.0}, 0.0) == 1.0);
  CHECK(quantile({1.0, 2.0}, 1.0) == 2.0);
}

namespace {

McmcConfig quick_config() {
  McmcConfig cfg;
  cfg.chains = 2;
  cfg.iterations = 600;
  cfg.burn_in = 100;
  cfg.thinning = 1;
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST_CASE("single-row problems are pinned exactly") {
  // with one row category the table equals the column marginals; no
  // randomness survives into the reported fractions
  const std::vector<PrecinctRecord> recs = {
      testutil::rec("p1", {100}, {60, 40}),
      testutil::rec("p2", {50}, {10, 40}),
  };
  const auto fit = md_fit(recs, {"18+"}, {"A", "abstain"}, quick_config());
  CHECK(fit.mean.at(0, 0) == doctest::Approx(70.0 / 150.0).epsilon(1e-12));
  CHECK(fit.mean.at(0, 1) == doctest::Approx(80.0 / 150.0).epsilon(1e-12));
  // the draws are all the same value; only accumulation rounding survives
  CHECK(fit.sd[0] < 1e-12);
  CHECK(fit.sd[1] < 1e-12);
  REQUIRE(fit.rhat.size() == 2);
  CHECK(fit.rhat[0] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fit.converged);
  CHECK(fit.warnings.empty());
  CHECK(fit.ci_lo[0] == doctest::Approx(fit.mean.at(0, 0)));
  CHECK(fit.ci_hi[0] == doctest::Approx(fit.mean.at(0, 0)));
  // per-precinct fractions are the observed shares
  CHECK(fit.precinct_mean_fractions[0][0] == doctest::Approx(0.6));
  CHECK(fit.precinct_mean_fractions[1][1] == doctest::Approx(0.8));
}

TEST_CASE("md_fit is bit-identical across reruns and thread counts") {
  ei::rng::Sampler sampler(55);
  std::vector<PrecinctRecord> recs;
  for (int i = 0; i < 6; ++i) {
    const auto inst = testutil::random_instance(sampler, 2, 3, 25);
    recs.push_back(testutil::rec("p" + std::to_string(i), inst.rows, inst.cols));
  }
  const auto labels_r = testutil::labels("g", 2);
  const auto labels_c = testutil::labels("c", 3);

  const auto a = md_fit(recs, labels_r, labels_c, quick_config());
  const auto b = md_fit(recs, labels_r, labels_c, quick_config());
  REQUIRE(a.mean.values().size() == b.mean.values().size());
  for (std::size_t k = 0; k < a.mean.values().size(); ++k) {
    CHECK(std::bit_cast<std::uint64_t>(a.mean.values()[k]) ==
          std::bit_cast<std::uint64_t>(b.mean.values()[k]));
    CHECK(std::bit_cast<std::uint64_t>(a.sd[k]) ==
          std::bit_cast<std::uint64_t>(b.sd[k]));
  }

  // forcing the thread pool down to one worker must not change anything:
  // chains own disjoint RNG streams and are merged in chain order
  setenv("EI_THREADS", "1", 1);
  const auto serial = md_fit(recs, labels_r, labels_c, quick_config());
  unsetenv("EI_THREADS");
  for (std::size_t k = 0; k < a.mean.values().size(); ++k)
    CHECK(std::bit_cast<std::uint64_t>(a.mean.values()[k]) ==
          std::bit_cast<std::uint64_t>(serial.mean.values()[k]));

  // different seed, different draws
  auto cfg = quick_config();
  cfg.seed = 10;
  const auto c = md_fit(recs, labels_r, labels_c, cfg);
  bool any_diff = false;
  for (std::size_t k = 0; k < a.sd.size(); ++k)
    any_diff = any_diff || a.sd[k] != c.sd[k];
  CHECK(any_diff);
}

TEST_CASE("posterior summaries satisfy their invariants") {
  ei::rng::Sampler sampler(91);
  std::vector<PrecinctRecord> recs;
  for (int i = 0; i < 8; ++i) {
    const auto inst = testutil::random_instance(sampler, 3, 3, 40);
    recs.push_back(testutil::rec("p" + std::to_string(i), inst.rows, inst.cols));
  }
  auto cfg = quick_config();
  cfg.iterations = 800;
  cfg.burn_in = 200;
  cfg.thinning = 2;
  const auto fit = md_fit(recs, testutil::labels("g", 3), testutil::labels("c", 3), cfg);

  // kept draws: ceil((800 - 200) / 2) per chain, both chains pooled
  CHECK(fit.total_draws == 2 * 300);
  CHECK(fit.effective_samples >= 1);
  CHECK(fit.effective_samples <= fit.total_draws);

  const auto bounds = duncan_davis_bounds(recs);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t p = 0; p < 3; ++p) {
      const std::size_t k = g * 3 + p;
      CHECK(fit.sd[k] >= 0.0);
      CHECK(fit.ci_lo[k] <= fit.mean.at(g, p));
      CHECK(fit.ci_hi[k] >= fit.mean.at(g, p));
      CHECK(fit.mean.at(g, p) >= bounds.agg_lo_at(g, p) - 1e-9);
      CHECK(fit.mean.at(g, p) <= bounds.agg_hi_at(g, p) + 1e-9);
    }
  REQUIRE(fit.precinct_mean_fractions.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i)
    for (std::size_t g = 0; g < 3; ++g)
      for (std::size_t p = 0; p < 3; ++p) {
        const double f = fit.precinct_mean_fractions[i][g * 3 + p];
        CHECK(f >= bounds.lo_at(i, g, p) - 1e-9);
        CHECK(f <= bounds.hi_at(i, g, p) + 1e-9);
      }
}

TEST_CASE("fixed-alpha chains agree with the enumeration oracle") {
  // With alpha pinned the latent-table marginal is exactly the
  // Dirichlet-multinomial posterior that brute_force_posterior enumerates.
  auto check_instance = [](const PrecinctRecord& rec, double alpha) {
    McmcConfig cfg;
    cfg.chains = 2;
    cfg.iterations = 6000;
    cfg.burn_in = 1000;
    cfg.thinning = 1;
    cfg.seed = 4;
    cfg.alpha_fixed = alpha;
    const auto fit = md_fit({rec}, testutil::labels("g", rec.row_marginals.size()),
                            testutil::labels("c", rec.col_marginals.size()), cfg);
    const std::vector<double> exact = brute_force_posterior(
        rec, std::vector<double>(
                 rec.row_marginals.size() * rec.col_marginals.size(), alpha));
    for (std::size_t k = 0; k < exact.size(); ++k)
      CHECK(std::abs(fit.precinct_mean_fractions[0][k] - exact[k]) < 0.03);
  };
  check_instance(testutil::rec("t1", {3, 1}, {2, 2}), 1.0);
  check_instance(testutil::rec("t2", {4, 3}, {5, 2}), 1.0);
  check_instance(testutil::rec("t3", {2, 2}, {2, 2}), 2.5);
}

TEST_CASE("md_fit validates its inputs") {
  McmcConfig cfg = quick_config();
  // incomplete accounting: roll != votes
  CHECK_THROWS_AS(md_fit({testutil::rec("p", {10, 10}, {5, 5})},
                         {"g1", "g2"}, {"A", "B"}, cfg),
                  NoFeasibleTable);
  CHECK_THROWS_AS(md_fit({testutil::rec("p", {-1, 21}, {10, 10})},
                         {"g1", "g2"}, {"A", "B"}, cfg),
                  NegativeCount);
  // a bracket empty in every precinct cannot be estimated
  CHECK_THROWS_AS(md_fit({testutil::rec("p", {20, 0}, {10, 10}),
                          testutil::rec("q", {30, 0}, {15, 15})},
                         {"g1", "g2"}, {"A", "B"}, cfg),
                  EmptyBracket);
  CHECK_THROWS_AS(md_fit({testutil::rec("p", {10, 10}, {10, 10})},
                         {"g1", "g2", "g3"}, {"A", "B"}, cfg),
                  DimensionMismatch);
  CHECK_THROWS_AS(md_fit({}, {"g1"}, {"A", "B"}, cfg), ValidationError);
}
