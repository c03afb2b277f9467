// Acceptance gate: ten desk-scale checks, one line of output each.
// Exit code 0 only if every criterion passes.  Tolerances are pinned below;
// they are contract values, not tuning knobs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "ei/analyses.hpp"
#include "ei/bounds.hpp"
#include "ei/enumerate.hpp"
#include "ei/holdout.hpp"
#include "ei/mcmc.hpp"
#include "ei/method.hpp"
#include "ei/rng.hpp"
#include "ei/simulate.hpp"
#include "ei/types.hpp"
#include "ei/weighted_average.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---- pinned tolerances ----------------------------------------------------
constexpr double kC1MaxErr = 0.05;       // per-cell |posterior mean - truth|
constexpr double kC1Mae = 0.02;          // mean absolute error over cells
constexpr double kC1TimeLimit = 600.0;   // seconds
constexpr double kC2MinSpearman = 0.9;   // per option, across brackets
constexpr double kC3Tol = 0.02;          // vs the enumeration oracle
constexpr double kEps = 1e-12;           // FP slack on mathematically exact bounds
constexpr double kC5RowSumTol = 1e-9;
constexpr double kC6Mae = 0.03;          // holdout MAE, 70/30 split
constexpr double kC7Tol = 0.05;          // transition cells
constexpr double kC8Tol = 0.05;          // plebiscite cells
// ---------------------------------------------------------------------------

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d %s: %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

// The reference election used by criteria 1, 2 and 6: five brackets, three
// parties plus abstention, support monotone in age.
const std::vector<std::string> kBrackets = {"18-24", "25-29", "30-39", "40-49",
                                            "50+"};
const std::vector<std::string> kOptions = {"A", "B", "C", "abstain"};
const std::vector<double> kBetaTrue = {
    0.08, 0.10, 0.52, 0.30,  // 18-24
    0.16, 0.14, 0.44, 0.26,  // 25-29
    0.24, 0.18, 0.36, 0.22,  // 30-39
    0.32, 0.22, 0.28, 0.18,  // 40-49
    0.40, 0.26, 0.20, 0.14,  // 50+
};

ei::SyntheticTruth reference_election() {
  ei::SimConfig cfg;
  cfg.n_precincts = 300;
  cfg.electors_per_precinct = 400;
  cfg.age_clustering = 0.8;
  cfg.partition = ei::BracketPartition::parse("18-24,25-29,30-39,40-49,50+");
  cfg.options = ei::OptionSet::from_labels(kOptions, "abstain");
  cfg.beta_true = ei::CellProbabilityMatrix(kBrackets, kOptions, kBetaTrue);
  cfg.seed = 20141130;  // first-round / ballotage season
  return ei::simulate_election(cfg);
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

RunResult run_cli(const std::string& bin, const std::string& args,
                  const fs::path& scratch) {
  const fs::path out = scratch / "stdout.txt";
  const fs::path err = scratch / "stderr.txt";
  const std::string cmd =
      "\"" + bin + "\" " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// -------------------------------------------------------------- criterion 1

ei::PosteriorSummary criterion_1(const ei::SyntheticTruth& truth) {
  const auto t0 = std::chrono::steady_clock::now();
  ei::McmcConfig cfg;  // production defaults: 4 chains, 5000 iters, 1000 burn
  cfg.seed = 1;
  ei::PosteriorSummary post = ei::md_fit(truth.records, kBrackets, kOptions, cfg);

  double max_err = 0.0, mae = 0.0;
  for (std::size_t k = 0; k < kBetaTrue.size(); ++k) {
    const double err = std::abs(post.mean.values()[k] - kBetaTrue[k]);
    max_err = std::max(max_err, err);
    mae += err;
  }
  mae /= static_cast<double>(kBetaTrue.size());
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  report(1,
         max_err <= kC1MaxErr && mae <= kC1Mae && elapsed <= kC1TimeLimit,
         "synthetic recovery 300x400, 5 brackets x 4 options: max_err=" +
             fmt(max_err) + " (<=" + fmt(kC1MaxErr) + "), mae=" + fmt(mae) +
             " (<=" + fmt(kC1Mae) + "), elapsed=" + fmt(elapsed) + "s (<=" +
             fmt(kC1TimeLimit) + "s)");
  return post;
}

// -------------------------------------------------------------- criterion 2

void criterion_2(const ei::SyntheticTruth& truth, const ei::PosteriorSummary& post) {
  const ei::CellProbabilityMatrix wa =
      ei::weighted_average_fit(truth.records, kBrackets, kOptions);
  double worst = 1.0;
  std::string worst_option;
  for (std::size_t p = 0; p < kOptions.size(); ++p) {
    std::vector<double> a, b;
    for (std::size_t g = 0; g < kBrackets.size(); ++g) {
      a.push_back(wa.at(g, p));
      b.push_back(post.mean.at(g, p));
    }
    const double rho = testutil::spearman(a, b);
    if (rho < worst) {
      worst = rho;
      worst_option = kOptions[p];
    }
  }
  report(2, worst >= kC2MinSpearman,
         "weighted-average vs posterior-mean rank agreement: min spearman=" +
             fmt(worst) + (worst_option.empty() ? "" : " (option " + worst_option + ")") +
             " (>=" + fmt(kC2MinSpearman) + ")");
}

// -------------------------------------------------------------- criterion 6

void criterion_6(const ei::SyntheticTruth& truth) {
  ei::McmcConfig cfg;
  cfg.chains = 2;
  cfg.iterations = 2000;
  cfg.burn_in = 500;
  cfg.thinning = 5;
  const ei::HoldoutReport rep = ei::holdout_validate(
      truth.records, ei::BracketPartition::parse("18-24,25-29,30-39,40-49,50+"),
      ei::OptionSet::from_labels(kOptions, "abstain"), ei::Method::md, 0.7, 6, cfg);
  report(6, rep.mae < kC6Mae,
         "70/30 holdout on the criterion-1 election: mae=" + fmt(rep.mae) + " (<" +
             fmt(kC6Mae) + "), train=" + std::to_string(rep.n_train) +
             " test=" + std::to_string(rep.n_test));
}

// -------------------------------------------------------------- criterion 3

void criterion_3() {
  struct Instance {
    std::vector<std::int64_t> rows, cols;
    double alpha;
  };
  const std::vector<Instance> instances = {
      {{3, 1}, {2, 2}, 1.0},  // the spec-listed instance
      {{2, 2}, {2, 2}, 1.0},
      {{4, 3}, {5, 2}, 1.0},
      {{5, 4}, {6, 3}, 2.0},
  };
  double worst = 0.0;
  for (std::size_t t = 0; t < instances.size(); ++t) {
    const auto& inst = instances[t];
    const auto rec = testutil::rec("i" + std::to_string(t), inst.rows, inst.cols);
    const std::size_t R = inst.rows.size(), C = inst.cols.size();

    ei::McmcConfig cfg;
    cfg.chains = 4;
    cfg.iterations = 12000;
    cfg.burn_in = 2000;
    cfg.thinning = 1;
    cfg.seed = 30 + t;
    cfg.alpha_fixed = inst.alpha;
    const auto fit = ei::md_fit({rec}, testutil::labels("g", R),
                                testutil::labels("c", C), cfg);
    const auto exact =
        ei::brute_force_posterior(rec, std::vector<double>(R * C, inst.alpha));
    for (std::size_t k = 0; k < exact.size(); ++k)
      worst = std::max(worst,
                       std::abs(fit.precinct_mean_fractions[0][k] - exact[k]));
  }
  report(3, worst <= kC3Tol,
         "fixed-alpha sampler vs exact enumeration on " +
             std::to_string(instances.size()) + " instances (N<=14): max_diff=" +
             fmt(worst) + " (<=" + fmt(kC3Tol) + ")");
}

// -------------------------------------------------------- criteria 4 and 5

void criteria_4_5() {
  ei::rng::Sampler sampler(20240);
  std::size_t bound_violations = 0, range_violations = 0;
  std::size_t fits = 0, cells_checked = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t R = 2 + sampler.uniform_int(2);
    const std::size_t C = 2 + sampler.uniform_int(2);
    const std::size_t I = 1 + sampler.uniform_int(3);

    // redraw until every bracket has electors somewhere
    std::vector<ei::PrecinctRecord> records;
    for (;;) {
      records.clear();
      std::vector<std::int64_t> xtot(R, 0);
      for (std::size_t i = 0; i < I; ++i) {
        const auto inst = testutil::random_instance(sampler, R, C, 6);
        for (std::size_t g = 0; g < R; ++g) xtot[g] += inst.rows[g];
        records.push_back(testutil::rec("p" + std::to_string(i), inst.rows, inst.cols));
      }
      if (std::all_of(xtot.begin(), xtot.end(),
                      [](std::int64_t x) { return x > 0; }))
        break;
    }

    ei::McmcConfig cfg;
    cfg.chains = 2;
    cfg.iterations = 300;
    cfg.burn_in = 100;
    cfg.thinning = 2;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto fit = ei::md_fit(records, testutil::labels("g", R),
                                testutil::labels("c", C), cfg);
    ++fits;

    const auto bounds = ei::duncan_davis_bounds(records);
    for (std::size_t g = 0; g < R; ++g) {
      double row_sum = 0.0;
      for (std::size_t p = 0; p < C; ++p) {
        const double m = fit.mean.at(g, p);
        row_sum += m;
        ++cells_checked;
        if (m < bounds.agg_lo_at(g, p) - kEps || m > bounds.agg_hi_at(g, p) + kEps)
          ++bound_violations;
        if (m < 0.0 || m > 1.0) ++range_violations;
      }
      if (std::abs(row_sum - 1.0) > kC5RowSumTol) ++range_violations;
    }
    for (std::size_t i = 0; i < records.size(); ++i)
      for (std::size_t g = 0; g < R; ++g)
        for (std::size_t p = 0; p < C; ++p) {
          const double f = fit.precinct_mean_fractions[i][g * C + p];
          ++cells_checked;
          if (f < bounds.lo_at(i, g, p) - kEps || f > bounds.hi_at(i, g, p) + kEps)
            ++bound_violations;
        }
  }

  report(4, bound_violations == 0,
         std::to_string(fits) + " randomized fits, " +
             std::to_string(cells_checked) +
             " cells checked against the feasibility envelope: " +
             std::to_string(bound_violations) + " violations (need 0)");
  report(5, range_violations == 0,
         "same fits: rows sum to 1 within 1e-9 and entries lie in [0,1]: " +
             std::to_string(range_violations) + " violations (need 0)");
}

// -------------------------------------------------------------- criterion 7

void criterion_7() {
  // Round-1 compositions must span the simplex, or the 4x3 transition is not
  // identified; draw them Dirichlet(1) rather than from a one-dimensional
  // age gradient.
  const int n_precincts = 200;
  const std::int64_t electors = 400;
  ei::rng::Sampler comp(71);
  std::vector<std::string> ids;
  std::vector<std::vector<std::int64_t>> round1_votes;
  std::vector<ei::PrecinctRecord> first_recs;
  for (int i = 0; i < n_precincts; ++i) {
    const std::vector<double> ones(kOptions.size(), 1.0);
    std::vector<double> q(kOptions.size());
    comp.dirichlet(ones, q);
    // largest-remainder rounding of 400*q to integer counts
    std::vector<std::int64_t> counts(q.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::int64_t assigned = 0;
    for (std::size_t p = 0; p < q.size(); ++p) {
      const double raw = static_cast<double>(electors) * q[p];
      counts[p] = static_cast<std::int64_t>(std::floor(raw));
      assigned += counts[p];
      rem.push_back({raw - std::floor(raw), p});
    }
    std::sort(rem.begin(), rem.end(), std::greater<>());
    for (std::int64_t k = 0; k < electors - assigned; ++k) ++counts[rem[k].second];

    ids.push_back("m" + std::to_string(i));
    round1_votes.push_back(counts);
    first_recs.push_back(testutil::rec(ids.back(), {electors}, counts));
  }

  // known transitions, rows = round-1 options; A transfers 0.9 across party
  const std::vector<std::string> second_opts = {"X", "Y", "abstain"};
  const std::vector<double> transitions = {
      0.05, 0.90, 0.05,  // A -> mostly Y
      0.85, 0.10, 0.05,  // B -> mostly X
      0.60, 0.30, 0.10,  // C splits
      0.20, 0.20, 0.60,  // abstainers mostly stay home
  };
  const ei::CellProbabilityMatrix t_true(kOptions, second_opts, transitions);
  const auto round2 = ei::simulate_votes(ids, round1_votes, t_true, 72);

  // package both rounds as datasets and pair them like the CLI would
  const ei::Dataset first{ei::OptionSet::from_labels(kOptions, "abstain"),
                          ei::BracketPartition::parse("18+"), first_recs};
  std::vector<ei::PrecinctRecord> second_recs;
  for (const auto& rec : round2.records) {
    auto r = rec;
    r.row_marginals = {rec.votes_total()};
    second_recs.push_back(std::move(r));
  }
  const ei::Dataset second{ei::OptionSet::from_labels(second_opts, "abstain"),
                           ei::BracketPartition::parse("18+"), second_recs};
  const ei::TransitionInput input = ei::pair_rounds(first, second);

  ei::McmcConfig cfg;
  cfg.chains = 2;
  cfg.iterations = 4000;
  cfg.burn_in = 1000;  // the alpha hierarchy needs the longer warmup
  cfg.thinning = 4;
  cfg.seed = 73;
  const ei::EstimateResult res = ei::transition_matrix(input, ei::Method::md, cfg);

  double worst = 0.0;
  for (std::size_t k = 0; k < transitions.size(); ++k)
    worst = std::max(worst, std::abs(res.mean.values()[k] - transitions[k]));
  report(7, worst <= kC7Tol,
         "two-round transition recovery (0.9 cross-party transfer): max_err=" +
             fmt(worst) + " (<=" + fmt(kC7Tol) + ") over " +
             std::to_string(input.n_pairs()) + " paired mesas");
}

// -------------------------------------------------------------- criterion 8

void criterion_8() {
  // party A votes "si" at 0.2, party B at 0.8; mesas span compositions
  const std::vector<std::string> parties = {"A", "B"};
  const std::vector<double> truth_rows = {0.2, 0.8, 0.8, 0.2};
  const ei::CellProbabilityMatrix p_true(parties, {"si", "no"},
                                         truth_rows);
  const int n_precincts = 150;
  std::vector<std::string> ids;
  std::vector<std::vector<std::int64_t>> party_votes;
  std::vector<ei::PrecinctRecord> first_recs;
  for (int i = 0; i < n_precincts; ++i) {
    const double share = 0.15 + 0.7 * static_cast<double>(i) / (n_precincts - 1);
    const std::int64_t a = std::llround(400.0 * share);
    ids.push_back("m" + std::to_string(i));
    party_votes.push_back({a, 400 - a});
    first_recs.push_back(testutil::rec(ids.back(), {400}, {a, 400 - a}));
  }
  const auto pleb = ei::simulate_votes(ids, party_votes, p_true, 81);
  std::map<std::string, std::int64_t> si;
  for (std::size_t i = 0; i < pleb.records.size(); ++i)
    si[pleb.records[i].precinct_id] = pleb.records[i].col_marginals[0];

  const ei::Dataset first{ei::OptionSet::from_labels(parties),
                          ei::BracketPartition::parse("18+"), first_recs};
  ei::McmcConfig cfg;
  cfg.chains = 2;
  cfg.iterations = 4000;
  cfg.burn_in = 1000;  // the alpha hierarchy needs the longer warmup
  cfg.thinning = 3;
  cfg.seed = 82;
  const ei::EstimateResult res = ei::plebiscite_cross(first, si, ei::Method::md, cfg);

  double worst = 0.0;
  for (std::size_t k = 0; k < truth_rows.size(); ++k)
    worst = std::max(worst, std::abs(res.mean.values()[k] - truth_rows[k]));
  report(8, worst <= kC8Tol,
         "plebiscite cross recovery, truth rows (0.2,0.8)/(0.8,0.2): max_err=" +
             fmt(worst) + " (<=" + fmt(kC8Tol) + ")");
}

// -------------------------------------------------------------- criterion 9

void criterion_9() {
  const char* bin = std::getenv("ECOINFER_BIN");
  if (!bin) {
    report(9, false, "ECOINFER_BIN is not set; cannot rerun the CLI");
    return;
  }
  const fs::path base = fs::temp_directory_path() / "ei_accept_rerun";
  fs::remove_all(base);
  fs::create_directories(base);

  spit(base / "beta.csv",
       "bracket,A,B,abstain\n"
       "18-29,0.3,0.5,0.2\n"
       "30+,0.5,0.3,0.2\n");

  bool ok = true;
  std::string detail;
  const auto must = [&](const RunResult& r, const std::string& what) {
    if (r.exit_code != 0) {
      ok = false;
      if (detail.empty()) detail = what + " exited " + std::to_string(r.exit_code);
    }
  };

  // identical simulate / ingest / fit runs, twice each
  for (const char* tag : {"r1", "r2"}) {
    const std::string d = (base / tag).string();
    must(run_cli(bin,
                 "simulate --precincts 10 --electors 120 --clustering 0.6 --beta " +
                     (base / "beta.csv").string() +
                     " --brackets 18-29,30+ --seed 11 --out " + d + "/truth",
                 base),
         "simulate");
    must(run_cli(bin,
                 "ingest --results " + d + "/truth/results.csv --padron " + d +
                     "/truth/padron.csv --brackets 18-29,30+ --out " + d + "/ds",
                 base),
         "ingest");
    must(run_cli(bin,
                 "fit --dataset " + d + "/ds/dataset.json --method md --chains 2"
                 " --iterations 600 --burn-in 100 --thinning 2 --seed 4 --out " +
                     d + "/fit",
                 base),
         "fit");
  }

  if (ok) {
    for (const char* rel :
         {"truth/results.csv", "truth/padron.csv", "truth/truth.json",
          "ds/dataset.json", "fit/estimates.csv"}) {
      if (slurp(base / "r1" / rel) != slurp(base / "r2" / rel)) {
        ok = false;
        detail = std::string(rel) + " differs between reruns";
        break;
      }
    }
  }
  if (ok) {
    // manifests must agree on every digest (timestamps aside)
    for (const char* rel : {"truth", "ds", "fit"}) {
      const auto m1 = json::parse(slurp(base / "r1" / rel / "manifest.json"));
      const auto m2 = json::parse(slurp(base / "r2" / rel / "manifest.json"));
      for (const char* section : {"inputs", "outputs"}) {
        if (m1.at(section).size() != m2.at(section).size()) {
          ok = false;
          detail = std::string(rel) + " manifest " + section + " count differs";
          break;
        }
        for (std::size_t k = 0; k < m1.at(section).size(); ++k)
          if (m1.at(section)[k].at("sha256") != m2.at(section)[k].at("sha256")) {
            ok = false;
            detail = std::string(rel) + " manifest digest differs";
          }
      }
    }
  }
  fs::remove_all(base);
  report(9, ok,
         ok ? "simulate/ingest/fit reruns byte-identical, manifest digests match"
            : detail);
}

// ------------------------------------------------------------- criterion 10

void criterion_10() {
  std::size_t instances = 0, cells = 0, loose = 0;

  const auto check = [&](const std::vector<std::int64_t>& rows,
                         const std::vector<std::int64_t>& cols) {
    const std::size_t R = rows.size(), C = cols.size();
    const auto b =
        ei::duncan_davis_bounds({testutil::rec("t", rows, cols)});
    std::vector<double> lo(R * C, 2.0), hi(R * C, -1.0);
    ei::for_each_feasible_table(rows, cols, [&](const std::vector<std::int64_t>& t) {
      for (std::size_t g = 0; g < R; ++g) {
        if (rows[g] == 0) continue;
        for (std::size_t p = 0; p < C; ++p) {
          const double f =
              static_cast<double>(t[g * C + p]) / static_cast<double>(rows[g]);
          lo[g * C + p] = std::min(lo[g * C + p], f);
          hi[g * C + p] = std::max(hi[g * C + p], f);
        }
      }
    });
    ++instances;
    for (std::size_t g = 0; g < R; ++g)
      for (std::size_t p = 0; p < C; ++p) {
        ++cells;
        if (rows[g] == 0) {
          if (b.lo_at(0, g, p) != 0.0 || b.hi_at(0, g, p) != 0.0) ++loose;
          continue;
        }
        if (std::abs(b.lo_at(0, g, p) - lo[g * C + p]) > kEps ||
            std::abs(b.hi_at(0, g, p) - hi[g * C + p]) > kEps)
          ++loose;
      }
  };

  // every 2x2 instance with N <= 12
  for (std::int64_t n = 1; n <= 12; ++n)
    for (std::int64_t a = 0; a <= n; ++a)
      for (std::int64_t c = 0; c <= n; ++c)
        check({a, n - a}, {c, n - c});

  // every 2x3 instance with N <= 8
  for (std::int64_t n = 1; n <= 8; ++n)
    for (std::int64_t a = 0; a <= n; ++a)
      for (std::int64_t c1 = 0; c1 <= n; ++c1)
        for (std::int64_t c2 = 0; c2 + c1 <= n; ++c2)
          check({a, n - a}, {c1, c2, n - c1 - c2});

  // random 3x3 instances with N <= 12
  ei::rng::Sampler sampler(1012);
  std::size_t drawn = 0;
  while (drawn < 300) {
    const auto inst = testutil::random_instance(sampler, 3, 3, 2);
    const std::int64_t n =
        std::accumulate(inst.rows.begin(), inst.rows.end(), std::int64_t{0});
    if (n == 0 || n > 12) continue;
    check(inst.rows, inst.cols);
    ++drawn;
  }

  report(10, loose == 0,
         "feasibility envelope tight on " + std::to_string(instances) +
             " enumerated instances (N<=12), " + std::to_string(cells) +
             " cells: " + std::to_string(loose) + " untight (need 0)");
}

}  // namespace

int main() {
  try {
    const ei::SyntheticTruth truth = reference_election();
    const ei::PosteriorSummary post = criterion_1(truth);
    criterion_2(truth, post);
    criterion_3();
    criteria_4_5();
    criterion_6(truth);
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
