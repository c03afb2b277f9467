// ecoinfer: ecological inference on aggregate election data.
//
// Subcommands: ingest, fit, simulate, transitions, plebiscite, validate.
// Every run writes a manifest.json with SHA-256 digests of its inputs and
// outputs; all randomness flows from --seed (default 0). On failure a
// machine-readable error record is printed to stderr and the exit code is
// nonzero.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ei/analyses.hpp"
#include "ei/bounds.hpp"
#include "ei/csv.hpp"
#include "ei/dataset_io.hpp"
#include "ei/errors.hpp"
#include "ei/holdout.hpp"
#include "ei/ingest.hpp"
#include "ei/manifest.hpp"
#include "ei/mcmc.hpp"
#include "ei/method.hpp"
#include "ei/report.hpp"
#include "ei/simulate.hpp"
#include "ei/validate.hpp"
#include "ei/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct FitFlags {
  std::string method = "md";
  ei::McmcConfig mcmc;
  std::uint64_t seed = 0;
};

void add_method_flag(CLI::App* cmd, FitFlags& ff) {
  cmd->add_option("--method", ff.method, "estimator: weighted_average, goodman or md")
      ->check(CLI::IsMember({"weighted_average", "wa", "goodman", "md"}))
      ->capture_default_str();
}

void add_mcmc_flags(CLI::App* cmd, FitFlags& ff) {
  cmd->add_option("--chains", ff.mcmc.chains, "independent MCMC chains")
      ->capture_default_str();
  cmd->add_option("--iterations", ff.mcmc.iterations,
                  "iterations per chain, burn-in included")
      ->capture_default_str();
  cmd->add_option("--burn-in", ff.mcmc.burn_in, "discarded warm-up iterations")
      ->capture_default_str();
  cmd->add_option("--thinning", ff.mcmc.thinning, "keep every k-th draw")
      ->capture_default_str();
  cmd->add_option("--seed", ff.seed, "RNG seed; all randomness derives from it")
      ->capture_default_str();
}

json mcmc_json(const ei::McmcConfig& cfg) {
  return {{"chains", cfg.chains},
          {"iterations", cfg.iterations},
          {"burn_in", cfg.burn_in},
          {"thinning", cfg.thinning},
          {"proposal_step", cfg.proposal_step},
          {"prior_shape", cfg.prior_shape},
          {"prior_rate", cfg.prior_rate}};
}

ei::BracketPartition brackets_from_flags(const std::string& brackets, int width) {
  if (!brackets.empty() && width > 0)
    throw ei::ValidationError("pass either --brackets or --bracket-width, not both");
  if (!brackets.empty()) return ei::BracketPartition::parse(brackets);
  if (width > 0) return ei::BracketPartition::uniform(width);
  throw ei::ValidationError("one of --brackets or --bracket-width is required");
}

ei::RunManifest start_manifest(const std::string& command, int argc, char** argv,
                               std::uint64_t seed) {
  ei::RunManifest manifest;
  manifest.command = command;
  manifest.argv.assign(argv, argv + argc);
  manifest.version = ei::kVersion;
  manifest.seed = seed;
  manifest.started_at = ei::iso8601_utc_now();
  return manifest;
}

void finish_manifest(ei::RunManifest& manifest, const std::string& out_dir) {
  manifest.finished_at = ei::iso8601_utc_now();
  std::cout << "wrote " << manifest.write(out_dir) << "\n";
}

void emit_estimates(ei::RunManifest& manifest, const ei::EstimateResult& result,
                    const std::string& out_dir, bool svg) {
  const ei::ReportFiles files = ei::report_emit(result, out_dir, true, svg);
  manifest.add_output(files.estimates_csv);
  std::cout << "wrote " << files.estimates_csv << "\n";
  for (const auto& path : files.svgs) {
    manifest.add_output(path);
    std::cout << "wrote " << path << "\n";
  }
  for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
}

// ---------------------------------------------------------------- ingest --

struct IngestFlags {
  std::string results, padron, out;
  std::string brackets;
  int bracket_width = 0;
  std::string abstain_label = "abstain";
};

int run_ingest(const IngestFlags& ff, int argc, char** argv) {
  ei::RunManifest manifest = start_manifest("ingest", argc, argv, 0);
  manifest.add_input(ff.results);
  manifest.add_input(ff.padron);
  const ei::BracketPartition partition = brackets_from_flags(ff.brackets, ff.bracket_width);
  manifest.config = {{"brackets", ff.brackets},
                     {"bracket_width", ff.bracket_width},
                     {"abstain_label", ff.abstain_label}};

  const ei::Dataset dataset =
      ei::ingest_election(ff.results, ff.padron, partition, ff.abstain_label);

  std::error_code ec;
  fs::create_directories(ff.out, ec);
  if (ec) throw ei::IoFailure("cannot create " + ff.out + ": " + ec.message());
  const std::string dataset_path = (fs::path(ff.out) / "dataset.json").string();
  ei::save_dataset(dataset, dataset_path);
  manifest.add_output(dataset_path);

  std::int64_t electors = 0;
  for (const auto& rec : dataset.records) electors += rec.roll();
  std::cout << "precincts=" << dataset.records.size() << " electors=" << electors
            << " options=" << dataset.options.size() << " brackets="
            << dataset.partition.size() << "\n";
  std::cout << "wrote " << dataset_path << "\n";
  finish_manifest(manifest, ff.out);
  return 0;
}

// ------------------------------------------------------------------- fit --

struct CmdFitFlags : FitFlags {
  std::string dataset, out;
  bool no_plots = false;
};

int run_fit(const CmdFitFlags& ff, int argc, char** argv) {
  ei::RunManifest manifest = start_manifest("fit", argc, argv, ff.seed);
  manifest.add_input(ff.dataset);
  const ei::Method method = ei::parse_method(ff.method);
  ei::McmcConfig cfg = ff.mcmc;
  cfg.seed = ff.seed;
  manifest.config = {{"method", ei::method_name(method)}, {"mcmc", mcmc_json(cfg)}};

  const ei::Dataset dataset = ei::load_dataset(ff.dataset);
  const ei::EstimateResult result = ei::age_party_curve(dataset, method, cfg);
  emit_estimates(manifest, result, ff.out, !ff.no_plots);
  finish_manifest(manifest, ff.out);
  return 0;
}

// -------------------------------------------------------------- simulate --

struct SimulateFlags {
  int precincts = 100;
  int electors = 400;
  double clustering = 0.8;
  std::string beta, out;
  std::string brackets;
  int bracket_width = 0;
  std::string abstain_label = "abstain";
  int max_age = 90;
  std::uint64_t seed = 0;
};

int run_simulate(const SimulateFlags& ff, int argc, char** argv) {
  ei::RunManifest manifest = start_manifest("simulate", argc, argv, ff.seed);
  manifest.add_input(ff.beta);
  const ei::BracketPartition partition = brackets_from_flags(ff.brackets, ff.bracket_width);
  const ei::CellProbabilityMatrix beta = ei::read_beta_csv(ff.beta);
  if (beta.rows() != partition.size() || beta.row_labels() != partition.labels())
    throw ei::ValidationError("beta rows do not match the bracket partition (" +
                              std::to_string(beta.rows()) + " rows vs " +
                              std::to_string(partition.size()) + " brackets)");
  const ei::OptionSet options =
      ei::OptionSet::from_labels(beta.col_labels(), ff.abstain_label);
  manifest.config = {{"precincts", ff.precincts}, {"electors", ff.electors},
                     {"clustering", ff.clustering}, {"brackets", ff.brackets},
                     {"bracket_width", ff.bracket_width}, {"max_age", ff.max_age},
                     {"abstain_label", ff.abstain_label}};

  const ei::SyntheticTruth truth = ei::simulate_election({
      .n_precincts = ff.precincts,
      .electors_per_precinct = ff.electors,
      .age_clustering = ff.clustering,
      .beta_true = beta,
      .partition = partition,
      .options = options,
      .seed = ff.seed,
      .age_weights = {},
      .max_age = ff.max_age,
  });

  std::error_code ec;
  fs::create_directories(ff.out, ec);
  if (ec) throw ei::IoFailure("cannot create " + ff.out + ": " + ec.message());
  const std::string results_path = (fs::path(ff.out) / "results.csv").string();
  const std::string padron_path = (fs::path(ff.out) / "padron.csv").string();
  const std::string truth_path = (fs::path(ff.out) / "truth.json").string();
  ei::write_results_csv(truth.records, options, results_path);
  ei::write_padron_csv(truth, partition, padron_path);
  ei::save_truth(truth, partition.labels(), options.labels(), truth_path);
  for (const auto& path : {results_path, padron_path, truth_path}) {
    manifest.add_output(path);
    std::cout << "wrote " << path << "\n";
  }
  finish_manifest(manifest, ff.out);
  return 0;
}

// ------------------------------------------------- transitions/plebiscite --

struct TransitionsFlags : FitFlags {
  std::string first, second, out;
  double max_roll_drift = 0.01;
};

int run_transitions(const TransitionsFlags& ff, int argc, char** argv) {
  ei::RunManifest manifest = start_manifest("transitions", argc, argv, ff.seed);
  manifest.add_input(ff.first);
  manifest.add_input(ff.second);
  const ei::Method method = ei::parse_method(ff.method);
  ei::McmcConfig cfg = ff.mcmc;
  cfg.seed = ff.seed;
  manifest.config = {{"method", ei::method_name(method)},
                     {"max_roll_drift", ff.max_roll_drift},
                     {"mcmc", mcmc_json(cfg)}};

  const ei::Dataset first = ei::load_dataset(ff.first);
  const ei::Dataset second = ei::load_dataset(ff.second);
  const ei::TransitionInput input = ei::pair_rounds(first, second, ff.max_roll_drift);
  std::cout << "paired=" << input.n_pairs() << " only_first=" << input.n_only_first
            << " only_second=" << input.n_only_second << "\n";
  const ei::EstimateResult result = ei::transition_matrix(input, method, cfg);
  emit_estimates(manifest, result, ff.out, false);
  finish_manifest(manifest, ff.out);
  return 0;
}

struct PlebisciteFlags : FitFlags {
  std::string first, si, out;
};

int run_plebiscite(const PlebisciteFlags& ff, int argc, char** argv) {
  ei::RunManifest manifest = start_manifest("plebiscite", argc, argv, ff.seed);
  manifest.add_input(ff.first);
  manifest.add_input(ff.si);
  const ei::Method method = ei::parse_method(ff.method);
  ei::McmcConfig cfg = ff.mcmc;
  cfg.seed = ff.seed;
  manifest.config = {{"method", ei::method_name(method)}, {"mcmc", mcmc_json(cfg)}};

  const ei::Dataset first = ei::load_dataset(ff.first);
  const auto si_votes = ei::read_plebiscite_csv(ff.si);
  const ei::EstimateResult result = ei::plebiscite_cross(first, si_votes, method, cfg);
  emit_estimates(manifest, result, ff.out, false);
  finish_manifest(manifest, ff.out);
  return 0;
}

// -------------------------------------------------------------- validate --

struct ValidateFlags : FitFlags {
  std::string dataset, out;
  double split = 0.7;
};

int run_validate(const ValidateFlags& ff, int argc, char** argv) {
  ei::RunManifest manifest = start_manifest("validate", argc, argv, ff.seed);
  manifest.add_input(ff.dataset);
  const ei::Method method = ei::parse_method(ff.method);
  ei::McmcConfig cfg = ff.mcmc;
  cfg.seed = ff.seed;
  manifest.config = {{"method", ei::method_name(method)}, {"split", ff.split},
                     {"mcmc", mcmc_json(cfg)}};

  const ei::Dataset dataset = ei::load_dataset(ff.dataset);
  const ei::HoldoutReport report = ei::holdout_validate(
      dataset.records, dataset.partition, dataset.options, method, ff.split, ff.seed, cfg);

  json j;
  j["format"] = "ei-holdout/1";
  j["method"] = ei::method_name(method);
  j["split"] = ff.split;
  j["n_train"] = report.n_train;
  j["n_test"] = report.n_test;
  j["mae"] = report.mae;
  json per = json::object();
  for (std::size_t p = 0; p < report.per_option_mae.size(); ++p)
    per[dataset.options.option(p).label] = report.per_option_mae[p];
  j["per_option_mae"] = std::move(per);

  std::error_code ec;
  fs::create_directories(ff.out, ec);
  if (ec) throw ei::IoFailure("cannot create " + ff.out + ": " + ec.message());
  const std::string report_path = (fs::path(ff.out) / "holdout.json").string();
  std::ofstream out(report_path, std::ios::binary);
  if (!out) throw ei::IoFailure("cannot open " + report_path + " for writing");
  out << j.dump(2) << "\n";
  if (!out.flush()) throw ei::IoFailure("failed while writing " + report_path);
  manifest.add_output(report_path);

  std::cout << "train=" << report.n_train << " test=" << report.n_test
            << " mae=" << ei::format_double(report.mae) << "\n";
  std::cout << "wrote " << report_path << "\n";
  finish_manifest(manifest, ff.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ecological inference for aggregate election data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("ecoinfer ") + ei::kVersion);

  IngestFlags ingest_flags;
  auto* ingest = app.add_subcommand("ingest", "join results and padron into a dataset");
  ingest->add_option("--results", ingest_flags.results, "results CSV (long format)")
      ->required();
  ingest->add_option("--padron", ingest_flags.padron, "per-age electoral roll CSV")
      ->required();
  ingest->add_option("--brackets", ingest_flags.brackets,
                     "age brackets, e.g. 18-24,25-29,30+");
  ingest->add_option("--bracket-width", ingest_flags.bracket_width,
                     "equal-width brackets starting at 18");
  ingest->add_option("--abstain-label", ingest_flags.abstain_label,
                     "label for the derived abstention column")
      ->capture_default_str();
  ingest->add_option("--out", ingest_flags.out, "output directory")->required();

  CmdFitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "estimate P(option | age bracket)");
  fit->add_option("--dataset", fit_flags.dataset, "dataset.json from ingest")->required();
  fit->add_option("--out", fit_flags.out, "output directory")->required();
  fit->add_flag("--no-plots", fit_flags.no_plots, "skip SVG output");
  add_method_flag(fit, fit_flags);
  add_mcmc_flags(fit, fit_flags);

  SimulateFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "generate a synthetic election");
  sim->add_option("--precincts", sim_flags.precincts)->capture_default_str();
  sim->add_option("--electors", sim_flags.electors, "electors per precinct")
      ->capture_default_str();
  sim->add_option("--clustering", sim_flags.clustering, "age clustering in [0,1]")
      ->capture_default_str();
  sim->add_option("--beta", sim_flags.beta, "true cell matrix CSV (bracket,<option>,...)")
      ->required();
  sim->add_option("--brackets", sim_flags.brackets, "age brackets, e.g. 18-24,25-29,30+");
  sim->add_option("--bracket-width", sim_flags.bracket_width,
                  "equal-width brackets starting at 18");
  sim->add_option("--abstain-label", sim_flags.abstain_label,
                  "beta column holding abstention")
      ->capture_default_str();
  sim->add_option("--max-age", sim_flags.max_age)->capture_default_str();
  sim->add_option("--seed", sim_flags.seed)->capture_default_str();
  sim->add_option("--out", sim_flags.out, "output directory")->required();

  TransitionsFlags tr_flags;
  auto* tr = app.add_subcommand("transitions",
                                "estimate P(second-round option | first-round option)");
  tr->add_option("--first", tr_flags.first, "first-round dataset.json")->required();
  tr->add_option("--second", tr_flags.second, "second-round dataset.json")->required();
  tr->add_option("--max-roll-drift", tr_flags.max_roll_drift,
                 "tolerated |roll2-roll1|/roll1")
      ->capture_default_str();
  tr->add_option("--out", tr_flags.out, "output directory")->required();
  add_method_flag(tr, tr_flags);
  add_mcmc_flags(tr, tr_flags);

  PlebisciteFlags pl_flags;
  auto* pl = app.add_subcommand("plebiscite",
                                "cross first-round options with a yes/no plebiscite");
  pl->add_option("--first", pl_flags.first, "first-round dataset.json")->required();
  pl->add_option("--si", pl_flags.si, "plebiscite CSV (precinct_id,si_votes)")->required();
  pl->add_option("--out", pl_flags.out, "output directory")->required();
  add_method_flag(pl, pl_flags);
  add_mcmc_flags(pl, pl_flags);

  ValidateFlags val_flags;
  auto* val = app.add_subcommand("validate", "holdout check of estimator predictions");
  val->add_option("--dataset", val_flags.dataset, "dataset.json from ingest")->required();
  val->add_option("--split", val_flags.split, "train fraction in (0,1)")
      ->capture_default_str();
  val->add_option("--out", val_flags.out, "output directory")->required();
  add_method_flag(val, val_flags);
  add_mcmc_flags(val, val_flags);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(ingest)) return run_ingest(ingest_flags, argc, argv);
    if (app.got_subcommand(fit)) return run_fit(fit_flags, argc, argv);
    if (app.got_subcommand(sim)) return run_simulate(sim_flags, argc, argv);
    if (app.got_subcommand(tr)) return run_transitions(tr_flags, argc, argv);
    if (app.got_subcommand(pl)) return run_plebiscite(pl_flags, argc, argv);
    if (app.got_subcommand(val)) return run_validate(val_flags, argc, argv);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0)
      std::cerr << json({{"error", "UsageError"}, {"message", e.what()}}).dump() << "\n";
    return code;
  } catch (const ei::Error& e) {
    std::cerr << json({{"error", e.kind()}, {"message", e.what()}}).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "InternalError"}, {"message", e.what()}}).dump() << "\n";
    return 1;
  }
}
