#include "ei/analyses.hpp"

#include <cmath>
#include <unordered_map>

#include "ei/errors.hpp"
#include "ei/goodman.hpp"
#include "ei/validate.hpp"
#include "ei/weighted_average.hpp"

namespace ei {

namespace {

// Every analysis funnels through here: fit the requested estimator on
// records whose rows/cols are already arranged for the question at hand.
EstimateResult fit_records(const std::vector<PrecinctRecord>& records,
                           const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels, Method method,
                           const McmcConfig& config) {
  EstimateResult result;
  switch (method) {
    case Method::weighted_average:
      result.mean = weighted_average_fit(records, row_labels, col_labels);
      break;
    case Method::goodman: {
      GoodmanFit fit = goodman_fit(records, row_labels, col_labels);
      result.mean = std::move(fit.beta);
      break;
    }
    case Method::md: {
      PosteriorSummary post = md_fit(records, row_labels, col_labels, config);
      result.mean = std::move(post.mean);
      result.sd = std::move(post.sd);
      result.ci_lo = std::move(post.ci_lo);
      result.ci_hi = std::move(post.ci_hi);
      result.warnings = std::move(post.warnings);
      break;
    }
  }
  return result;
}

}  // namespace

EstimateResult age_party_curve(const Dataset& dataset, Method method,
                               const McmcConfig& config) {
  validate_dataset(dataset);
  EstimateResult result = fit_records(dataset.records, dataset.partition.labels(),
                                      dataset.options.labels(), method, config);
  result.axis.resize(dataset.partition.size());
  for (std::size_t g = 0; g < dataset.partition.size(); ++g)
    result.axis[g] = dataset.partition.midpoint(g);
  return result;
}

TransitionInput pair_rounds(const Dataset& first, const Dataset& second,
                            double max_roll_drift) {
  if (!(max_roll_drift >= 0.0))
    throw ValidationError("pair_rounds: max_roll_drift must be >= 0");
  const auto abstain = second.options.abstain_index();
  if (!abstain)
    throw ValidationError(
        "pair_rounds: the second round needs an abstention column to absorb roll drift");

  std::unordered_map<std::string, std::size_t> second_by_id;
  second_by_id.reserve(second.records.size());
  for (std::size_t j = 0; j < second.records.size(); ++j)
    second_by_id.emplace(second.records[j].precinct_id, j);

  TransitionInput out;
  out.row_labels = first.options.labels();
  out.col_labels = second.options.labels();
  std::size_t matched = 0;
  for (const auto& rec1 : first.records) {
    const auto it = second_by_id.find(rec1.precinct_id);
    if (it == second_by_id.end()) {
      ++out.n_only_first;
      continue;
    }
    ++matched;
    const auto& rec2 = second.records[it->second];
    const std::int64_t roll1 = rec1.votes_total();  // complete table: == roll
    const std::int64_t roll2 = rec2.votes_total();
    if (roll1 <= 0) continue;  // empty precinct: nothing to redistribute
    const double drift =
        std::abs(static_cast<double>(roll2 - roll1)) / static_cast<double>(roll1);
    if (drift > max_roll_drift)
      throw RollDriftExceeded(rec1.precinct_id, drift, max_roll_drift);

    PrecinctRecord pr;
    pr.precinct_id = rec1.precinct_id;
    pr.series = rec1.series;
    pr.department = rec1.department;
    pr.row_marginals = rec1.col_marginals;  // first-round options become rows
    pr.col_marginals = rec2.col_marginals;
    pr.col_marginals[*abstain] += roll1 - roll2;  // absorb the drift
    if (pr.col_marginals[*abstain] < 0)
      throw RollDriftExceeded(rec1.precinct_id, drift, max_roll_drift);
    out.paired.push_back(std::move(pr));
  }
  out.n_only_second = second.records.size() - matched;
  if (out.paired.empty()) throw NoPairedPrecincts();
  return out;
}

EstimateResult transition_matrix(const TransitionInput& input, Method method,
                                 const McmcConfig& config) {
  if (input.paired.empty()) throw NoPairedPrecincts();
  return fit_records(input.paired, input.row_labels, input.col_labels, method, config);
}

TransitionInput pair_plebiscite(const Dataset& first,
                                const std::map<std::string, std::int64_t>& si_votes) {
  TransitionInput out;
  out.row_labels = first.options.labels();
  out.col_labels = {"si", "no_o_blanco"};
  for (const auto& rec : first.records) {
    const auto it = si_votes.find(rec.precinct_id);
    if (it == si_votes.end()) throw JoinFailure(rec.precinct_id, "the plebiscite file");
    const std::int64_t si = it->second;
    const std::int64_t roll = rec.votes_total();
    if (si < 0) throw NegativeCount(rec.precinct_id, "plebiscite si votes", si);
    if (si > roll)
      throw ValidationError("precinct " + rec.precinct_id + ": " + std::to_string(si) +
                            " plebiscite votes exceed the " + std::to_string(roll) +
                            "-person roll");
    PrecinctRecord pr;
    pr.precinct_id = rec.precinct_id;
    pr.series = rec.series;
    pr.department = rec.department;
    pr.row_marginals = rec.col_marginals;
    pr.col_marginals = {si, roll - si};
    out.paired.push_back(std::move(pr));
  }
  if (out.paired.empty()) throw NoPairedPrecincts();
  return out;
}

EstimateResult plebiscite_cross(const Dataset& first,
                                const std::map<std::string, std::int64_t>& si_votes,
                                Method method, const McmcConfig& config) {
  const TransitionInput input = pair_plebiscite(first, si_votes);
  return fit_records(input.paired, input.row_labels, input.col_labels, method, config);
}

}  // namespace ei
