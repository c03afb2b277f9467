#include "ei/simulate.hpp"

#include <algorithm>
#include <cstdio>

#include "ei/errors.hpp"
#include "ei/rng.hpp"

namespace ei {

namespace {

std::string precinct_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "M%05d", i + 1);
  return buf;
}

}  // namespace

SyntheticTruth simulate_election(const SimConfig& config) {
  const std::size_t R = config.partition.size();
  const std::size_t C = config.options.size();
  if (config.beta_true.rows() != R || config.beta_true.cols() != C)
    throw DimensionMismatch("beta_true is " + std::to_string(config.beta_true.rows()) +
                            "x" + std::to_string(config.beta_true.cols()) +
                            " but partition x options is " + std::to_string(R) +
                            "x" + std::to_string(C));
  if (config.n_precincts < 1 || config.electors_per_precinct < 1)
    throw ValidationError("need at least one precinct and one elector");
  if (!(config.age_clustering >= 0.0 && config.age_clustering <= 1.0))
    throw ValidationError("age_clustering must be in [0,1]");

  // Pyramid support: ages 18..max_age, clipped to what the partition covers.
  int max_age = config.max_age;
  if (const auto top = config.partition.max_age()) max_age = std::min(max_age, *top);
  if (max_age < 18) throw ValidationError("partition covers no simulatable age");
  const std::size_t n_ages = static_cast<std::size_t>(max_age - 18 + 1);
  std::vector<double> pyramid(config.age_weights);
  if (pyramid.empty()) {
    pyramid.assign(n_ages, 1.0);
  } else if (pyramid.size() < n_ages) {
    throw DimensionMismatch("age_weights covers fewer ages than the pyramid span");
  } else {
    pyramid.resize(n_ages);
  }

  SyntheticTruth out{.records = {},
                     .true_tables = {},
                     .beta_true = config.beta_true,
                     .age_counts = {}};
  out.records.reserve(config.n_precincts);
  out.true_tables.reserve(config.n_precincts);
  out.age_counts.reserve(config.n_precincts);

  std::vector<std::int64_t> age_hist(n_ages);
  for (int i = 0; i < config.n_precincts; ++i) {
    rng::Sampler rng(rng::mix(config.seed, static_cast<std::uint64_t>(i)));
    const int center = 18 + static_cast<int>(rng.categorical(pyramid));

    std::fill(age_hist.begin(), age_hist.end(), 0);
    std::vector<std::int64_t> table(R * C, 0);
    for (int e = 0; e < config.electors_per_precinct; ++e) {
      int age = center;
      if (rng.uniform() >= config.age_clustering)
        age = 18 + static_cast<int>(rng.categorical(pyramid));
      ++age_hist[static_cast<std::size_t>(age - 18)];
      const std::size_t g = *config.partition.bracket_of(age);
      const std::vector<double> row = config.beta_true.row(g);
      const std::size_t p = rng.categorical(row);
      ++table[g * C + p];
    }
    std::vector<std::pair<int, std::int64_t>> ages;
    for (std::size_t a = 0; a < n_ages; ++a)
      if (age_hist[a] > 0) ages.emplace_back(18 + static_cast<int>(a), age_hist[a]);
    out.age_counts.push_back(std::move(ages));

    PrecinctRecord rec;
    rec.precinct_id = precinct_name(i);
    rec.series = "S" + std::to_string(i / 40 + 1);
    rec.department = "SIM";
    rec.row_marginals.assign(R, 0);
    rec.col_marginals.assign(C, 0);
    for (std::size_t g = 0; g < R; ++g)
      for (std::size_t p = 0; p < C; ++p) {
        rec.row_marginals[g] += table[g * C + p];
        rec.col_marginals[p] += table[g * C + p];
      }
    out.records.push_back(std::move(rec));
    out.true_tables.push_back(std::move(table));
  }
  return out;
}

SyntheticTruth simulate_votes(const std::vector<std::string>& precinct_ids,
                              const std::vector<std::vector<std::int64_t>>& row_marginals,
                              const CellProbabilityMatrix& beta,
                              std::uint64_t seed) {
  if (precinct_ids.size() != row_marginals.size())
    throw DimensionMismatch("precinct_ids and row_marginals differ in length");
  const std::size_t R = beta.rows();
  const std::size_t C = beta.cols();

  SyntheticTruth out{.records = {}, .true_tables = {}, .beta_true = beta, .age_counts = {}};
  out.records.reserve(precinct_ids.size());
  out.true_tables.reserve(precinct_ids.size());

  for (std::size_t i = 0; i < precinct_ids.size(); ++i) {
    if (row_marginals[i].size() != R)
      throw DimensionMismatch("precinct " + precinct_ids[i] +
                              " row marginals do not match beta rows");
    rng::Sampler rng(rng::mix(seed, i));
    std::vector<std::int64_t> table(R * C, 0);
    for (std::size_t g = 0; g < R; ++g) {
      if (row_marginals[i][g] < 0)
        throw NegativeCount(precinct_ids[i], "row marginals", row_marginals[i][g]);
      const std::vector<double> row = beta.row(g);
      for (std::int64_t e = 0; e < row_marginals[i][g]; ++e)
        ++table[g * C + rng.categorical(row)];
    }

    PrecinctRecord rec;
    rec.precinct_id = precinct_ids[i];
    rec.series = "S1";
    rec.department = "SIM";
    rec.row_marginals = row_marginals[i];
    rec.col_marginals.assign(C, 0);
    for (std::size_t g = 0; g < R; ++g)
      for (std::size_t p = 0; p < C; ++p) rec.col_marginals[p] += table[g * C + p];
    out.records.push_back(std::move(rec));
    out.true_tables.push_back(std::move(table));
  }
  return out;
}

}  // namespace ei
