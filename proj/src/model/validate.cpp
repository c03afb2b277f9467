#include "ei/validate.hpp"

#include "ei/errors.hpp"

namespace ei {

const PrecinctRecord& validate_precinct(const PrecinctRecord& record,
                                        const OptionSet& options) {
  if (record.col_marginals.size() != options.size())
    throw DimensionMismatch("precinct " + record.precinct_id + " has " +
                            std::to_string(record.col_marginals.size()) +
                            " vote columns, expected " +
                            std::to_string(options.size()));
  if (record.row_marginals.empty())
    throw DimensionMismatch("precinct " + record.precinct_id +
                            " has no row marginals");
  for (std::int64_t x : record.row_marginals)
    if (x < 0) throw NegativeCount(record.precinct_id, "elector counts", x);
  for (std::int64_t t : record.col_marginals)
    if (t < 0) throw NegativeCount(record.precinct_id, "vote counts", t);

  const std::int64_t electors = record.roll();
  const std::int64_t votes = record.votes_total();
  if (options.abstain_index()) {
    if (electors != votes)
      throw MarginalMismatch(record.precinct_id, electors, votes);
  } else {
    if (votes > electors)
      throw MarginalMismatch(record.precinct_id, electors, votes);
  }
  return record;
}

const Dataset& validate_dataset(const Dataset& dataset) {
  for (const PrecinctRecord& r : dataset.records) {
    if (r.row_marginals.size() != dataset.partition.size())
      throw DimensionMismatch("precinct " + r.precinct_id + " has " +
                              std::to_string(r.row_marginals.size()) +
                              " bracket rows, expected " +
                              std::to_string(dataset.partition.size()));
    validate_precinct(r, dataset.options);
  }
  return dataset;
}

std::map<std::string, std::vector<std::int64_t>> aggregate_padron(
    const std::vector<PadronRow>& rows, const BracketPartition& partition) {
  std::map<std::string, std::vector<std::int64_t>> out;
  for (const PadronRow& row : rows) {
    if (row.electors < 0)
      throw NegativeCount(row.precinct_id, "padron electors", row.electors);
    if (row.age < 18) throw AgeBelowMinimum(row.precinct_id, row.age);
    const auto g = partition.bracket_of(row.age);
    if (!g) throw AgeNotCovered(row.precinct_id, row.age);
    auto [it, inserted] = out.try_emplace(
        row.precinct_id, std::vector<std::int64_t>(partition.size(), 0));
    it->second[*g] += row.electors;
  }
  return out;
}

}  // namespace ei
