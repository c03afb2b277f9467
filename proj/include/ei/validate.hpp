#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ei/types.hpp"

namespace ei {

// Checks the accounting identity for one record: with an abstention column
// every elector must be accounted for (sum of votes == roll); without one
// turnout may not exceed the roll. Throws MarginalMismatch, NegativeCount or
// DimensionMismatch; returns the record unchanged otherwise.
const PrecinctRecord& validate_precinct(const PrecinctRecord& record,
                                        const OptionSet& options);

// Validates every record, including the row dimension against the partition.
const Dataset& validate_dataset(const Dataset& dataset);

struct PadronRow {
  std::string precinct_id;
  int age = 0;
  std::int64_t electors = 0;
};

// Bins per-age elector counts into bracket marginals, one vector per
// precinct. Throws AgeBelowMinimum / AgeNotCovered / NegativeCount.
std::map<std::string, std::vector<std::int64_t>> aggregate_padron(
    const std::vector<PadronRow>& rows, const BracketPartition& partition);

}  // namespace ei
