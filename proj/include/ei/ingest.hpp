#pragma once

#include <string>

#include "ei/simulate.hpp"
#include "ei/types.hpp"

namespace ei {

// Joins a long-format results file (precinct_id,series,department,option,votes)
// with a per-age padron (precinct_id,age,electors), bins ages into the given
// partition, derives the abstention column as roll minus votes cast, and
// validates the result.  Option order is first appearance in the results
// file; the derived abstention column goes last under `abstain_label`.
//
// Throws ParseError, JoinFailure (precinct present on one side only),
// MarginalMismatch (more votes than electors), NegativeCount,
// AgeBelowMinimum / AgeNotCovered, ValidationError (abstain label collision).
Dataset ingest_election(const std::string& results_path, const std::string& padron_path,
                        const BracketPartition& partition,
                        const std::string& abstain_label = "abstain");

// Inverse of ingest for synthetic data: writes the ingestable pair of CSVs.
// The results file lists every non-abstention option (abstention is derived
// on the way back in); the padron lists per-age counts when the truth
// carries them, otherwise one row per bracket at the bracket's lower age.
void write_results_csv(const std::vector<PrecinctRecord>& records,
                       const OptionSet& options, const std::string& path);
void write_padron_csv(const SyntheticTruth& truth, const BracketPartition& partition,
                      const std::string& path);

}  // namespace ei
