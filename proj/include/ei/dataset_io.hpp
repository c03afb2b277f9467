#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ei/simulate.hpp"
#include "ei/types.hpp"

namespace ei {

// Canonical on-disk form of an ingested dataset ("ei-dataset/1"): bracket
// grammar, ordered options with the abstention flag, and one record per
// precinct.  save is deterministic byte-for-byte for a given dataset.
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

// precinct_id,si_votes
std::map<std::string, std::int64_t> read_plebiscite_csv(const std::string& path);

// Cell matrix with labeled rows: header "bracket,<option>,...", one row per
// bracket.  Rows must sum to 1 within 1e-6; small residue is renormalized.
CellProbabilityMatrix read_beta_csv(const std::string& path);

// Ground truth of a synthetic run ("ei-truth/1"): beta_true plus the hidden
// per-precinct tables, for scoring estimators against the generator.
void save_truth(const SyntheticTruth& truth, const std::vector<std::string>& row_labels,
                const std::vector<std::string>& col_labels, const std::string& path);

}  // namespace ei
