#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ei {

struct Option {
  std::string label;
  bool abstain = false;
};

// Ordered set of vote options (parties, blank, abstention, plebiscite
// yes/no). At most one option is flagged as the abstention column.
class OptionSet {
 public:
  OptionSet() = default;  // empty placeholder, fill before use
  explicit OptionSet(std::vector<Option> options);
  static OptionSet from_labels(const std::vector<std::string>& labels,
                               const std::optional<std::string>& abstain_label = {});

  std::size_t size() const { return options_.size(); }
  const Option& option(std::size_t p) const { return options_[p]; }
  const std::vector<Option>& options() const { return options_; }
  std::vector<std::string> labels() const;
  std::optional<std::size_t> abstain_index() const { return abstain_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

 private:
  std::vector<Option> options_;
  std::optional<std::size_t> abstain_;
};

// Inclusive age range; hi == nullopt means open-ended ("30+").
struct Bracket {
  int lo = 18;
  std::optional<int> hi;
  std::string label() const;
};

// Ordered, disjoint, contiguous brackets covering [18, max].
class BracketPartition {
 public:
  BracketPartition() = default;  // empty placeholder, fill before use
  explicit BracketPartition(std::vector<Bracket> brackets);
  // parses "18-24,25-29,30+"
  static BracketPartition parse(const std::string& text);
  // equal-width brackets from 18, open-ended once lo reaches open_from
  static BracketPartition uniform(int width, int open_from = 88);

  std::size_t size() const { return brackets_.size(); }
  const Bracket& bracket(std::size_t g) const { return brackets_[g]; }
  std::optional<std::size_t> bracket_of(int age) const;
  std::vector<std::string> labels() const;
  // plot position for a bracket; an open-ended bracket reuses the previous
  // bracket's width (or 5 years when it is the only one)
  double midpoint(std::size_t g) const;
  bool open_ended() const { return !brackets_.back().hi.has_value(); }
  // highest covered age, when the partition is closed
  std::optional<int> max_age() const { return brackets_.back().hi; }

 private:
  std::vector<Bracket> brackets_;
};

// One mesa's aggregates: electors per row category and votes per option.
// Rows are age brackets in the first-round analyses and first-round options
// in the transition analyses; the estimators only see the marginals.
struct PrecinctRecord {
  std::string precinct_id;
  std::string series;
  std::string department;
  std::vector<std::int64_t> row_marginals;
  std::vector<std::int64_t> col_marginals;

  std::int64_t roll() const;
  std::int64_t votes_total() const;
};

// Row-stochastic R x C matrix of P(option | row category).
class CellProbabilityMatrix {
 public:
  CellProbabilityMatrix() = default;  // empty 0x0 matrix
  CellProbabilityMatrix(std::vector<std::string> row_labels,
                        std::vector<std::string> col_labels,
                        std::vector<double> values);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  double at(std::size_t g, std::size_t p) const { return values_[g * cols() + p]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  std::vector<double> row(std::size_t g) const;

  static constexpr double kRowSumTolerance = 1e-9;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<double> values_;
};

// Deterministic feasibility envelope: per-precinct and aggregate bounds on
// each cell fraction, as implied by the marginals alone.
struct CellBounds {
  std::size_t n_precincts = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> lo;      // [i][g][p], row-major over (g, p)
  std::vector<double> hi;
  std::vector<double> agg_lo;  // [g][p]
  std::vector<double> agg_hi;

  double lo_at(std::size_t i, std::size_t g, std::size_t p) const {
    return lo[(i * rows + g) * cols + p];
  }
  double hi_at(std::size_t i, std::size_t g, std::size_t p) const {
    return hi[(i * rows + g) * cols + p];
  }
  double agg_lo_at(std::size_t g, std::size_t p) const { return agg_lo[g * cols + p]; }
  double agg_hi_at(std::size_t g, std::size_t p) const { return agg_hi[g * cols + p]; }
};

// A fully ingested election: option set, bracket partition and one record
// per precinct.
struct Dataset {
  OptionSet options;
  BracketPartition partition;
  std::vector<PrecinctRecord> records;
};

}  // namespace ei
