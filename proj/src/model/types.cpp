#include "ei/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ei/errors.hpp"

namespace ei {

OptionSet::OptionSet(std::vector<Option> options) : options_(std::move(options)) {
  if (options_.size() < 2)
    throw ValidationError("an option set needs at least 2 options");
  std::set<std::string> seen;
  for (std::size_t p = 0; p < options_.size(); ++p) {
    const Option& o = options_[p];
    if (o.label.empty()) throw ValidationError("option labels must be non-empty");
    if (!seen.insert(o.label).second)
      throw ValidationError("duplicate option label '" + o.label + "'");
    if (o.abstain) {
      if (abstain_)
        throw ValidationError("at most one option may be the abstention column");
      abstain_ = p;
    }
  }
}

OptionSet OptionSet::from_labels(const std::vector<std::string>& labels,
                                 const std::optional<std::string>& abstain_label) {
  std::vector<Option> opts;
  opts.reserve(labels.size());
  for (const auto& l : labels)
    opts.push_back({l, abstain_label && l == *abstain_label});
  OptionSet set(std::move(opts));
  if (abstain_label && !set.abstain_index())
    throw UnknownOption(*abstain_label);
  return set;
}

std::vector<std::string> OptionSet::labels() const {
  std::vector<std::string> out;
  out.reserve(options_.size());
  for (const auto& o : options_) out.push_back(o.label);
  return out;
}

std::optional<std::size_t> OptionSet::index_of(const std::string& label) const {
  for (std::size_t p = 0; p < options_.size(); ++p)
    if (options_[p].label == label) return p;
  return std::nullopt;
}

std::string Bracket::label() const {
  if (!hi) return std::to_string(lo) + "+";
  return std::to_string(lo) + "-" + std::to_string(*hi);
}

BracketPartition::BracketPartition(std::vector<Bracket> brackets)
    : brackets_(std::move(brackets)) {
  if (brackets_.empty())
    throw ValidationError("a partition needs at least one bracket");
  if (brackets_.front().lo != 18)
    throw ValidationError("the first bracket must start at age 18");
  for (std::size_t g = 0; g < brackets_.size(); ++g) {
    const Bracket& b = brackets_[g];
    const bool last = g + 1 == brackets_.size();
    if (!b.hi && !last)
      throw ValidationError("only the final bracket may be open-ended");
    if (b.hi && *b.hi < b.lo)
      throw ValidationError("bracket '" + b.label() + "' has hi < lo");
    if (!last && brackets_[g + 1].lo != *b.hi + 1)
      throw ValidationError("brackets must be contiguous: '" + b.label() +
                            "' is followed by '" + brackets_[g + 1].label() + "'");
  }
}

BracketPartition BracketPartition::parse(const std::string& text) {
  std::vector<Bracket> brackets;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string part = text.substr(pos, comma - pos);
    if (part.empty())
      throw ValidationError("empty bracket in partition spec '" + text + "'");
    try {
      if (part.back() == '+') {
        brackets.push_back({std::stoi(part.substr(0, part.size() - 1)), std::nullopt});
      } else {
        const std::size_t dash = part.find('-');
        if (dash == std::string::npos)
          throw ValidationError("bracket '" + part + "' is not lo-hi or lo+");
        brackets.push_back({std::stoi(part.substr(0, dash)),
                            std::stoi(part.substr(dash + 1))});
      }
    } catch (const std::invalid_argument&) {
      throw ValidationError("bracket '" + part + "' is not numeric");
    } catch (const std::out_of_range&) {
      throw ValidationError("bracket '" + part + "' is out of range");
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return BracketPartition(std::move(brackets));
}

BracketPartition BracketPartition::uniform(int width, int open_from) {
  if (width < 1) throw ValidationError("bracket width must be >= 1");
  std::vector<Bracket> brackets;
  int lo = 18;
  while (lo + width - 1 < open_from) {
    brackets.push_back({lo, lo + width - 1});
    lo += width;
  }
  brackets.push_back({lo, std::nullopt});
  return BracketPartition(std::move(brackets));
}

std::optional<std::size_t> BracketPartition::bracket_of(int age) const {
  if (age < 18) return std::nullopt;
  for (std::size_t g = 0; g < brackets_.size(); ++g) {
    const Bracket& b = brackets_[g];
    if (age >= b.lo && (!b.hi || age <= *b.hi)) return g;
  }
  return std::nullopt;
}

std::vector<std::string> BracketPartition::labels() const {
  std::vector<std::string> out;
  out.reserve(brackets_.size());
  for (const auto& b : brackets_) out.push_back(b.label());
  return out;
}

double BracketPartition::midpoint(std::size_t g) const {
  const Bracket& b = brackets_[g];
  if (b.hi) return 0.5 * (b.lo + *b.hi);
  double width = 5.0;
  if (brackets_.size() >= 2) {
    const Bracket& prev = brackets_[brackets_.size() - 2];
    width = static_cast<double>(*prev.hi - prev.lo + 1);
  }
  return b.lo + 0.5 * (width - 1.0);
}

std::int64_t PrecinctRecord::roll() const {
  return std::accumulate(row_marginals.begin(), row_marginals.end(),
                         std::int64_t{0});
}

std::int64_t PrecinctRecord::votes_total() const {
  return std::accumulate(col_marginals.begin(), col_marginals.end(),
                         std::int64_t{0});
}

CellProbabilityMatrix::CellProbabilityMatrix(std::vector<std::string> row_labels,
                                             std::vector<std::string> col_labels,
                                             std::vector<double> values)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      values_(std::move(values)) {
  const std::size_t r = row_labels_.size();
  const std::size_t c = col_labels_.size();
  if (values_.size() != r * c)
    throw DimensionMismatch("probability matrix has " +
                            std::to_string(values_.size()) + " entries, expected " +
                            std::to_string(r * c));
  for (std::size_t g = 0; g < r; ++g) {
    double row_sum = 0.0;
    for (std::size_t p = 0; p < c; ++p) {
      const double v = values_[g * c + p];
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("probability out of [0,1] in row '" +
                              row_labels_[g] + "'");
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTolerance)
      throw ValidationError("row '" + row_labels_[g] + "' sums to " +
                            std::to_string(row_sum) + ", expected 1");
  }
}

std::vector<double> CellProbabilityMatrix::row(std::size_t g) const {
  return {values_.begin() + static_cast<std::ptrdiff_t>(g * cols()),
          values_.begin() + static_cast<std::ptrdiff_t>((g + 1) * cols())};
}

}  // namespace ei
