#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ei {

// Base for every domain error. kind() is a stable machine-readable tag; the
// CLI serializes it into the error record it prints on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct MarginalMismatch : Error {
  MarginalMismatch(std::string precinct, std::int64_t electors, std::int64_t votes)
      : Error("MarginalMismatch",
              "precinct " + precinct + ": electors sum to " +
                  std::to_string(electors) + " but votes sum to " +
                  std::to_string(votes)),
        precinct_id(std::move(precinct)),
        elector_sum(electors),
        vote_sum(votes) {}
  std::string precinct_id;
  std::int64_t elector_sum;
  std::int64_t vote_sum;
};

struct NegativeCount : Error {
  NegativeCount(const std::string& precinct, const std::string& where,
                std::int64_t value)
      : Error("NegativeCount", "precinct " + precinct + ": negative count " +
                                   std::to_string(value) + " in " + where) {}
};

struct UnknownOption : Error {
  explicit UnknownOption(const std::string& label)
      : Error("UnknownOption", "option '" + label + "' is not in the option set") {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& message)
      : Error("DimensionMismatch", message) {}
};

struct AgeBelowMinimum : Error {
  AgeBelowMinimum(const std::string& precinct, int age)
      : Error("AgeBelowMinimum", "precinct " + precinct + ": age " +
                                     std::to_string(age) + " is below 18") {}
};

struct AgeNotCovered : Error {
  AgeNotCovered(const std::string& precinct, int age)
      : Error("AgeNotCovered", "precinct " + precinct + ": age " +
                                   std::to_string(age) +
                                   " falls outside the bracket partition") {}
};

struct EmptyBracket : Error {
  explicit EmptyBracket(const std::string& label)
      : Error("EmptyBracket",
              "bracket '" + label + "' is empty in every precinct") {}
};

struct RankDeficient : Error {
  RankDeficient(std::size_t rank, std::size_t needed)
      : Error("RankDeficient",
              "precinct compositions have rank " + std::to_string(rank) +
                  " but " + std::to_string(needed) +
                  " independent rows are required"),
        rank(rank),
        needed(needed) {}
  std::size_t rank;
  std::size_t needed;
};

struct NoFeasibleTable : Error {
  explicit NoFeasibleTable(const std::string& message)
      : Error("NoFeasibleTable", message) {}
};

struct TooLargeToEnumerate : Error {
  explicit TooLargeToEnumerate(std::int64_t total)
      : Error("TooLargeToEnumerate",
              "instance with " + std::to_string(total) +
                  " electors is too large for exact enumeration") {}
};

struct SplitTooSmall : Error {
  explicit SplitTooSmall(const std::string& message)
      : Error("SplitTooSmall", message) {}
};

struct NoPairedPrecincts : Error {
  NoPairedPrecincts() : Error("NoPairedPrecincts", "no precinct_id appears in both inputs") {}
};

struct RollDriftExceeded : Error {
  RollDriftExceeded(const std::string& precinct, double drift, double limit)
      : Error("RollDriftExceeded",
              "precinct " + precinct + ": roll drift " + std::to_string(drift) +
                  " exceeds limit " + std::to_string(limit)) {}
};

struct ParseError : Error {
  ParseError(const std::string& file, std::size_t line, const std::string& message)
      : Error("ParseError",
              file + ":" + std::to_string(line) + ": " + message),
        line(line) {}
  std::size_t line;
};

struct JoinFailure : Error {
  JoinFailure(const std::string& precinct, const std::string& missing_from)
      : Error("JoinFailure",
              "precinct " + precinct + " is missing from " + missing_from) {}
};

struct IoFailure : Error {
  explicit IoFailure(const std::string& message) : Error("IoFailure", message) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& message)
      : Error("ValidationError", message) {}
};

}  // namespace ei
