#include "ei/ingest.hpp"

#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "ei/csv.hpp"
#include "ei/errors.hpp"
#include "ei/validate.hpp"

namespace ei {

namespace {

void expect_header(const CsvTable& table, const std::vector<std::string>& expected) {
  if (table.header != expected) {
    std::string want;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (k) want += ',';
      want += expected[k];
    }
    throw ParseError(table.path, 1, "header must be exactly '" + want + "'");
  }
}

}  // namespace

Dataset ingest_election(const std::string& results_path, const std::string& padron_path,
                        const BracketPartition& partition,
                        const std::string& abstain_label) {
  const CsvTable results = read_csv(results_path);
  expect_header(results, {"precinct_id", "series", "department", "option", "votes"});
  if (results.rows.empty()) throw ParseError(results_path, 1, "results file has no rows");

  struct Precinct {
    std::string series;
    std::string department;
    std::vector<std::int64_t> votes;
  };
  std::vector<std::string> precinct_order;
  std::unordered_map<std::string, Precinct> precincts;
  std::vector<std::string> option_labels;
  std::unordered_map<std::string, std::size_t> option_index;

  for (std::size_t r = 0; r < results.rows.size(); ++r) {
    const auto& row = results.rows[r];
    const std::string& id = row[0];
    const std::string& option = row[3];
    if (option == abstain_label)
      throw ParseError(results_path, results.row_lines[r],
                       "option '" + option +
                           "' collides with the derived abstention label");
    const std::int64_t votes = parse_int64_field(results, r, 4);
    if (votes < 0) throw NegativeCount(id, "option '" + option + "'", votes);

    auto [oit, new_option] = option_index.try_emplace(option, option_labels.size());
    if (new_option) option_labels.push_back(option);

    auto [pit, new_precinct] = precincts.try_emplace(id);
    if (new_precinct) {
      precinct_order.push_back(id);
      pit->second.series = row[1];
      pit->second.department = row[2];
    } else if (pit->second.series != row[1] || pit->second.department != row[2]) {
      throw ParseError(results_path, results.row_lines[r],
                       "precinct " + id + " changes series or department");
    }
    auto& votes_vec = pit->second.votes;
    if (votes_vec.size() <= oit->second) votes_vec.resize(option_labels.size(), 0);
    votes_vec[oit->second] += votes;
  }

  const CsvTable padron = read_csv(padron_path);
  expect_header(padron, {"precinct_id", "age", "electors"});
  std::vector<PadronRow> padron_rows;
  padron_rows.reserve(padron.rows.size());
  for (std::size_t r = 0; r < padron.rows.size(); ++r) {
    PadronRow pr;
    pr.precinct_id = padron.rows[r][0];
    const std::int64_t age = parse_int64_field(padron, r, 1);
    if (age < 0 || age > 150)
      throw ParseError(padron_path, padron.row_lines[r],
                       "implausible age " + std::to_string(age));
    pr.age = static_cast<int>(age);
    pr.electors = parse_int64_field(padron, r, 2);
    padron_rows.push_back(std::move(pr));
  }
  const std::map<std::string, std::vector<std::int64_t>> rolls =
      aggregate_padron(padron_rows, partition);

  for (const auto& [id, counts] : rolls)
    if (!precincts.count(id)) throw JoinFailure(id, "the results file");

  const std::size_t C = option_labels.size() + 1;  // + derived abstention
  std::vector<PrecinctRecord> records;
  records.reserve(precinct_order.size());
  for (const auto& id : precinct_order) {
    const auto rit = rolls.find(id);
    if (rit == rolls.end()) throw JoinFailure(id, "the padron file");
    auto& src = precincts.at(id);
    PrecinctRecord rec;
    rec.precinct_id = id;
    rec.series = std::move(src.series);
    rec.department = std::move(src.department);
    rec.row_marginals = rit->second;
    rec.col_marginals = std::move(src.votes);
    rec.col_marginals.resize(C, 0);
    const std::int64_t roll =
        std::accumulate(rec.row_marginals.begin(), rec.row_marginals.end(), std::int64_t{0});
    const std::int64_t cast =
        std::accumulate(rec.col_marginals.begin(), rec.col_marginals.end(), std::int64_t{0});
    if (cast > roll) throw MarginalMismatch(id, roll, cast);
    rec.col_marginals.back() = roll - cast;
    records.push_back(std::move(rec));
  }

  std::vector<Option> options;
  options.reserve(C);
  for (const auto& label : option_labels) options.push_back({label, false});
  options.push_back({abstain_label, true});

  Dataset dataset{OptionSet(std::move(options)), partition, std::move(records)};
  validate_dataset(dataset);
  return dataset;
}

void write_results_csv(const std::vector<PrecinctRecord>& records,
                       const OptionSet& options, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << "precinct_id,series,department,option,votes\n";
  for (const auto& rec : records) {
    for (std::size_t p = 0; p < options.size(); ++p) {
      if (options.option(p).abstain) continue;  // derived on the way back in
      out << rec.precinct_id << ',' << rec.series << ',' << rec.department << ','
          << options.option(p).label << ',' << rec.col_marginals[p] << '\n';
    }
  }
  if (!out.flush()) throw IoFailure("failed while writing " + path);
}

void write_padron_csv(const SyntheticTruth& truth, const BracketPartition& partition,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << "precinct_id,age,electors\n";
  for (std::size_t i = 0; i < truth.records.size(); ++i) {
    const auto& rec = truth.records[i];
    if (i < truth.age_counts.size() && !truth.age_counts[i].empty()) {
      for (const auto& [age, count] : truth.age_counts[i])
        out << rec.precinct_id << ',' << age << ',' << count << '\n';
    } else {
      for (std::size_t g = 0; g < rec.row_marginals.size(); ++g) {
        if (rec.row_marginals[g] == 0) continue;
        out << rec.precinct_id << ',' << partition.bracket(g).lo << ','
            << rec.row_marginals[g] << '\n';
      }
    }
  }
  if (!out.flush()) throw IoFailure("failed while writing " + path);
}

}  // namespace ei
