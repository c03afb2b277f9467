#include "ei/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "ei/csv.hpp"
#include "ei/errors.hpp"
#include "ei/report.hpp"
#include "ei/validate.hpp"

namespace ei {

namespace {

using nlohmann::json;

std::string bracket_grammar(const BracketPartition& partition) {
  std::string text;
  for (std::size_t g = 0; g < partition.size(); ++g) {
    if (g) text += ',';
    text += partition.bracket(g).label();
  }
  return text;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError(path, 1, "not valid JSON");
  return j;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << body;
  if (!out.flush()) throw IoFailure("failed while writing " + path);
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  json j;
  j["format"] = "ei-dataset/1";
  j["brackets"] = bracket_grammar(dataset.partition);
  json options = json::array();
  for (const auto& opt : dataset.options.options())
    options.push_back({{"label", opt.label}, {"abstain", opt.abstain}});
  j["options"] = std::move(options);
  json precincts = json::array();
  for (const auto& rec : dataset.records) {
    precincts.push_back({{"id", rec.precinct_id},
                         {"series", rec.series},
                         {"department", rec.department},
                         {"electors", rec.row_marginals},
                         {"votes", rec.col_marginals}});
  }
  j["precincts"] = std::move(precincts);
  write_text_file(path, j.dump(2) + "\n");
}

Dataset load_dataset(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object() || j.value("format", "") != "ei-dataset/1")
    throw ValidationError(path + " is not an ei-dataset/1 file");
  try {
    BracketPartition partition = BracketPartition::parse(j.at("brackets").get<std::string>());
    std::vector<Option> options;
    for (const auto& o : j.at("options"))
      options.push_back({o.at("label").get<std::string>(), o.at("abstain").get<bool>()});
    std::vector<PrecinctRecord> records;
    for (const auto& p : j.at("precincts")) {
      PrecinctRecord rec;
      rec.precinct_id = p.at("id").get<std::string>();
      rec.series = p.value("series", "");
      rec.department = p.value("department", "");
      rec.row_marginals = p.at("electors").get<std::vector<std::int64_t>>();
      rec.col_marginals = p.at("votes").get<std::vector<std::int64_t>>();
      records.push_back(std::move(rec));
    }
    Dataset dataset{OptionSet(std::move(options)), std::move(partition), std::move(records)};
    validate_dataset(dataset);
    return dataset;
  } catch (const json::exception& e) {
    throw ParseError(path, 1, std::string("malformed dataset: ") + e.what());
  }
}

std::map<std::string, std::int64_t> read_plebiscite_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header != std::vector<std::string>{"precinct_id", "si_votes"})
    throw ParseError(path, 1, "header must be exactly 'precinct_id,si_votes'");
  std::map<std::string, std::int64_t> si;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& id = table.rows[r][0];
    const std::int64_t votes = parse_int64_field(table, r, 1);
    if (!si.emplace(id, votes).second)
      throw ParseError(path, table.row_lines[r], "duplicate precinct " + id);
  }
  return si;
}

CellProbabilityMatrix read_beta_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() < 3 || table.header[0] != "bracket")
    throw ParseError(path, 1,
                     "header must be 'bracket,<option>,...' with at least two options");
  if (table.rows.empty()) throw ParseError(path, 1, "no bracket rows");
  std::vector<std::string> col_labels(table.header.begin() + 1, table.header.end());
  std::vector<std::string> row_labels;
  std::vector<double> values;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    row_labels.push_back(table.rows[r][0]);
    double sum = 0.0;
    const std::size_t base = values.size();
    for (std::size_t c = 1; c < table.header.size(); ++c) {
      const double v = parse_double_field(table, r, c);
      if (!(v >= 0.0 && v <= 1.0))
        throw ParseError(path, table.row_lines[r],
                         "cell probability " + table.rows[r][c] + " outside [0,1]");
      values.push_back(v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw ParseError(path, table.row_lines[r],
                       "row sums to " + format_double(sum) + ", expected 1");
    for (std::size_t k = base; k < values.size(); ++k) values[k] /= sum;
  }
  return CellProbabilityMatrix(std::move(row_labels), std::move(col_labels),
                               std::move(values));
}

void save_truth(const SyntheticTruth& truth, const std::vector<std::string>& row_labels,
                const std::vector<std::string>& col_labels, const std::string& path) {
  json j;
  j["format"] = "ei-truth/1";
  j["row_labels"] = row_labels;
  j["col_labels"] = col_labels;
  json beta = json::array();
  for (std::size_t g = 0; g < truth.beta_true.rows(); ++g)
    beta.push_back(truth.beta_true.row(g));
  j["beta_true"] = std::move(beta);
  json tables = json::array();
  for (std::size_t i = 0; i < truth.true_tables.size(); ++i)
    tables.push_back({{"id", truth.records[i].precinct_id},
                      {"cells", truth.true_tables[i]}});
  j["tables"] = std::move(tables);
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace ei
