#include "ei/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ei/errors.hpp"

namespace ei {

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.rfind("\xef\xbb\xbf", 0) == 0) text.erase(0, 3);  // UTF-8 BOM

  CsvTable table;
  table.path = path;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    // ignore blank lines (a single empty field)
    if (!(record.size() == 1 && record[0].empty())) {
      if (table.header.empty()) {
        table.header = std::move(record);
      } else {
        if (record.size() != table.header.size())
          throw ParseError(path, record_line,
                           "expected " + std::to_string(table.header.size()) +
                               " fields, found " + std::to_string(record.size()));
        table.rows.push_back(std::move(record));
        table.row_lines.push_back(record_line);
      }
    }
    record.clear();
    record_line = line;
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char ch = text[k];
    if (in_quotes) {
      if (ch == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
    } else if (ch == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      ++line;
      end_record();
    } else {
      field += ch;
    }
  }
  if (in_quotes) throw ParseError(path, record_line, "unterminated quoted field");
  if (!field.empty() || record.size() > 0 || field_was_quoted) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    end_record();
  }
  if (table.header.empty()) throw ParseError(path, 1, "file has no header row");
  return table;
}

std::int64_t parse_int64_field(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& s = table.rows[row][col];
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(table.path, table.row_lines[row],
                     "'" + s + "' is not an integer (column " +
                         table.header[col] + ")");
  return value;
}

double parse_double_field(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& s = table.rows[row][col];
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(table.path, table.row_lines[row],
                     "'" + s + "' is not a number (column " + table.header[col] + ")");
  return value;
}

}  // namespace ei
