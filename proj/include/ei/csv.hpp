#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ei {

struct CsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each row sized like header
  std::vector<std::size_t> row_lines;          // 1-based line of each row
};

// Strict RFC-4180-ish reader: quoted fields may contain commas, quotes and
// newlines; every record must match the header width.  Tolerates CRLF and a
// UTF-8 BOM.  Throws ParseError (with line number) or IoFailure.
CsvTable read_csv(const std::string& path);

// Field-level parsers used by the ingest layer; the whole field must consume.
std::int64_t parse_int64_field(const CsvTable& table, std::size_t row, std::size_t col);
double parse_double_field(const CsvTable& table, std::size_t row, std::size_t col);

}  // namespace ei
