#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ei {

// Lowercase hex SHA-256 of a file / byte string. Throws IoFailure.
std::string sha256_file(const std::string& path);
std::string sha256_bytes(std::string_view bytes);

std::string iso8601_utc_now();

// Reproducibility record written next to every CLI run's outputs.  Two runs
// with the same command, inputs and seed produce identical input/output
// digests; only the timestamps differ.
struct RunManifest {
  std::string command;             // subcommand
  std::vector<std::string> argv;   // full invocation as typed
  std::string version;
  std::uint64_t seed = 0;
  nlohmann::json config;           // resolved settings
  std::vector<std::pair<std::string, std::string>> inputs;   // (path, sha256)
  std::vector<std::pair<std::string, std::string>> outputs;  // (path, sha256)
  std::string started_at;
  std::string finished_at;

  void add_input(const std::string& path);   // hashes now
  void add_output(const std::string& path);  // hashes now

  nlohmann::json to_json() const;
  // writes <out_dir>/manifest.json and returns its path
  std::string write(const std::string& out_dir) const;
};

}  // namespace ei
