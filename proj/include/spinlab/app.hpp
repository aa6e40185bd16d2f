#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace spinlab::app {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

/// Everything a command produces; files are written by the caller.
struct Output {
  std::string csv;
  Json report;
  int exit_code = 0;
};

/// Default configuration of "simulate_cm", "simulate_rs", "soliton" or "verify".
Json defaults(const std::string& command);

/// defaults <- file config <- command-line overrides; unknown keys are rejected.
Json resolve(const std::string& command, const Json& file_config, const Json& overrides);

Json load_json_file(const std::string& path);

Output simulate_cm(const Json& cfg);
Output simulate_rs(const Json& cfg);
Output soliton(const Json& cfg);
Output verify(const std::string& suite, const Json& cfg);

const std::vector<std::string>& suite_names();

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

/// Deterministic per-trial seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// '.' decimal, 17 significant digits.
std::string format_number(double v);

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  const std::string& str() const { return buf_; }

private:
  size_t width_;
  std::string buf_;
};

}  // namespace spinlab::app
