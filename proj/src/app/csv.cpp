#include <cmath>
#include <cstdio>
#include <sstream>

#include "spinlab/app.hpp"
#include "spinlab/errors.hpp"

namespace spinlab::app {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("CsvWriter: row width does not match header");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_number(values[i]);
  }
  buf_ += '\n';
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  /// splitmix64 over the combined words
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ index);
}

}  // namespace spinlab::app
