#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace aqft {

/// Formats a double with 17 significant digits, enough to round-trip and
/// byte-stable for golden-file comparisons.
std::string csv_double(double v);

/// Minimal CSV emitter with a fixed header; fields are written verbatim.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace aqft
