#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ramanwt {

// Shortest decimal form that parses back to exactly the same double.
// One fixed formatter everywhere keeps identical runs byte-identical.
std::string fmt_num(double v);
std::string fmt_int(std::int64_t v);

// Minimal CSV: comma separator, newline rows, no quoting. Field values in
// this project never contain commas or newlines.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return buf_; }
  void to_file(const std::string& path) const;

 private:
  std::string buf_;
  std::size_t columns_;
};

std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace ramanwt
