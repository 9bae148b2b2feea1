#include "ramanwt/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "ramanwt/error.hpp"
#include "ramanwt/serialize.hpp"

namespace ramanwt {

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string fmt_int(std::int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
  return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    raise(Errc::InvalidArgument, "csv row has " + std::to_string(fields.size()) +
                                     " fields, expected " + std::to_string(columns_));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += fields[i];
  }
  buf_ += '\n';
}

void CsvWriter::to_file(const std::string& path) const { write_file(path, buf_); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : text) {
    if (ch == '\r') continue;
    if (ch == '\n') {
      fields.push_back(cur);
      rows.push_back(fields);
      fields.clear();
      cur.clear();
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty() || !fields.empty()) {
    fields.push_back(cur);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace ramanwt
