#include "ramanwt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "ramanwt/csv.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/serialize.hpp"

namespace ramanwt {

double Spectrum::peak_intensity() const {
  return *std::max_element(intensities.begin(), intensities.end());
}

void Spectrum::validate() const {
  if (wavenumbers.size() != intensities.size())
    raise(Errc::ShapeMismatch, "wavenumber/intensity length mismatch in " + source_id);
  if (wavenumbers.size() < kMinSpectrumPoints)
    raise(Errc::TooShort, "spectrum has " + std::to_string(wavenumbers.size()) +
                              " points, need at least " + std::to_string(kMinSpectrumPoints));
  for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
    if (!std::isfinite(wavenumbers[i]) || !std::isfinite(intensities[i]))
      raise(Errc::NonFinite, "non-finite value at point " + std::to_string(i), std::int64_t(i));
    if (i > 0 && wavenumbers[i] <= wavenumbers[i - 1])
      raise(Errc::MalformedLine, "wavenumbers not strictly ascending at point " + std::to_string(i),
            std::int64_t(i));
  }
}

namespace {

bool parse_two_numbers(const std::string& line, double* x, double* y) {
  std::string s = line;
  std::replace(s.begin(), s.end(), ',', ' ');
  const char* p = s.c_str();
  char* end = nullptr;
  *x = std::strtod(p, &end);
  if (end == p) return false;
  p = end;
  *y = std::strtod(p, &end);
  if (end == p) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

}  // namespace

Spectrum parse_rruff(const std::string& text, std::vector<std::string>* warnings) {
  Spectrum out;
  struct Row {
    double x, y;
    std::size_t order;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line.compare(first, 2, "##") == 0) {
      const auto eq = line.find('=', first);
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(first + 2, eq - first - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "NAMES" && out.label.empty()) out.label = value;
      if (key == "RRUFFID" || key == "ID") out.source_id = value;
      continue;
    }
    double x = 0, y = 0;
    if (!parse_two_numbers(line, &x, &y))
      raise(Errc::MalformedLine, "cannot parse data row: '" + line + "'", std::int64_t(line_no));
    if (!std::isfinite(x) || !std::isfinite(y))
      raise(Errc::NonFinite, "non-finite value on line " + std::to_string(line_no),
            std::int64_t(line_no));
    rows.push_back({x, y, rows.size()});
  }
  if (rows.size() < kMinSpectrumPoints)
    raise(Errc::TooShort, "only " + std::to_string(rows.size()) + " data rows, need at least " +
                              std::to_string(kMinSpectrumPoints));

  // stable order: ascending wavenumber, ties keep file order so that the
  // keep-first duplicate rule below applies to the earliest row
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.x != b.x ? a.x < b.x : a.order < b.order;
  });
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].x == out.wavenumbers.back()) {
      ++dropped;
      continue;
    }
    out.wavenumbers.push_back(rows[i].x);
    out.intensities.push_back(rows[i].y);
  }
  if (dropped && warnings)
    warnings->push_back("dropped " + std::to_string(dropped) +
                        " duplicated wavenumber row(s), kept first occurrence");
  out.validate();
  return out;
}

std::string serialize_rruff(const Spectrum& s) {
  std::string out;
  if (!s.label.empty()) out += "##NAMES=" + s.label + "\n";
  if (!s.source_id.empty()) out += "##ID=" + s.source_id + "\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += fmt_num(s.wavenumbers[i]) + ", " + fmt_num(s.intensities[i]) + "\n";
  out += "##END=\n";
  return out;
}

Spectrum parse_rruff_file(const std::string& path, std::vector<std::string>* warnings) {
  Spectrum s = parse_rruff(read_file(path), warnings);
  if (s.source_id.empty()) s.source_id = path;
  return s;
}

Spectrum synth_lorentzian(const std::vector<LorentzPeak>& peaks, const std::vector<double>& grid) {
  if (peaks.empty()) raise(Errc::InvalidPeak, "empty peak list");
  for (std::size_t k = 0; k < peaks.size(); ++k)
    if (!(peaks[k].width > 0) || !(peaks[k].height > 0))
      raise(Errc::InvalidPeak, "non-positive width or height in peak " + std::to_string(k),
            std::int64_t(k));
  if (grid.size() < kMinSpectrumPoints)
    raise(Errc::TooShort, "grid has fewer than " + std::to_string(kMinSpectrumPoints) + " points");

  Spectrum s;
  s.wavenumbers = grid;
  s.intensities.resize(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = 0.0;
    for (const auto& p : peaks) {
      const double d = grid[i] - p.center;
      v += p.height * p.width * p.width / (d * d + p.width * p.width);
    }
    s.intensities[i] = v;
  }
  s.source_id = "lorentzian";
  s = normalize(s);
  s.validate();
  return s;
}

Spectrum resample(const Spectrum& s, std::size_t n) {
  s.validate();
  if (n < kMinSpectrumPoints)
    raise(Errc::InvalidArgument, "resample target below " + std::to_string(kMinSpectrumPoints));
  Spectrum out;
  out.label = s.label;
  out.source_id = s.source_id;
  out.wavenumbers = linspace(s.wavenumbers.front(), s.wavenumbers.back(), n);
  out.intensities.resize(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = out.wavenumbers[i];
    while (seg + 2 < s.size() && s.wavenumbers[seg + 1] < x) ++seg;
    const double x0 = s.wavenumbers[seg], x1 = s.wavenumbers[seg + 1];
    const double t = (x - x0) / (x1 - x0);
    out.intensities[i] = s.intensities[seg] + t * (s.intensities[seg + 1] - s.intensities[seg]);
  }
  // endpoints exact
  out.intensities.front() = s.intensities.front();
  out.intensities.back() = s.intensities.back();
  return out;
}

Spectrum normalize(const Spectrum& s) {
  const auto [mn, mx] = std::minmax_element(s.intensities.begin(), s.intensities.end());
  Spectrum out = s;
  if (*mx == *mn) return out;
  const double span = *mx - *mn;
  for (auto& v : out.intensities) v = (v - *mn) / span;
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * (double(i) / double(n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

}  // namespace ramanwt
