#include "ramanwt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ramanwt/csv.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/serialize.hpp"
#include "ramanwt/svg.hpp"

namespace ramanwt {

EvalReport evaluate(const std::vector<std::size_t>& actual,
                    const std::vector<std::size_t>& predicted,
                    const std::vector<std::string>& class_names) {
  if (actual.empty()) raise(Errc::EmptyInput, "nothing to evaluate");
  if (actual.size() != predicted.size())
    raise(Errc::ShapeMismatch, "actual and predicted label counts differ");
  const std::size_t k = class_names.size();
  if (k < 2) raise(Errc::InvalidArgument, "need at least two classes");

  EvalReport report;
  report.class_names = class_names;
  report.confusion.assign(k * k, 0);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] >= k || predicted[i] >= k)
      raise(Errc::LabelOutOfRange, "label exceeds the class count", std::int64_t(i));
    ++report.confusion[actual[i] * k + predicted[i]];
  }

  std::size_t trace = 0;
  report.per_class.resize(k);
  double macro_p = 0.0, macro_r = 0.0, macro_f = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t tp = report.at(c, c);
    trace += tp;
    std::size_t row_total = 0, col_total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row_total += report.at(c, j);
      col_total += report.at(j, c);
    }
    ClassMetrics& m = report.per_class[c];
    if (col_total == 0) {
      m.precision_undefined = true;
    } else {
      m.precision = double(tp) / double(col_total);
    }
    if (row_total == 0) {
      m.recall_undefined = true;
    } else {
      m.recall = double(tp) / double(row_total);
    }
    if (m.precision + m.recall == 0.0) {
      m.f1_undefined = true;
    } else {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    macro_p += m.precision;
    macro_r += m.recall;
    macro_f += m.f1;
  }
  report.accuracy = double(trace) / double(actual.size());
  report.macro_precision = macro_p / double(k);
  report.macro_recall = macro_r / double(k);
  report.macro_f1 = macro_f / double(k);
  return report;
}

void write_confusion_csv(const std::string& path, const EvalReport& report) {
  std::vector<std::string> header{"actual"};
  for (const auto& name : report.class_names) header.push_back(name);
  CsvWriter csv(header);
  for (std::size_t c = 0; c < report.class_names.size(); ++c) {
    std::vector<std::string> row{report.class_names[c]};
    for (std::size_t j = 0; j < report.class_names.size(); ++j)
      row.push_back(fmt_int(std::int64_t(report.at(c, j))));
    csv.row(row);
  }
  csv.to_file(path);
}

void write_metrics_csv(const std::string& path, const EvalReport& report) {
  CsvWriter csv({"class", "precision", "recall", "f1", "flags"});
  for (std::size_t c = 0; c < report.class_names.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    std::string flags;
    if (m.precision_undefined) flags += "precision_undefined;";
    if (m.recall_undefined) flags += "recall_undefined;";
    if (m.f1_undefined) flags += "f1_undefined;";
    csv.row({report.class_names[c], fmt_num(m.precision), fmt_num(m.recall), fmt_num(m.f1),
             flags});
  }
  csv.row({"macro", fmt_num(report.macro_precision), fmt_num(report.macro_recall),
           fmt_num(report.macro_f1), ""});
  csv.row({"accuracy", fmt_num(report.accuracy), "", "", ""});
  csv.to_file(path);
}

std::string svg_confusion(const EvalReport& report) {
  const std::size_t k = report.class_names.size();
  const double cell = 56.0, left = 120.0, top = 70.0;
  const double width = left + cell * double(k) + 30.0;
  const double height = top + cell * double(k) + 50.0;
  SvgBuilder svg(width, height);
  svg.rect(0, 0, width, height, "#ffffff");
  svg.text(left + cell * double(k) / 2.0, 24, "predicted", 13, "middle");
  svg.text(16, top + cell * double(k) / 2.0, "actual", 13, "start");

  std::size_t top_count = 1;
  for (auto v : report.confusion) top_count = std::max(top_count, v);
  for (std::size_t r = 0; r < k; ++r) {
    svg.text(left - 8, top + cell * (double(r) + 0.62), report.class_names[r], 11, "end");
    svg.text(left + cell * (double(r) + 0.5), top - 10, report.class_names[r], 11, "middle");
    for (std::size_t c = 0; c < k; ++c) {
      const double strength = double(report.at(r, c)) / double(top_count);
      const int blue = 255 - int(std::lround(strength * 160.0));
      const int other = 255 - int(std::lround(strength * 210.0));
      char color[8];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", other, other, blue);
      svg.rect(left + cell * double(c), top + cell * double(r), cell, cell, color, "#888", 0.5);
      svg.text(left + cell * (double(c) + 0.5), top + cell * (double(r) + 0.58),
               std::to_string(report.at(r, c)), 13, "middle",
               strength > 0.6 ? "#ffffff" : "#333");
    }
  }
  svg.text(left, height - 16,
           "accuracy " + fmt_num(std::round(report.accuracy * 1e4) / 1e4), 12);
  return svg.finish();
}

SweepResult snr_sweep(const std::vector<double>& snr_points, const SweepSetGenerator& generate,
                      const std::vector<SweepModel>& models) {
  if (snr_points.empty()) raise(Errc::EmptyInput, "no noise levels to sweep");
  if (models.empty()) raise(Errc::EmptyInput, "no models to sweep");
  SweepResult result;
  result.snr_db = snr_points;
  result.curves.resize(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) result.curves[m].name = models[m].name;

  for (double snr : snr_points) {
    const auto [images, labels] = generate(snr);
    if (images.empty() || images.size() != labels.size())
      raise(Errc::ShapeMismatch, "sweep set generator returned mismatched data");
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto predicted = models[m].predict(images);
      if (predicted.size() != labels.size())
        raise(Errc::ShapeMismatch, "model returned the wrong number of predictions");
      std::size_t hits = 0;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (predicted[i] == labels[i]) ++hits;
      result.curves[m].accuracy.push_back(double(hits) / double(labels.size()));
    }
  }
  return result;
}

std::optional<double> threshold_snr(const std::vector<double>& snr_db,
                                    const std::vector<double>& accuracy, double level) {
  if (snr_db.size() != accuracy.size() || snr_db.empty())
    raise(Errc::ShapeMismatch, "curve arrays must align");
  for (std::size_t i = 1; i < snr_db.size(); ++i)
    if (snr_db[i] <= snr_db[i - 1])
      raise(Errc::InvalidArgument, "noise levels must be strictly increasing");

  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    if (accuracy[i] < level) continue;
    if (i == 0) return snr_db[0];
    const double rise = accuracy[i] - accuracy[i - 1];
    if (rise <= 0.0) return snr_db[i];
    return snr_db[i - 1] + (level - accuracy[i - 1]) * (snr_db[i] - snr_db[i - 1]) / rise;
  }
  return std::nullopt;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::vector<std::string> header{"snr_db"};
  for (const auto& curve : result.curves) header.push_back(curve.name);
  CsvWriter csv(header);
  for (std::size_t i = 0; i < result.snr_db.size(); ++i) {
    std::vector<std::string> row{fmt_num(result.snr_db[i])};
    for (const auto& curve : result.curves) row.push_back(fmt_num(curve.accuracy[i]));
    csv.row(row);
  }
  csv.to_file(path);
}

std::string svg_sweep(const SweepResult& result, double level_marker) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b"};
  const double width = 640.0, height = 420.0;
  const double left = 64.0, right = width - 160.0, top = 30.0, bottom = height - 50.0;
  const double snr_lo = result.snr_db.front(), snr_hi = result.snr_db.back();
  const double span = snr_hi > snr_lo ? snr_hi - snr_lo : 1.0;
  auto xpos = [&](double snr) { return left + (snr - snr_lo) / span * (right - left); };
  auto ypos = [&](double acc) { return bottom - acc * (bottom - top); };

  SvgBuilder svg(width, height);
  svg.rect(0, 0, width, height, "#ffffff");
  for (int tick = 0; tick <= 10; ++tick) {
    const double acc = double(tick) / 10.0;
    svg.line(left, ypos(acc), right, ypos(acc), tick % 5 ? "#eeeeee" : "#cccccc");
    if (tick % 2 == 0) svg.text(left - 8, ypos(acc) + 4, fmt_num(acc), 11, "end");
  }
  for (double snr : result.snr_db) {
    svg.line(xpos(snr), bottom, xpos(snr), bottom + 4, "#666666");
    svg.text(xpos(snr), bottom + 18, fmt_num(snr), 11, "middle");
  }
  svg.line(left, bottom, right, bottom, "#333333");
  svg.line(left, top, left, bottom, "#333333");
  svg.text((left + right) / 2.0, height - 14, "SNR (dB)", 12, "middle");
  svg.text(16, (top + bottom) / 2.0, "accuracy", 12, "start");

  if (level_marker > 0.0) {
    svg.line(left, ypos(level_marker), right, ypos(level_marker), "#999999", 1.0);
    svg.text(right + 4, ypos(level_marker) + 4, fmt_num(level_marker), 10, "start", "#999999");
  }

  for (std::size_t m = 0; m < result.curves.size(); ++m) {
    const char* color = kPalette[m % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    for (std::size_t i = 0; i < result.snr_db.size(); ++i)
      points += SvgBuilder::point_list_entry(xpos(result.snr_db[i]),
                                             ypos(result.curves[m].accuracy[i]));
    svg.polyline(points, color, 2.0);
    for (std::size_t i = 0; i < result.snr_db.size(); ++i)
      svg.circle(xpos(result.snr_db[i]), ypos(result.curves[m].accuracy[i]), 2.5, color);
    const double ly = top + 18.0 * double(m);
    svg.line(right + 10, ly, right + 34, ly, color, 2.0);
    svg.text(right + 40, ly + 4, result.curves[m].name, 11, "start");
  }
  return svg.finish();
}

}  // namespace ramanwt
