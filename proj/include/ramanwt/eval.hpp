#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ramanwt/image.hpp"

namespace ramanwt {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the corresponding ratio was 0/0 and reported as zero.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct EvalReport {
  std::vector<std::string> class_names;
  // Row = actual class, column = predicted class.
  std::vector<std::size_t> confusion;
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;

  std::size_t at(std::size_t actual, std::size_t predicted) const {
    return confusion[actual * class_names.size() + predicted];
  }
};

EvalReport evaluate(const std::vector<std::size_t>& actual,
                    const std::vector<std::size_t>& predicted,
                    const std::vector<std::string>& class_names);

void write_confusion_csv(const std::string& path, const EvalReport& report);
void write_metrics_csv(const std::string& path, const EvalReport& report);
std::string svg_confusion(const EvalReport& report);

// ---- Accuracy as a function of noise level ----

// Produces one labeled test set for a noise level; every model in the sweep
// is scored on the same realization.
using SweepSetGenerator =
    std::function<std::pair<std::vector<Image>, std::vector<std::size_t>>(double snr_db)>;

struct SweepModel {
  std::string name;
  std::function<std::vector<std::size_t>(const std::vector<Image>&)> predict;
};

struct SweepCurve {
  std::string name;
  std::vector<double> accuracy;  // aligned with SweepResult::snr_db
};

struct SweepResult {
  std::vector<double> snr_db;
  std::vector<SweepCurve> curves;
};

SweepResult snr_sweep(const std::vector<double>& snr_points, const SweepSetGenerator& generate,
                      const std::vector<SweepModel>& models);

// Lowest noise level at which the curve first reaches `level`, linearly
// interpolated between the surrounding sweep points; empty when it never
// does.
std::optional<double> threshold_snr(const std::vector<double>& snr_db,
                                    const std::vector<double>& accuracy, double level);

void write_sweep_csv(const std::string& path, const SweepResult& result);
std::string svg_sweep(const SweepResult& result, double level_marker = 0.0);

}  // namespace ramanwt
