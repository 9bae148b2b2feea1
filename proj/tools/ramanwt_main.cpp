#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "ramanwt/csv.hpp"
#include "ramanwt/dcnn_classifier.hpp"
#include "ramanwt/pipeline.hpp"
#include "ramanwt/serialize.hpp"

namespace rw = ramanwt;

namespace {

// While a stage writes into an output directory, a marker file flags the run
// as unfinished; it disappears only after everything landed.
class IncompleteMarker {
 public:
  explicit IncompleteMarker(const std::string& dir) : path_(dir + "/_INCOMPLETE") {
    std::filesystem::create_directories(dir);
    rw::write_file(path_, "stage still running or aborted\n");
  }
  void done() {
    std::filesystem::remove(path_);
    path_.clear();
  }
  ~IncompleteMarker() = default;

 private:
  std::string path_;
};

rw::Scenario scenario_arg(const std::string& s) { return rw::scenario_from_string(s); }

void add_bbn_options(CLI::App* cmd, rw::BbnConfig& bbn) {
  cmd->add_option("--bbn-min-components", bbn.min_components,
                  "fewest background sinusoids per spectrum");
  cmd->add_option("--bbn-max-components", bbn.max_components,
                  "most background sinusoids per spectrum");
  cmd->add_option("--bbn-min-amplitude", bbn.min_rel_amplitude,
                  "lower amplitude bound, relative to the signal peak");
  cmd->add_option("--bbn-max-amplitude", bbn.max_rel_amplitude,
                  "upper amplitude bound, relative to the signal peak");
  cmd->add_option("--bbn-min-wavelength", bbn.min_rel_wavelength,
                  "lower wavelength bound, relative to the axis span");
  cmd->add_option("--bbn-max-wavelength", bbn.max_rel_wavelength,
                  "upper wavelength bound, relative to the axis span");
}

void add_transform_options(CLI::App* cmd, rw::TransformOptions& topt) {
  cmd->add_option("--scales", topt.n_scales, "number of wavelet scales");
  cmd->add_option("--min-scale", topt.min_scale, "smallest scale, in samples");
  cmd->add_option("--max-scale", topt.max_scale,
                  "largest scale, in samples (0 = quarter of the signal length)");
  cmd->add_option("--center-frequency", topt.center_frequency, "wavelet center frequency");
  cmd->add_option("--side,--image-side", topt.image_side, "rendered image side length");
  cmd->add_flag_callback("--no-log", [&topt] { topt.log_compress = false; },
                         "skip log compression of the magnitudes");
  cmd->add_option("--threads", topt.threads, "worker threads (0 = all cores)");
}

int run(int argc, char** argv) {
  CLI::App app{"Raman spectrum toolkit: noisy synthesis, wavelet scalograms, classification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file; flags given on the command line win");

  // ---- import ----
  auto* import_cmd = app.add_subcommand("import", "create or validate a dataset manifest");
  import_cmd->configurable();
  int demo_variants = 0;
  std::string import_manifest, import_out = "manifest.json";
  import_cmd->add_option("--demo", demo_variants,
                         "write the bundled synthetic manifest with this many variants per class");
  import_cmd->add_option("--manifest", import_manifest, "existing manifest to validate");
  import_cmd->add_option("-o,--out", import_out, "where to write the manifest");

  // ---- synth ----
  auto* synth_cmd = app.add_subcommand("synth", "expand a manifest split into noisy spectra");
  synth_cmd->configurable();
  std::string synth_manifest, synth_out = "dataset";
  std::string synth_split = "train", synth_scenario = "gb", synth_base_dir;
  rw::BuildOptions build;
  synth_cmd->add_option("--manifest", synth_manifest, "dataset manifest")->required();
  synth_cmd->add_option("-o,--out", synth_out, "output directory");
  synth_cmd->add_option("--split", synth_split, "train or test");
  synth_cmd->add_option("--scenario", synth_scenario, "clean, gn, bb or gb");
  synth_cmd->add_option("--snr", build.snr_db, "white-noise SNR target in dB");
  double synth_snr_min = 0.0, synth_snr_max = 0.0;
  auto* snr_min_opt = synth_cmd->add_option("--snr-min", synth_snr_min,
                                            "draw each sample's SNR from [min, max] instead");
  auto* snr_max_opt = synth_cmd->add_option("--snr-max", synth_snr_max,
                                            "upper end of the per-sample SNR range");
  snr_min_opt->needs(snr_max_opt);
  snr_max_opt->needs(snr_min_opt);
  synth_cmd->add_option("--grid", build.grid_length, "resampling grid length");
  synth_cmd->add_option("--seed", build.seed, "master seed");
  synth_cmd->add_option("--realizations", build.realizations, "noisy copies per manifest entry");
  synth_cmd->add_option("--per-class", build.per_class_totals,
                        "per-class realization totals, one count per class in order");
  synth_cmd->add_option("--base-dir", synth_base_dir, "directory file sources are relative to");
  add_bbn_options(synth_cmd, build.bbn);

  // ---- transform ----
  auto* transform_cmd =
      app.add_subcommand("transform", "render a spectra dataset to scalogram images");
  transform_cmd->configurable();
  std::string transform_in, transform_out = "images";
  rw::TransformOptions topt;
  transform_cmd->add_option("-i,--in", transform_in, "dataset directory")->required();
  transform_cmd->add_option("-o,--out", transform_out, "output directory");
  add_transform_options(transform_cmd, topt);

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "fit a classifier on an image dataset");
  train_cmd->configurable();
  std::string train_in, train_model = "dcnn", train_out = "model.bin";
  rw::KnnParams knn_params;
  rw::NbParams nb_params;
  rw::RfParams rf_params;
  rw::SvmParams svm_params;
  std::string svm_kernel = "rbf";
  rw::dcnn::DcnnConfig dcfg;
  rw::dcnn::TrainerOptions dtrain;
  std::string dcnn_skip = "add";
  std::size_t feature_side = 32;
  std::uint64_t train_seed = 0;
  bool train_quiet = false;
  train_cmd->add_option("-i,--in", train_in, "image dataset directory")->required();
  train_cmd->add_option("-m,--model,--classifier", train_model, "nb, knn, rf, svm or dcnn");
  train_cmd->add_option("-o,--out", train_out, "model file to write");
  train_cmd->add_option("--seed", train_seed, "master seed");
  train_cmd->add_option("--feature-side", feature_side,
                        "grayscale grid side for the classical models");
  train_cmd->add_flag("--quiet", train_quiet, "suppress per-epoch progress");
  train_cmd->add_option("--k", knn_params.k, "neighbor count");
  train_cmd->add_option("--variance-floor", nb_params.variance_floor_rel,
                        "relative variance floor");
  train_cmd->add_option("--trees", rf_params.n_trees, "trees in the forest");
  train_cmd->add_option("--depth", rf_params.max_depth, "maximum tree depth");
  train_cmd->add_option("--mtry", rf_params.mtry, "features tried per split (0 = sqrt)");
  train_cmd->add_flag_callback("--no-bootstrap", [&rf_params] { rf_params.bootstrap = false; },
                               "grow every tree on the full training set");
  train_cmd->add_option("--kernel", svm_kernel, "linear or rbf");
  train_cmd->add_option("--c", svm_params.c, "box constraint");
  train_cmd->add_option("--gamma", svm_params.gamma, "rbf width (0 = 1/features)");
  train_cmd->add_option("--tolerance", svm_params.tol, "optimizer tolerance");
  train_cmd->add_option("--input-side", dcfg.input_side, "network input side length");
  train_cmd->add_option("--channels", dcfg.channels, "convolution channels");
  train_cmd->add_option("--fc1", dcfg.fc1, "first dense layer width");
  train_cmd->add_option("--fc2", dcfg.fc2, "second dense layer width");
  train_cmd->add_option("--skip", dcnn_skip, "skip connection: add, concat or none");
  train_cmd->add_flag_callback("--no-bn-affine", [&dcfg] { dcfg.bn_affine = false; },
                               "freeze normalization scale and shift");
  train_cmd->add_option("--epochs", dtrain.epochs, "training epochs");
  train_cmd->add_option("--batch", dtrain.batch_size, "minibatch size");
  train_cmd->add_option("--lr", dtrain.lr, "learning rate");
  train_cmd->add_option("--momentum", dtrain.momentum, "SGD momentum");
  train_cmd->add_option("--lr-drop-epoch", dtrain.lr_drop_epoch,
                        "epoch from which the rate is cut (0 = never)");
  train_cmd->add_option("--lr-drop-factor", dtrain.lr_drop_factor, "rate cut factor");
  train_cmd->add_flag("--adam", dtrain.adam, "use Adam instead of momentum SGD");
  train_cmd->add_option("--val-fraction", dtrain.val_fraction, "held-out validation share");
  train_cmd->add_option("--early-stop-acc", dtrain.early_stop_train_acc,
                        "stop once training accuracy reaches this");

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "score a model on an image dataset");
  eval_cmd->configurable();
  std::string eval_model, eval_in, eval_out;
  std::size_t eval_feature_side = 32;
  eval_cmd->add_option("-m,--model", eval_model, "saved model file")->required();
  eval_cmd->add_option("-i,--in", eval_in, "image dataset directory")->required();
  eval_cmd->add_option("-o,--out", eval_out, "report directory (optional)");
  eval_cmd->add_option("--feature-side", eval_feature_side,
                       "grayscale grid side for the classical models");

  // ---- sweep ----
  auto* sweep_cmd =
      app.add_subcommand("sweep", "accuracy versus noise level for one or more models");
  sweep_cmd->configurable();
  std::string sweep_manifest, sweep_out = "sweep";
  std::vector<std::string> sweep_models;
  double snr_min = -2.0, snr_max = 10.0, snr_step = 2.0, threshold_level = 0.9;
  std::string sweep_scenario = "gb", sweep_base_dir;
  rw::BuildOptions sweep_build;
  rw::TransformOptions sweep_topt;
  sweep_cmd->add_option("--manifest", sweep_manifest, "dataset manifest")->required();
  sweep_cmd
      ->add_option("--model", sweep_models,
                   "name=path of a saved model; repeat for several curves")
      ->required();
  sweep_cmd->add_option("-o,--out", sweep_out, "output directory");
  sweep_cmd->add_option("--snr-min", snr_min, "lowest SNR in dB, inclusive");
  sweep_cmd->add_option("--snr-max", snr_max, "highest SNR in dB, inclusive");
  sweep_cmd->add_option("--snr-step", snr_step, "SNR spacing in dB");
  sweep_cmd->add_option("--scenario", sweep_scenario, "clean, gn, bb or gb");
  sweep_cmd->add_option("--grid", sweep_build.grid_length, "resampling grid length");
  sweep_cmd->add_option("--seed", sweep_build.seed, "master seed");
  sweep_cmd->add_option("--realizations", sweep_build.realizations,
                        "noisy copies per manifest entry and level");
  sweep_cmd->add_option("--per-class", sweep_build.per_class_totals,
                        "per-class realization totals, one count per class in order");
  sweep_cmd->add_option("--base-dir", sweep_base_dir, "directory file sources are relative to");
  sweep_cmd->add_option("--threshold-level", threshold_level,
                        "accuracy level reported in thresholds.csv");
  add_bbn_options(sweep_cmd, sweep_build.bbn);
  add_transform_options(sweep_cmd, sweep_topt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (import_cmd->parsed()) {
    rw::DatasetManifest manifest;
    if (demo_variants > 0) {
      manifest = rw::demo_manifest(demo_variants);
    } else if (!import_manifest.empty()) {
      manifest = rw::load_manifest(import_manifest);
    } else {
      throw CLI::ValidationError("import", "pass --demo N or --manifest FILE");
    }
    rw::save_manifest(manifest, import_out);
    std::cout << "wrote " << import_out << ": " << manifest.class_names.size() << " classes, "
              << manifest.entries.size() << " entries\n";
    return 0;
  }

  if (synth_cmd->parsed()) {
    build.scenario = scenario_arg(synth_scenario);
    build.base_dir = synth_base_dir;
    if (snr_min_opt->count()) build.snr_range = {{synth_snr_min, synth_snr_max}};
    const rw::Split split = rw::split_from_string(synth_split);
    const auto manifest = rw::load_manifest(synth_manifest);
    IncompleteMarker marker(synth_out);
    const rw::Dataset ds = rw::build_dataset(manifest, split, build);
    rw::save_dataset(synth_out, ds);
    rw::write_file(synth_out + "/config.ini", app.config_to_str(true, false));
    marker.done();
    std::cout << "wrote " << synth_out << ": " << ds.samples.size() << " spectra\n";
    return 0;
  }

  if (transform_cmd->parsed()) {
    const rw::Dataset ds = rw::load_dataset(transform_in);
    IncompleteMarker marker(transform_out);
    std::vector<std::string> warnings;
    const rw::TransformedSet set = rw::transform_dataset(ds, topt, &warnings);
    rw::save_images(transform_out, set);
    rw::write_file(transform_out + "/config.ini", app.config_to_str(true, false));
    marker.done();
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << transform_out << ": " << set.images.size() << " images\n";
    return 0;
  }

  if (train_cmd->parsed()) {
    const rw::TransformedSet set = rw::load_images(train_in);
    const std::size_t n_classes = set.class_names.size();
    bool diverged = false;
    nlohmann::json resolved;
    resolved["model"] = train_model;
    resolved["classes"] = set.class_names;
    resolved["samples"] = set.images.size();
    resolved["seed"] = train_seed;

    if (train_model == "dcnn") {
      dcfg.n_classes = n_classes;
      dcfg.skip = rw::dcnn::skip_mode_from_string(dcnn_skip);
      dtrain.seed = train_seed;
      std::vector<rw::Image> sized = set.images;
      for (auto& img : sized)
        if (img.width != dcfg.input_side || img.height != dcfg.input_side)
          img = rw::resize_bilinear(img, dcfg.input_side, dcfg.input_side);
      auto progress = [&](const rw::dcnn::EpochStats& e) {
        if (train_quiet) return;
        std::printf("epoch %3zu  lr %.4f  loss %.4f  train %.4f  val %s\n", e.epoch, e.lr,
                    e.loss, e.train_acc,
                    std::isnan(e.val_acc) ? "-" : rw::fmt_num(e.val_acc).c_str());
        std::fflush(stdout);
      };
      auto out = rw::dcnn_train(sized, set.labels, dcfg, dtrain, progress);
      for (const auto& w : out.stats.warnings) std::cerr << "warning: " << w << "\n";
      out.model.save(train_out);
      resolved["config"] = nlohmann::json::parse(dcfg.to_json());
      resolved["epochs_run"] = out.stats.history.size();
      resolved["final_train_acc"] = out.stats.final_train_acc;
      resolved["diverged"] = out.stats.diverged;
      diverged = out.stats.diverged;
    } else {
      const rw::FeatureMatrix features = rw::features_of(set, feature_side);
      resolved["feature_side"] = feature_side;
      std::unique_ptr<rw::MlModel> model;
      if (train_model == "nb") {
        model = rw::nb_fit(features, n_classes, nb_params);
      } else if (train_model == "knn") {
        model = rw::knn_fit(features, n_classes, knn_params);
      } else if (train_model == "rf") {
        rf_params.seed = train_seed;
        model = rw::rf_fit(features, n_classes, rf_params);
      } else if (train_model == "svm") {
        svm_params.kernel = svm_kernel == "linear" ? rw::Kernel::Linear : rw::Kernel::Rbf;
        svm_params.seed = train_seed;
        model = rw::svm_fit(features, n_classes, svm_params);
        if (!rw::svm_converged(*model))
          std::cerr << "warning: optimizer hit the sweep budget before meeting tolerance\n";
      } else {
        throw CLI::ValidationError("train", "unknown model '" + train_model + "'");
      }
      model->save(train_out);
    }
    rw::write_file(train_out + ".json", resolved.dump(2) + "\n");
    std::cout << "wrote " << train_out << "\n";
    if (diverged) {
      std::cerr << "error: training diverged; the saved model is the last finite epoch\n";
      return 3;
    }
    return 0;
  }

  if (eval_cmd->parsed()) {
    const rw::TransformedSet set = rw::load_images(eval_in);
    const std::string head = rw::read_file(eval_model).substr(0, 4);
    std::vector<std::size_t> predicted;
    if (head == "RWDC") {
      const auto model = rw::DcnnClassifier::load(eval_model);
      std::vector<rw::Image> sized = set.images;
      for (auto& img : sized)
        if (img.width != model.config().input_side || img.height != model.config().input_side)
          img = rw::resize_bilinear(img, model.config().input_side, model.config().input_side);
      predicted = model.predict_all(sized);
    } else {
      const auto model = rw::load_model(eval_model);
      predicted = model->predict_all(rw::features_of(set, eval_feature_side));
    }
    const rw::EvalReport report = rw::evaluate(set.labels, predicted, set.class_names);
    std::cout << "accuracy " << rw::fmt_num(report.accuracy) << "\n";
    for (std::size_t c = 0; c < report.class_names.size(); ++c) {
      const auto& m = report.per_class[c];
      std::cout << "  " << report.class_names[c] << ": precision " << rw::fmt_num(m.precision)
                << ", recall " << rw::fmt_num(m.recall) << ", f1 " << rw::fmt_num(m.f1) << "\n";
    }
    if (!eval_out.empty()) {
      IncompleteMarker marker(eval_out);
      rw::write_confusion_csv(eval_out + "/confusion.csv", report);
      rw::write_metrics_csv(eval_out + "/metrics.csv", report);
      rw::write_file(eval_out + "/confusion.svg", rw::svg_confusion(report));
      rw::write_file(eval_out + "/config.ini", app.config_to_str(true, false));
      marker.done();
      std::cout << "wrote " << eval_out << "\n";
    }
    return 0;
  }

  if (sweep_cmd->parsed()) {
    if (!(snr_step > 0.0)) throw CLI::ValidationError("sweep", "--snr-step must be positive");
    if (snr_max < snr_min)
      throw CLI::ValidationError("sweep", "--snr-max must not be below --snr-min");
    sweep_build.scenario = scenario_arg(sweep_scenario);
    sweep_build.base_dir = sweep_base_dir;
    std::vector<double> snrs;
    for (double snr = snr_min; snr <= snr_max + 1e-9; snr += snr_step) snrs.push_back(snr);

    std::vector<rw::SweepModel> models;
    for (const auto& spec : sweep_models) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
        throw CLI::ValidationError("sweep", "--model expects name=path, got '" + spec + "'");
      models.push_back(rw::load_sweep_model(spec.substr(0, eq), spec.substr(eq + 1)));
    }

    const auto manifest = rw::load_manifest(sweep_manifest);
    IncompleteMarker marker(sweep_out);
    const auto generator = rw::make_sweep_generator(manifest, sweep_build, sweep_topt);
    const rw::SweepResult result = rw::snr_sweep(snrs, generator, models);
    rw::write_sweep_csv(sweep_out + "/sweep.csv", result);
    rw::write_file(sweep_out + "/sweep.svg", rw::svg_sweep(result, threshold_level));
    rw::CsvWriter thresholds({"model", "level", "threshold_snr_db"});
    for (const auto& curve : result.curves) {
      const auto snr = rw::threshold_snr(result.snr_db, curve.accuracy, threshold_level);
      thresholds.row({curve.name, rw::fmt_num(threshold_level),
                      snr ? rw::fmt_num(*snr) : "unreached"});
    }
    thresholds.to_file(sweep_out + "/thresholds.csv");
    rw::write_file(sweep_out + "/config.ini", app.config_to_str(true, false));
    marker.done();
    for (const auto& curve : result.curves)
      std::cout << curve.name << ": accuracy " << rw::fmt_num(curve.accuracy.front()) << " at "
                << rw::fmt_num(result.snr_db.front()) << " dB up to "
                << rw::fmt_num(curve.accuracy.back()) << " at "
                << rw::fmt_num(result.snr_db.back()) << " dB\n";
    std::cout << "wrote " << sweep_out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const rw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
