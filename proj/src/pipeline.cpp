#include "ramanwt/pipeline.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>

#include "ramanwt/csv.hpp"
#include "ramanwt/dcnn_classifier.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/parallel.hpp"
#include "ramanwt/serialize.hpp"

namespace ramanwt {

namespace {

std::string row_file(std::size_t i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu.%s", i, ext);
  return buf;
}

}  // namespace

std::vector<double> transform_scales(std::size_t signal_length, const TransformOptions& opt) {
  const double max_scale = opt.max_scale > 0.0 ? opt.max_scale : double(signal_length) / 4.0;
  return scales_grid(opt.min_scale, max_scale, opt.n_scales);
}

Image transform_spectrum(const Spectrum& s, const TransformOptions& opt, std::string* warning) {
  s.validate();
  CwtOptions copt;
  copt.center_frequency = opt.center_frequency;
  copt.threads = opt.threads;
  const Scalogram sg = cwt(s.intensities, transform_scales(s.size(), opt), copt);
  RenderOptions ropt;
  ropt.side = opt.image_side;
  ropt.log_compress = opt.log_compress;
  return render_scalogram(sg, ropt, warning);
}

TransformedSet transform_dataset(const Dataset& ds, const TransformOptions& opt,
                                 std::vector<std::string>* warnings) {
  if (ds.samples.empty()) raise(Errc::EmptyInput, "dataset holds no samples");
  TransformedSet set;
  set.class_names = ds.class_names;
  set.images.resize(ds.samples.size());
  set.labels.resize(ds.samples.size());
  set.ids.resize(ds.samples.size());
  std::vector<std::string> notes(ds.samples.size());

  TransformOptions inner = opt;
  inner.threads = 1;  // the loop below is already parallel over samples
  parallel_for(
      std::size_t(0), ds.samples.size(),
      [&](std::size_t i) {
        const DatasetSample& sample = ds.samples[i];
        std::string warning;
        set.images[i] = transform_spectrum(sample.spectrum, inner, &warning);
        set.labels[i] = sample.label_index;
        set.ids[i] = sample.origin_id + "#" + std::to_string(i);
        if (!warning.empty()) notes[i] = set.ids[i] + ": " + warning;
      },
      opt.threads);

  if (warnings)
    for (auto& note : notes)
      if (!note.empty()) warnings->push_back(std::move(note));
  return set;
}

void save_dataset(const std::string& dir, const Dataset& ds) {
  if (ds.samples.empty()) raise(Errc::EmptyInput, "dataset holds no samples");
  std::filesystem::create_directories(dir + "/spectra");
  CsvWriter csv({"file", "origin", "label", "class", "split", "scenario", "snr_db"});
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const DatasetSample& s = ds.samples[i];
    const std::string file = row_file(i, "txt");
    write_file(dir + "/spectra/" + file, serialize_rruff(s.spectrum));
    csv.row({file, s.origin_id, fmt_int(std::int64_t(s.label_index)),
             ds.class_names[s.label_index], std::string(to_string(s.split)),
             std::string(to_string(s.scenario)), fmt_num(s.snr_db)});
  }
  csv.to_file(dir + "/index.csv");
}

Dataset load_dataset(const std::string& dir) {
  const auto rows = parse_csv(read_file(dir + "/index.csv"));
  if (rows.size() < 2) raise(Errc::SchemaError, "dataset index is empty");
  Dataset ds;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 7)
      raise(Errc::SchemaError, "dataset index row has the wrong column count",
            std::int64_t(r));
    DatasetSample s;
    s.spectrum = parse_rruff_file(dir + "/spectra/" + row[0]);
    s.origin_id = row[1];
    s.label_index = std::size_t(std::stoull(row[2]));
    s.split = split_from_string(row[4]);
    s.scenario = scenario_from_string(row[5]);
    s.snr_db = std::strtod(row[6].c_str(), nullptr);
    if (s.label_index >= ds.class_names.size()) ds.class_names.resize(s.label_index + 1);
    ds.class_names[s.label_index] = row[3];
    ds.samples.push_back(std::move(s));
  }
  for (std::size_t c = 0; c < ds.class_names.size(); ++c)
    if (ds.class_names[c].empty())
      raise(Errc::SchemaError, "dataset index never names class " + std::to_string(c));
  return ds;
}

void save_images(const std::string& dir, const TransformedSet& set) {
  if (set.images.empty()) raise(Errc::EmptyInput, "no images to save");
  std::filesystem::create_directories(dir + "/images");
  CsvWriter csv({"file", "id", "label", "class"});
  for (std::size_t i = 0; i < set.images.size(); ++i) {
    const std::string file = row_file(i, "png");
    write_png(dir + "/images/" + file, set.images[i]);
    csv.row({file, set.ids[i], fmt_int(std::int64_t(set.labels[i])),
             set.class_names[set.labels[i]]});
  }
  csv.to_file(dir + "/index.csv");
}

TransformedSet load_images(const std::string& dir) {
  const auto rows = parse_csv(read_file(dir + "/index.csv"));
  if (rows.size() < 2) raise(Errc::SchemaError, "image index is empty");
  TransformedSet set;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 4)
      raise(Errc::SchemaError, "image index row has the wrong column count", std::int64_t(r));
    set.images.push_back(read_png(dir + "/images/" + row[0]));
    set.ids.push_back(row[1]);
    const auto label = std::size_t(std::stoull(row[2]));
    set.labels.push_back(label);
    if (label >= set.class_names.size()) set.class_names.resize(label + 1);
    set.class_names[label] = row[3];
  }
  for (std::size_t c = 0; c < set.class_names.size(); ++c)
    if (set.class_names[c].empty())
      raise(Errc::SchemaError, "image index never names class " + std::to_string(c));
  return set;
}

FeatureMatrix features_of(const TransformedSet& set, std::size_t side) {
  if (set.images.empty()) raise(Errc::EmptyInput, "no images to featurize");
  FeatureMatrix m;
  m.rows = set.images.size();
  m.cols = side * side;
  m.values.resize(m.rows * m.cols);
  m.labels = set.labels;
  parallel_for(std::size_t(0), set.images.size(), [&](std::size_t i) {
    const auto f = image_features(set.images[i], side);
    std::copy(f.begin(), f.end(), m.values.begin() + std::ptrdiff_t(i * m.cols));
  });
  return m;
}

SweepModel load_sweep_model(const std::string& name, const std::string& path) {
  const std::string head = read_file(path).substr(0, 4);
  SweepModel out;
  out.name = name;
  if (head == "RWML") {
    std::shared_ptr<MlModel> model = load_model(path);
    out.predict = [model](const std::vector<Image>& images) {
      TransformedSet set;
      set.images = images;
      set.labels.assign(images.size(), 0);
      const FeatureMatrix features = features_of(set);
      return model->predict_all(features);
    };
    return out;
  }
  if (head == "RWDC") {
    auto model = std::make_shared<DcnnClassifier>(DcnnClassifier::load(path));
    out.predict = [model](const std::vector<Image>& images) {
      const std::size_t side = model->config().input_side;
      std::vector<Image> sized = images;
      for (auto& img : sized)
        if (img.width != side || img.height != side) img = resize_bilinear(img, side, side);
      return model->predict_all(sized);
    };
    return out;
  }
  raise(Errc::IoError, "'" + path + "' is not a saved model");
}

SweepSetGenerator make_sweep_generator(const DatasetManifest& manifest, const BuildOptions& base,
                                       const TransformOptions& topt) {
  manifest.validate();
  return [manifest, base, topt](double snr_db) {
    BuildOptions opts = base;
    opts.snr_db = snr_db;
    opts.seed = derive_seed(base.seed, std::bit_cast<std::uint64_t>(snr_db));
    const Dataset ds = build_dataset(manifest, Split::Test, opts);
    TransformedSet set = transform_dataset(ds, topt);
    return std::pair<std::vector<Image>, std::vector<std::size_t>>(std::move(set.images),
                                                                   std::move(set.labels));
  };
}

}  // namespace ramanwt
