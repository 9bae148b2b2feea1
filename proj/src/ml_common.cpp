#include <cmath>
#include <cstring>

#include "ramanwt/error.hpp"
#include "ramanwt/ml.hpp"

namespace ramanwt {

namespace {

constexpr char kMagic[4] = {'R', 'W', 'M', 'L'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void FeatureMatrix::validate(std::size_t n_classes) const {
  if (rows == 0 || cols == 0) raise(Errc::EmptyInput, "feature matrix is empty");
  if (values.size() != rows * cols)
    raise(Errc::ShapeMismatch, "feature buffer does not match rows x cols");
  if (!labels.empty() && labels.size() != rows)
    raise(Errc::ShapeMismatch, "label count does not match row count");
  for (double v : values)
    if (!std::isfinite(v)) raise(Errc::NonFinite, "feature matrix contains a non-finite value");
  if (n_classes > 0)
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] >= n_classes)
        raise(Errc::LabelOutOfRange, "label exceeds the declared class count", std::int64_t(i));
}

std::size_t MlModel::predict(const std::vector<double>& x) const {
  const auto p = predict_proba(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c)
    if (p[c] > p[best]) best = c;
  return best;
}

std::vector<std::size_t> MlModel::predict_all(const FeatureMatrix& data) const {
  data.validate();
  if (data.cols != n_features_)
    raise(Errc::ShapeMismatch, "feature count differs from what the model was trained on");
  std::vector<std::size_t> out(data.rows);
  for (std::size_t i = 0; i < data.rows; ++i) out[i] = predict(data.row_vec(i));
  return out;
}

void MlModel::save(const std::string& path) const {
  BinWriter w;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.str(kind());
  w.u64(n_classes_);
  w.u64(n_features_);
  save_payload(w);
  w.to_file(path);
}

namespace detail {
std::unique_ptr<MlModel> nb_load(BinReader& r, std::size_t n_classes, std::size_t n_features);
std::unique_ptr<MlModel> knn_load(BinReader& r, std::size_t n_classes, std::size_t n_features);
std::unique_ptr<MlModel> rf_load(BinReader& r, std::size_t n_classes, std::size_t n_features);
std::unique_ptr<MlModel> svm_load(BinReader& r, std::size_t n_classes, std::size_t n_features);
}  // namespace detail

std::unique_ptr<MlModel> load_model(const std::string& path) {
  const std::string blob = read_file(path);
  BinReader r(blob);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    raise(Errc::IoError, "'" + path + "' is not a saved model");
  const auto version = r.u32();
  if (version != kVersion)
    raise(Errc::IoError, "unsupported model version " + std::to_string(version));
  const std::string kind = r.str();
  const std::size_t n_classes = r.u64();
  const std::size_t n_features = r.u64();
  if (kind == "nb") return detail::nb_load(r, n_classes, n_features);
  if (kind == "knn") return detail::knn_load(r, n_classes, n_features);
  if (kind == "rf") return detail::rf_load(r, n_classes, n_features);
  if (kind == "svm") return detail::svm_load(r, n_classes, n_features);
  raise(Errc::IoError, "unknown model kind '" + kind + "'");
}

}  // namespace ramanwt
