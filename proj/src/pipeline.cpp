#include "pcarf/pipeline.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "pcarf/errors.hpp"
#include "pcarf/text_io.hpp"

namespace pcarf {

namespace {
constexpr const char* kMagic = "pcarf-model";
constexpr int kVersion = 1;
}  // namespace

std::size_t PipelineModel::input_dimension() const {
  if (pca) return pca->input_dimension();
  if (const auto* f = std::get_if<ForestModel>(&classifier)) return f->n_features;
  return std::get<MlpModel>(classifier).input_size();
}

std::vector<double> score_rows(const PipelineModel& model, const Matrix& raw) {
  if (raw.cols() != model.input_dimension()) {
    throw std::invalid_argument("model expects " + std::to_string(model.input_dimension()) +
                                " features, data has " + std::to_string(raw.cols()));
  }
  const Matrix x = model.pca ? transform(*model.pca, raw) : raw;
  if (const auto* forest = std::get_if<ForestModel>(&model.classifier)) {
    return predict_scores(*forest, x);
  }
  auto scores = forward_batch(std::get<MlpModel>(model.classifier), x);
  if (model.positive_label == 0)
    for (auto& s : scores) s = 1.0 - s;
  return scores;
}

std::vector<int> threshold_scores(std::span<const double> scores, int positive_label) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = scores[i] >= 0.5 ? positive_label : 1 - positive_label;
  }
  return out;
}

void write_pipeline(std::ostream& out, const PipelineModel& model) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "positive_label " << model.positive_label << '\n';
  if (model.pca) {
    out << "preprocess pca\n";
    write_pca(out, *model.pca);
  } else {
    out << "preprocess none\n";
  }
  if (const auto* forest = std::get_if<ForestModel>(&model.classifier)) {
    out << "classifier forest\n";
    write_forest(out, *forest);
  } else {
    out << "classifier mlp\n";
    write_mlp(out, std::get<MlpModel>(model.classifier));
  }
}

PipelineModel read_pipeline(std::istream& in) {
  PipelineModel model;
  {
    TokenReader reader(in);
    reader.expect(kMagic);
    if (reader.next_int() != kVersion) throw DataError("model file: unsupported version");
    reader.expect("positive_label");
    model.positive_label = static_cast<int>(reader.next_int());
    if (model.positive_label != 0 && model.positive_label != 1) {
      throw DataError("model file: positive_label must be 0 or 1");
    }
    reader.expect("preprocess");
    const std::string kind = reader.next();
    if (kind == "pca") {
      model.pca = read_pca(in);
    } else if (kind != "none") {
      throw DataError("model file: unknown preprocess '" + kind + "'");
    }
  }
  TokenReader reader(in);
  reader.expect("classifier");
  const std::string kind = reader.next();
  if (kind == "forest") {
    model.classifier = read_forest(in);
  } else if (kind == "mlp") {
    model.classifier = read_mlp(in);
  } else {
    throw DataError("model file: unknown classifier '" + kind + "'");
  }
  if (model.pca) {
    const std::size_t k = model.pca->output_dimension();
    const std::size_t expected = std::holds_alternative<ForestModel>(model.classifier)
                                     ? std::get<ForestModel>(model.classifier).n_features
                                     : std::get<MlpModel>(model.classifier).input_size();
    if (k != expected) throw DataError("model file: PCA output does not match classifier input");
  }
  if (!TokenReader(in).at_end()) throw DataError("model file: trailing content");
  return model;
}

void save_pipeline(const std::filesystem::path& path, const PipelineModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_pipeline(out, model);
}

PipelineModel load_pipeline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_pipeline(in);
}

}  // namespace pcarf
