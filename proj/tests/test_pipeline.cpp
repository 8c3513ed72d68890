#include "doctest.h"

#include <sstream>

#include "pcarf/errors.hpp"
#include "pcarf/pipeline.hpp"
#include "test_support.hpp"

using namespace pcarf;

namespace {

PipelineModel forest_pipeline(const LabeledDataset& ds, bool with_pca) {
  PipelineModel m;
  LabeledDataset train = ds;
  if (with_pca) {
    m.pca = fit_pca(ds.features, FixedComponents{2}, true);
    train.features = transform(*m.pca, ds.features);
    train.feature_names = {"pc1", "pc2"};
  }
  ForestParams params;
  params.n_trees = 5;
  m.classifier = fit_forest(train, params, 3);
  return m;
}

}  // namespace

TEST_CASE("scores follow the classifier") {
  const auto ds = testing::two_gaussians(80, 4, 3.0, 5);
  const auto plain = forest_pipeline(ds, false);
  CHECK(plain.input_dimension() == 4);
  CHECK(score_rows(plain, ds.features) == predict_scores(std::get<ForestModel>(plain.classifier), ds.features));

  const auto projected = forest_pipeline(ds, true);
  CHECK(projected.input_dimension() == 4);
  CHECK(score_rows(projected, ds.features) ==
        predict_scores(std::get<ForestModel>(projected.classifier), transform(*projected.pca, ds.features)));
  CHECK_THROWS_AS(score_rows(plain, Matrix(1, 3)), std::invalid_argument);

  // Network scores are P(label 1); with label 0 positive they flip.
  PipelineModel net{std::nullopt, init_mlp(std::vector<std::size_t>{4, 3, 1}, 2), 1};
  const auto p1 = score_rows(net, ds.features);
  net.positive_label = 0;
  const auto p0 = score_rows(net, ds.features);
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p0[i] == 1.0 - p1[i]);
}

TEST_CASE("threshold_scores") {
  const std::vector<double> s{0.0, 0.49, 0.5, 1.0};
  CHECK(threshold_scores(s, 1) == std::vector<int>{0, 0, 1, 1});
  CHECK(threshold_scores(s, 0) == std::vector<int>{1, 1, 0, 0});
}

TEST_CASE("pipeline files round trip") {
  const auto ds = testing::two_gaussians(60, 4, 3.0, 8);
  std::vector<PipelineModel> models{forest_pipeline(ds, false), forest_pipeline(ds, true)};
  auto net = init_mlp(std::vector<std::size_t>{2, 4, 1}, 1);
  net.input_mean = {0.5, -0.5};
  net.input_scale = {2.0, 3.0};
  models.push_back({fit_pca(ds.features, FixedComponents{2}, false), net, 0});

  for (const auto& model : models) {
    std::stringstream buffer;
    write_pipeline(buffer, model);
    const auto back = read_pipeline(buffer);
    CHECK(back.positive_label == model.positive_label);
    CHECK(back.pca.has_value() == model.pca.has_value());
    CHECK(score_rows(back, ds.features) == score_rows(model, ds.features));
    std::stringstream again;
    write_pipeline(again, back);
    std::stringstream first;
    write_pipeline(first, model);
    CHECK(again.str() == first.str());
  }

  const auto path = std::filesystem::temp_directory_path() / "pcarf_test_pipeline.model";
  save_pipeline(path, models[1]);
  CHECK(score_rows(load_pipeline(path), ds.features) == score_rows(models[1], ds.features));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_pipeline(path), DataError);
}

TEST_CASE("malformed pipeline files") {
  const auto ds = testing::two_gaussians(40, 4, 3.0, 9);
  std::stringstream good;
  write_pipeline(good, forest_pipeline(ds, true));
  const std::string text = good.str();

  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  for (const std::string& bad :
       {std::string(), std::string("other 1\n"), replaced("pcarf-model 1", "pcarf-model 2"),
        replaced("positive_label 1", "positive_label 3"), replaced("preprocess pca", "preprocess ica"),
        replaced("classifier forest", "classifier svm"), text + "extra\n", text.substr(0, text.size() / 2)}) {
    std::stringstream in(bad);
    CHECK_THROWS_AS(read_pipeline(in), DataError);
  }

  // PCA output width must match the classifier input.
  PipelineModel mismatch{fit_pca(ds.features, FixedComponents{3}, true),
                         init_mlp(std::vector<std::size_t>{2, 1}, 0), 1};
  std::stringstream buffer;
  write_pipeline(buffer, mismatch);
  CHECK_THROWS_AS(read_pipeline(buffer), DataError);
}
