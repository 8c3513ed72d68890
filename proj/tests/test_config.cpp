#include "doctest.h"

#include <string>

#include "pcarf/config.hpp"
#include "pcarf/errors.hpp"

using namespace pcarf;

namespace {

// Line number carried by the ConfigError thrown from building `text`.
std::string error_of(const std::string& text) {
  try {
    build_config(IniFile::parse(text), "/base");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("ini parsing") {
  const auto ini = IniFile::parse(
      "# comment\n"
      "[data]\n"
      "path = x.csv   \n"
      "; other comment\n"
      "\n"
      "[ forest ]\n"
      "n_trees=7\n");
  REQUIRE(ini.entries().size() == 2);
  CHECK(ini.entries().at("data.path").value == "x.csv");
  CHECK(ini.entries().at("data.path").line == 3);
  CHECK(ini.entries().at("forest.n_trees").value == "7");
  CHECK(ini.entries().at("forest.n_trees").line == 7);

  CHECK_THROWS_WITH_AS(IniFile::parse("[data\n"), "line 1: unterminated section header", ConfigError);
  CHECK_THROWS_WITH_AS(IniFile::parse("[data]\npath\n"), "line 2: expected 'key = value'", ConfigError);
  CHECK_THROWS_WITH_AS(IniFile::parse("path = x\n"), "line 1: key 'path' outside a section", ConfigError);
  CHECK_THROWS_WITH_AS(IniFile::parse("[a]\nb=1\n\nb=2\n"), "line 4: duplicate key 'a.b'", ConfigError);
}

TEST_CASE("defaults and paths") {
  const auto cfg = build_config(IniFile::parse("[data]\npath = d/x.csv\n"), "/base");
  CHECK(cfg.dataset == "/base/d/x.csv");
  CHECK(cfg.csv.label_column == "class");
  CHECK(cfg.csv.drop_columns == std::vector<std::string>{"id"});
  CHECK(cfg.test_fraction == 0.3);
  CHECK(cfg.stratified);
  CHECK(cfg.pca_modes == std::vector<bool>{false, true});
  CHECK(std::get<VarianceThreshold>(cfg.pca_policy).fraction == 0.95);
  CHECK(cfg.forest.n_trees == 100);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
  CHECK(cfg.output_dir == "/base/out");

  const auto abs = build_config(IniFile::parse("[data]\npath = /x.csv\n[run]\noutput_dir = res\n"), "/base");
  CHECK(abs.dataset == "/x.csv");
  CHECK(abs.output_dir == "/base/res");
}

TEST_CASE("every key is applied") {
  const auto cfg = build_config(IniFile::parse(R"([data]
path = x.csv
label_column = status
drop_columns = name, id
skip_rows = 1
positive_label = 0
[split]
test_fraction = 0.25
stratified = no
[pca]
mode = on
components = 4
standardize = false
[models]
forest = yes
mlp = off
[forest]
n_trees = 9
features_per_split = 3
max_depth = unlimited
min_samples_split = 5
bootstrap = false
[mlp]
hidden = 16, 8
epochs = 12
learning_rate = 0.5
batch_size = 4
standardize = 0
[run]
seeds = 3..5
save_models = false
)"),
                                "/b");
  CHECK(cfg.csv.label_column == "status");
  CHECK(cfg.csv.drop_columns == std::vector<std::string>{"name", "id"});
  CHECK(cfg.csv.skip_rows == 1);
  CHECK(cfg.positive_label == 0);
  CHECK(cfg.forest.positive_label == 0);
  CHECK(cfg.test_fraction == 0.25);
  CHECK_FALSE(cfg.stratified);
  CHECK(cfg.pca_modes == std::vector<bool>{true});
  CHECK(std::get<FixedComponents>(cfg.pca_policy).k == 4);
  CHECK_FALSE(cfg.pca_standardize);
  CHECK(cfg.run_forest);
  CHECK_FALSE(cfg.run_mlp);
  CHECK(cfg.forest.n_trees == 9);
  CHECK(cfg.forest.features_per_split == 3);
  CHECK(cfg.forest.max_depth == kUnlimitedDepth);
  CHECK(cfg.forest.min_samples_split == 5);
  CHECK_FALSE(cfg.forest.bootstrap);
  CHECK(cfg.mlp_hidden == std::vector<std::size_t>{16, 8});
  CHECK(cfg.mlp.epochs == 12);
  CHECK(cfg.mlp.learning_rate == 0.5);
  CHECK(cfg.mlp.batch_size == 4);
  CHECK_FALSE(cfg.mlp.standardize);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5});
  CHECK_FALSE(cfg.save_models);
}

TEST_CASE("errors name the offending line") {
  CHECK(error_of("[data]\npath = x\n[forest]\nn_tree = 3\n") == "line 4: unknown key 'forest.n_tree'");
  CHECK(error_of("[data]\npath = x\n[forest]\nn_trees = many\n") ==
        "line 4: forest.n_trees: expected a non-negative integer, got 'many'");
  CHECK(error_of("[data]\npath = x\n[split]\ntest_fraction = 1.5\n") ==
        "line 4: split.test_fraction: test_fraction must lie in (0, 1)");
  CHECK(error_of("[data]\npath = x\n[pca]\nmode = maybe\n") == "line 4: pca.mode: mode must be off, on or both");
  CHECK(error_of("[data]\npath = x\n[run]\nseeds = 5..2\n") == "line 4: run.seeds: bad seed range '5..2'");
  CHECK(error_of("[data]\npath = x\n[pca]\ncomponents = 2\nvariance_threshold = 0.9\n").starts_with("line 4:"));
  CHECK(error_of("[data]\npath = x\n[models]\nforest = no\nmlp = no\n") == "no model selected under [models]");
  CHECK(error_of("[data]\nlabel_column = y\n") == "missing required key data.path");
  CHECK(error_of("[data]\npath = x\n[mlp]\nbatch_size = 0\n").starts_with("line 4:"));
  CHECK(error_of("[data]\npath = x\n[split]\nstratified = maybe\n").starts_with("line 4:"));
}

TEST_CASE("overrides") {
  auto ini = IniFile::parse("[data]\npath = x.csv\n[forest]\nn_trees = 5\n");
  ini.apply_override("forest.n_trees=11");
  ini.apply_override(" run.seeds = 1,2 ");
  const auto cfg = build_config(ini, "/b");
  CHECK(cfg.forest.n_trees == 11);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});

  CHECK_THROWS_AS(ini.apply_override("n_trees=3"), ConfigError);
  CHECK_THROWS_AS(ini.apply_override("forest.n_trees"), ConfigError);
  ini.apply_override("forest.bogus=1");
  CHECK_THROWS_WITH_AS(build_config(ini, "/b"), "unknown key 'forest.bogus'", ConfigError);
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("1..10").size() == 10);
  CHECK(parse_seed_list("7") == std::vector<std::uint64_t>{7});
  CHECK(parse_seed_list("3, 1,9") == std::vector<std::uint64_t>{3, 1, 9});
  for (const char* bad : {"", "a", "1..", "2..1", "1,x", "-1"}) CHECK_THROWS_AS(parse_seed_list(bad), ConfigError);
}

TEST_CASE("shipped configs are valid") {
  const std::filesystem::path dir = std::filesystem::path(PCARF_SOURCE_DIR) / "configs";
  std::size_t checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    const auto cfg = build_config(IniFile::load(entry.path()), dir);
    CHECK(cfg.dataset.filename() == "pd_speech_features.csv");
    CHECK(cfg.csv.skip_rows == 1);
    CHECK(cfg.seeds.size() == 10);
    CHECK(cfg.forest.n_trees == 100);
    ++checked;
  }
  CHECK(checked == 2);
}
