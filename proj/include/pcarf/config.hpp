#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pcarf/data.hpp"
#include "pcarf/forest.hpp"
#include "pcarf/mlp.hpp"
#include "pcarf/pca.hpp"

namespace pcarf {

// Raw "[section]" / "key = value" text. Keys are stored as "section.key".
// '#' and ';' start comments on their own lines.
class IniFile {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;  // 0 for overrides
  };

  static IniFile parse(const std::string& text);
  static IniFile load(const std::filesystem::path& path);

  // "section.key=value"; throws ConfigError when malformed.
  void apply_override(const std::string& assignment);

  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

struct ExperimentConfig {
  std::filesystem::path dataset;
  CsvOptions csv;
  int positive_label = 1;

  double test_fraction = 0.3;
  bool stratified = true;

  // PCA variants to run; any of {false, true}.
  std::vector<bool> pca_modes = {false, true};
  ComponentPolicy pca_policy = VarianceThreshold{0.95};
  bool pca_standardize = true;

  bool run_forest = true;
  bool run_mlp = true;
  ForestParams forest;
  std::vector<std::size_t> mlp_hidden = {32};
  MlpTrainOptions mlp;

  std::vector<std::uint64_t> seeds = {1};
  std::filesystem::path output_dir = "out";
  bool save_models = true;
};

// Relative paths, including the default output directory, resolve against
// `base_dir`. Unknown keys and bad values
// throw ConfigError with the offending line.
ExperimentConfig build_config(const IniFile& ini, const std::filesystem::path& base_dir);

// "1..10", "3", or "1,4,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace pcarf
