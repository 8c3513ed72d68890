#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pcarf/matrix.hpp"

namespace pcarf {

struct LabeledDataset {
  Matrix features;                     // n x p
  std::vector<int> labels;             // n entries in {0, 1}
  std::vector<std::string> feature_names;  // p entries

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dimension() const noexcept { return features.cols(); }
  std::size_t count(int label) const noexcept;

  // Throws DataError when the invariants above are broken.
  void validate() const;
  LabeledDataset subset(std::span<const std::size_t> rows) const;
};

struct CsvOptions {
  std::string label_column = "class";
  std::vector<std::string> drop_columns = {"id"};
  // Lines discarded before the header, e.g. a row of column-group titles.
  std::size_t skip_rows = 0;
};

// Header row, comma separated, '.' decimals. Every retained column must parse
// as a finite number; the label column must hold 0 or 1. Errors are
// DataError and name the file line and column.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
LabeledDataset parse_csv(const std::string& text, const CsvOptions& options = {},
                         const std::string& source = "<memory>");

struct SplitSpec {
  double test_fraction = 0.3;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending
};

// Seeded train/test partition. Stratified: each class is shuffled on its
// own (class 0 first, one Rng stream) and round(count * fraction) of it goes
// to test. Throws std::invalid_argument when the fraction is outside (0, 1)
// or either side would be empty.
Split stratified_split(const LabeledDataset& ds, const SplitSpec& spec);

}  // namespace pcarf
