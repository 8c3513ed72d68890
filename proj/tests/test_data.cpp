#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "pcarf/data.hpp"
#include "pcarf/errors.hpp"
#include "test_support.hpp"

using namespace pcarf;

namespace {

LabeledDataset with_class_counts(std::size_t zeros, std::size_t ones) {
  LabeledDataset ds;
  const std::size_t n = zeros + ones;
  std::vector<double> values(n);
  std::iota(values.begin(), values.end(), 0.0);
  ds.features = Matrix(n, 1, std::move(values));
  for (std::size_t i = 0; i < n; ++i) ds.labels.push_back(i % 4 == 0 && zeros > 0 ? 0 : 1);
  // Rebalance to the exact requested counts.
  std::size_t z = ds.count(0);
  for (std::size_t i = 0; i < n && z < zeros; ++i)
    if (ds.labels[i] == 1) {
      ds.labels[i] = 0;
      ++z;
    }
  for (std::size_t i = 0; i < n && z > zeros; ++i)
    if (ds.labels[i] == 0) {
      ds.labels[i] = 1;
      --z;
    }
  ds.feature_names = {"x"};
  return ds;
}

}  // namespace

TEST_CASE("parse_csv basics") {
  const auto ds = parse_csv("id,a,b,class\n7,1.5,2,0\n8,-3,4e2,1\n9,0,0,0\n");
  CHECK(ds.labels == std::vector<int>{0, 1, 0});
  CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(ds.features == Matrix{{1.5, 2}, {-3, 400}, {0, 0}});
}

TEST_CASE("parse_csv tolerates CRLF, BOM, blank lines and the label in any position") {
  const auto ds = parse_csv("\xEF\xBB\xBFstatus,x\r\n1,0.5\r\n\r\n0,1.5\r\n", {"status", {}});
  CHECK(ds.labels == std::vector<int>{1, 0});
  CHECK(ds.features == Matrix{{0.5}, {1.5}});
}

TEST_CASE("parse_csv skips leading rows before the header") {
  CsvOptions opts;
  opts.skip_rows = 1;
  const auto ds = parse_csv(",Baseline Features,,\nid,a,b,class\n0,1,2,1\n1,3,4,0\n", opts);
  CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(ds.labels == std::vector<int>{1, 0});
  try {
    parse_csv("group\nid,a,class\n1,x,0\n", opts);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_csv errors name the line and column") {
  auto message = [](const std::string& text) {
    try {
      parse_csv(text);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("id,a,class\n1,abc,0\n").find("line 2, column 'a'") != std::string::npos);
  CHECK(message("id,a,class\n1,2,0\n2,,1\n").find("line 3, column 'a': empty cell") != std::string::npos);
  CHECK(message("id,a,class\n1,nan,0\n").find("non-finite") != std::string::npos);
  CHECK(message("id,a,class\n1,2,2\n").find("not 0 or 1") != std::string::npos);
  CHECK(message("id,a,label\n1,2,0\n").find("label column 'class'") != std::string::npos);
  CHECK(message("id,a,class\n1,2\n").find("2 fields") != std::string::npos);
  CHECK(message("").find("missing header") != std::string::npos);
  CHECK(message("id,a,class\n").find("no data rows") != std::string::npos);
}

TEST_CASE("load_csv reads from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "pcarf_test_data";
  std::filesystem::create_directories(dir);
  const auto path = dir / "tiny.csv";
  std::ofstream(path) << "id,f,class\n0,1,0\n1,2,1\n2,3,0\n";
  const auto ds = load_csv(path);
  CHECK(ds.labels == std::vector<int>{0, 1, 0});
  CHECK_THROWS_AS(load_csv(dir / "missing.csv"), DataError);
}

TEST_CASE("stratified split of the 756-sample class layout yields 227 test rows") {
  // 192 / 564 is the class balance of the UCI speech table.
  const auto ds = with_class_counts(192, 564);
  const auto split = stratified_split(ds, {0.3, 1, true});
  CHECK(split.test.size() == 227);
  CHECK(split.train.size() == 529);
  CHECK(split.test.count(0) == 58);
  CHECK(split.test.count(1) == 169);
}

TEST_CASE("stratified split invariants over random inputs") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t zeros = 1 + rng.below(60);
    const std::size_t ones = 1 + rng.below(60);
    const double fraction = 0.1 + 0.8 * rng.uniform();
    const auto ds = with_class_counts(zeros, ones);
    Split split;
    try {
      split = stratified_split(ds, {fraction, rng(), true});
    } catch (const std::invalid_argument&) {
      continue;  // fraction rounds one side to nothing on tiny inputs
    }
    std::vector<std::size_t> all = split.train_rows;
    all.insert(all.end(), split.test_rows.begin(), split.test_rows.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(ds.size());
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    CHECK(all == expected);
    for (int label : {0, 1}) {
      const double want = static_cast<double>(ds.count(label)) * fraction;
      CHECK(std::abs(static_cast<double>(split.test.count(label)) - want) <= 1.0);
    }
    CHECK(std::is_sorted(split.test_rows.begin(), split.test_rows.end()));
    // Rows travel with their labels.
    for (std::size_t i = 0; i < split.test_rows.size(); ++i) {
      CHECK(split.test.labels[i] == ds.labels[split.test_rows[i]]);
      CHECK(split.test.features(i, 0) == ds.features(split.test_rows[i], 0));
    }
  }
}

TEST_CASE("split is a pure function of (dataset, fraction, seed)") {
  const auto ds = testing::two_gaussians(120, 3, 1.0, 4);
  const auto a = stratified_split(ds, {0.25, 9, true});
  const auto b = stratified_split(ds, {0.25, 9, true});
  const auto c = stratified_split(ds, {0.25, 10, true});
  CHECK(a.test_rows == b.test_rows);
  CHECK(a.test_rows != c.test_rows);
  // Frozen from an independent implementation of the documented shuffle:
  // class 0 rows {0,1,4,8} then class 1 rows {2,3,5,6,7,9}, one Rng(3).
  const auto tiny = stratified_split(with_class_counts(4, 6), {0.5, 3, true});
  CHECK(tiny.test_rows == std::vector<std::size_t>{0, 2, 7, 8, 9});
}

TEST_CASE("class prevalence 25/75 is preserved") {
  const auto ds = with_class_counts(50, 150);
  const auto split = stratified_split(ds, {0.3, 5, true});
  CHECK(split.test.count(0) == 15);
  CHECK(split.test.count(1) == 45);
}

TEST_CASE("unstratified split and degenerate fractions") {
  const auto ds = with_class_counts(5, 5);
  CHECK(stratified_split(ds, {0.3, 1, false}).test.size() == 3);
  CHECK_THROWS_AS(stratified_split(ds, {0.01, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split(ds, {0.99, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split(ds, {0.0, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split(ds, {1.0, 1, true}), std::invalid_argument);
}
