#include "pcarf/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pcarf/errors.hpp"
#include "pcarf/rng.hpp"

namespace pcarf {

std::size_t LabeledDataset::count(int label) const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
  if (labels.empty()) throw DataError("dataset has no samples");
  if (labels.size() != features.rows()) {
    throw DataError("dataset has " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(features.rows()) + " feature rows");
  }
  if (feature_names.size() != features.cols()) {
    throw DataError("dataset has " + std::to_string(feature_names.size()) + " names for " +
                    std::to_string(features.cols()) + " feature columns");
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 0 && labels[i] != 1) {
      throw DataError("label " + std::to_string(labels[i]) + " at sample " + std::to_string(i) +
                      " is not 0 or 1");
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.features = features.select_rows(rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels[r]);
  out.feature_names = feature_names;
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

LabeledDataset parse_csv(const std::string& text, const CsvOptions& options,
                         const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  // Skip a UTF-8 byte order mark, `skip_rows` lines and blank lines before
  // the header.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= options.skip_rows) continue;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line)) header.push_back(unquote(f));
    break;
  }
  if (header.empty()) throw DataError(source + ": missing header row");

  std::ptrdiff_t label_index = -1;
  std::vector<std::size_t> feature_index;
  LabeledDataset ds;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == options.label_column) {
      label_index = static_cast<std::ptrdiff_t>(c);
    } else if (std::find(options.drop_columns.begin(), options.drop_columns.end(), header[c]) ==
               options.drop_columns.end()) {
      feature_index.push_back(c);
      ds.feature_names.push_back(header[c]);
    }
  }
  if (label_index < 0) {
    throw DataError(source + ": label column '" + options.label_column + "' not in header");
  }

  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    auto parse = [&](std::size_t c) {
      const std::string_view cell = fields[c];
      const auto where = [&] {
        return source + ": line " + std::to_string(line_no) + ", column '" + header[c] + "'";
      };
      if (cell.empty()) throw DataError(where() + ": empty cell");
      double v = 0.0;
      const char* first = cell.data();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError(where() + ": cannot parse '" + std::string(cell) + "' as a number");
      }
      if (!std::isfinite(v)) throw DataError(where() + ": non-finite value '" + std::string(cell) + "'");
      return v;
    };
    for (std::size_t c : feature_index) values.push_back(parse(c));
    const double label = parse(static_cast<std::size_t>(label_index));
    if (label != 0.0 && label != 1.0) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": label '" +
                      std::string(fields[static_cast<std::size_t>(label_index)]) +
                      "' is not 0 or 1");
    }
    ds.labels.push_back(static_cast<int>(label));
  }
  if (ds.labels.empty()) throw DataError(source + ": no data rows");
  ds.features = Matrix(ds.labels.size(), feature_index.size(), std::move(values));
  ds.validate();
  return ds;
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_csv(buffer.str(), options, path.string());
}

Split stratified_split(const LabeledDataset& ds, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw std::invalid_argument("stratified_split: test_fraction must lie in (0, 1)");
  }
  ds.validate();
  Rng rng(spec.seed);
  Split out;

  auto take = [&](std::vector<std::size_t> rows) {
    rng.shuffle(std::span<std::size_t>(rows));
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(rows.size()) * spec.test_fraction));
    out.test_rows.insert(out.test_rows.end(), rows.begin(), rows.begin() + n_test);
    out.train_rows.insert(out.train_rows.end(), rows.begin() + n_test, rows.end());
  };

  if (spec.stratified) {
    for (int label : {0, 1}) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.labels[i] == label) rows.push_back(i);
      take(std::move(rows));
    }
  } else {
    std::vector<std::size_t> rows(ds.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    take(std::move(rows));
  }

  if (out.test_rows.empty()) {
    throw std::invalid_argument("stratified_split: test_fraction leaves the test set empty");
  }
  if (out.train_rows.empty()) {
    throw std::invalid_argument("stratified_split: test_fraction leaves the train set empty");
  }
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.test_rows.begin(), out.test_rows.end());
  out.train = ds.subset(out.train_rows);
  out.test = ds.subset(out.test_rows);
  return out;
}

}  // namespace pcarf
