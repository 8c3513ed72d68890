#include "pcarf/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "pcarf/errors.hpp"

namespace pcarf {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

IniFile IniFile::parse(const std::string& text) {
  IniFile ini;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key", line_no);
    if (section.empty()) throw ConfigError("key '" + key + "' outside a section", line_no);
    const std::string full = section + "." + key;
    if (ini.entries_.count(full)) throw ConfigError("duplicate key '" + full + "'", line_no);
    ini.entries_[full] = {trim(line.substr(eq + 1)), line_no};
  }
  return ini;
}

IniFile IniFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void IniFile::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string key = trim(assignment.substr(0, eq));
  if (eq == std::string::npos || key.find('.') == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not section.key=value");
  }
  entries_[key] = {trim(assignment.substr(eq + 1)), 0};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    if (!parse_number(trim(text.substr(0, range)), lo) ||
        !parse_number(trim(text.substr(range + 2)), hi) || hi < lo || hi - lo >= 100000) {
      throw ConfigError("bad seed range '" + text + "'");
    }
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& item : split_list(text)) {
    std::uint64_t s = 0;
    if (!parse_number(item, s)) throw ConfigError("bad seed '" + item + "'");
    seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

ExperimentConfig build_config(const IniFile& ini, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::set<std::string> used;

  // Looks up a key and hands its value to `apply`; ConfigError thrown inside
  // gets the entry's line attached.
  auto with = [&](const std::string& key, const std::function<void(const std::string&)>& apply) {
    const auto it = ini.entries().find(key);
    if (it == ini.entries().end()) return;
    used.insert(key);
    try {
      apply(it->second.value);
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what(), it->second.line);
    }
  };
  auto boolean = [](const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError("expected a boolean, got '" + v + "'");
  };
  auto count = [](const std::string& v) {
    std::size_t out = 0;
    if (!parse_number(v, out)) throw ConfigError("expected a non-negative integer, got '" + v + "'");
    return out;
  };
  auto real = [](const std::string& v) {
    double out = 0.0;
    if (!parse_number(v, out)) throw ConfigError("expected a number, got '" + v + "'");
    return out;
  };
  auto label = [&](const std::string& v) {
    const auto l = count(v);
    if (l > 1) throw ConfigError("label must be 0 or 1");
    return static_cast<int>(l);
  };

  bool have_dataset = false;
  with("data.path", [&](const std::string& v) {
    cfg.dataset = std::filesystem::path(v).is_absolute() ? std::filesystem::path(v) : base_dir / v;
    have_dataset = true;
  });
  with("data.label_column", [&](const std::string& v) { cfg.csv.label_column = v; });
  with("data.drop_columns", [&](const std::string& v) { cfg.csv.drop_columns = split_list(v); });
  with("data.skip_rows", [&](const std::string& v) { cfg.csv.skip_rows = count(v); });
  with("data.positive_label", [&](const std::string& v) { cfg.positive_label = label(v); });

  with("split.test_fraction", [&](const std::string& v) {
    cfg.test_fraction = real(v);
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
      throw ConfigError("test_fraction must lie in (0, 1)");
    }
  });
  with("split.stratified", [&](const std::string& v) { cfg.stratified = boolean(v); });

  with("pca.mode", [&](const std::string& v) {
    if (v == "off") {
      cfg.pca_modes = {false};
    } else if (v == "on") {
      cfg.pca_modes = {true};
    } else if (v == "both") {
      cfg.pca_modes = {false, true};
    } else {
      throw ConfigError("mode must be off, on or both");
    }
  });
  with("pca.variance_threshold", [&](const std::string& v) {
    const double f = real(v);
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("variance_threshold must lie in (0, 1]");
    cfg.pca_policy = VarianceThreshold{f};
  });
  with("pca.components", [&](const std::string& v) {
    const auto k = count(v);
    if (k == 0) throw ConfigError("components must be >= 1");
    cfg.pca_policy = FixedComponents{k};
  });
  if (ini.entries().count("pca.variance_threshold") && ini.entries().count("pca.components")) {
    throw ConfigError("set either pca.components or pca.variance_threshold, not both",
                      ini.entries().at("pca.components").line);
  }
  with("pca.standardize", [&](const std::string& v) { cfg.pca_standardize = boolean(v); });

  with("models.forest", [&](const std::string& v) { cfg.run_forest = boolean(v); });
  with("models.mlp", [&](const std::string& v) { cfg.run_mlp = boolean(v); });

  with("forest.n_trees", [&](const std::string& v) {
    cfg.forest.n_trees = count(v);
    if (cfg.forest.n_trees == 0) throw ConfigError("n_trees must be >= 1");
  });
  with("forest.features_per_split", [&](const std::string& v) {
    cfg.forest.features_per_split = v == "sqrt" ? 0 : count(v);
  });
  with("forest.max_depth", [&](const std::string& v) {
    cfg.forest.max_depth = v == "unlimited" ? kUnlimitedDepth : count(v);
  });
  with("forest.min_samples_split", [&](const std::string& v) { cfg.forest.min_samples_split = count(v); });
  with("forest.bootstrap", [&](const std::string& v) { cfg.forest.bootstrap = boolean(v); });

  with("mlp.hidden", [&](const std::string& v) {
    cfg.mlp_hidden.clear();
    for (const auto& item : split_list(v)) {
      const auto h = count(item);
      if (h == 0) throw ConfigError("hidden layer sizes must be >= 1");
      cfg.mlp_hidden.push_back(h);
    }
  });
  with("mlp.epochs", [&](const std::string& v) { cfg.mlp.epochs = count(v); });
  with("mlp.learning_rate", [&](const std::string& v) {
    cfg.mlp.learning_rate = real(v);
    if (!(cfg.mlp.learning_rate >= 0.0)) throw ConfigError("learning_rate must be >= 0");
  });
  with("mlp.batch_size", [&](const std::string& v) {
    cfg.mlp.batch_size = count(v);
    if (cfg.mlp.batch_size == 0) throw ConfigError("batch_size must be >= 1");
  });
  with("mlp.standardize", [&](const std::string& v) { cfg.mlp.standardize = boolean(v); });

  with("run.seeds", [&](const std::string& v) { cfg.seeds = parse_seed_list(v); });
  cfg.output_dir = base_dir / cfg.output_dir;
  with("run.output_dir", [&](const std::string& v) {
    cfg.output_dir = std::filesystem::path(v).is_absolute() ? std::filesystem::path(v) : base_dir / v;
  });
  with("run.save_models", [&](const std::string& v) { cfg.save_models = boolean(v); });

  for (const auto& [key, entry] : ini.entries()) {
    if (!used.count(key)) throw ConfigError("unknown key '" + key + "'", entry.line);
  }
  if (!have_dataset) throw ConfigError("missing required key data.path");
  if (!cfg.run_forest && !cfg.run_mlp) throw ConfigError("no model selected under [models]");
  cfg.forest.positive_label = cfg.positive_label;
  return cfg;
}

}  // namespace pcarf
