#include "pcarf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "pcarf/errors.hpp"
#include "pcarf/forest.hpp"
#include "pcarf/mlp.hpp"
#include "pcarf/pca.hpp"
#include "pcarf/pipeline.hpp"
#include "pcarf/rng.hpp"

namespace pcarf {

namespace {

// Stream ids separating the seeds of the split, forest and network.
constexpr std::uint64_t kForestStream = 0x666f72657374ULL;  // "forest"
constexpr std::uint64_t kMlpInitStream = 0x6d6c70696eULL;   // "mlpin"
constexpr std::uint64_t kMlpTrainStream = 0x6d6c7074ULL;    // "mlpt"

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pca_tag(bool pca) { return pca ? "with_pca" : "without_pca"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::array<double, 5> metric_values(const MetricsReport& m) {
  return {m.accuracy, m.sensitivity, m.specificity, m.precision, m.f1};
}

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return {mean, sd};
}

CellResult evaluate_cell(const std::string& model_name, bool use_pca, std::uint64_t seed,
                         const PipelineModel& pipeline, const LabeledDataset& test,
                         const ExperimentConfig& config) {
  CellResult cell;
  cell.model = model_name;
  cell.pca = use_pca;
  cell.seed = seed;
  const auto scores = score_rows(pipeline, test.features);
  const auto predictions = threshold_scores(scores, config.positive_label);
  cell.cm = confusion(test.labels, predictions, config.positive_label);
  cell.metrics = metrics_report(cell.cm);

  const std::string stem = cell_stem(model_name, use_pca, seed);
  if (test.count(0) > 0 && test.count(1) > 0) {
    const RocCurve roc = roc_curve(scores, test.labels, config.positive_label);
    cell.auc = roc.auc;
    cell.roc_file = "roc/" + stem + ".csv";
    std::ostringstream out;
    write_roc_csv(out, roc);
    write_file(config.output_dir / cell.roc_file, out.str());
  }
  if (config.save_models) {
    cell.model_file = "models/" + stem + ".model";
    std::ostringstream out;
    write_pipeline(out, pipeline);
    write_file(config.output_dir / cell.model_file, out.str());
  }
  if (pipeline.pca) {
    cell.components = pipeline.pca->output_dimension();
    for (double r : explained_variance_ratio(*pipeline.pca)) cell.explained_variance += r;
  }
  return cell;
}

std::string aggregate_cell(const CellAggregate& agg, std::size_t metric, std::size_t n_seeds,
                           const std::vector<CellResult>& cells) {
  if (n_seeds == 1) {
    for (const auto& c : cells)
      if (c.model == agg.model && c.pca == agg.pca) return metric_cells(c.cm)[metric];
  }
  return fixed3(agg.mean[metric]) + " +/- " + fixed3(agg.stddev[metric]);
}

std::string comparison_text(const RunReport& report, const ExperimentConfig& config) {
  std::ostringstream out;
  const std::size_t n_seeds = report.seeds.size();
  std::string seed_text;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    seed_text += (i ? "," : "") + std::to_string(report.seeds[i]);
  }

  // Table 2 column order: PCA variants first, ANN before Random Forest.
  std::vector<const CellAggregate*> order;
  for (bool pca : {true, false})
    for (const char* model : {kMlp, kForest})
      for (const auto& agg : report.aggregates)
        if (agg.model == model && agg.pca == pca) order.push_back(&agg);

  auto header = [](const std::string& model, bool pca) {
    return display_name(model) + (pca ? " (with PCA)" : " (without PCA)");
  };

  std::vector<TableColumn> columns;
  for (const auto* agg : order) {
    TableColumn col{header(agg->model, agg->pca), {}};
    for (std::size_t m = 0; m < 5; ++m) col.cells[m] = aggregate_cell(*agg, m, n_seeds, report.cells);
    columns.push_back(std::move(col));
  }
  const std::string title =
      n_seeds == 1 ? "Test-set metrics (percent), seed " + seed_text
                   : "Test-set metrics (percent, mean +/- sample stddev over seeds " + seed_text + ")";
  out << metrics_table(columns, title);
  for (const auto* agg : order) {
    out << "AUC " << header(agg->model, agg->pca) << ": ";
    if (agg->auc_mean) {
      out << fixed3(*agg->auc_mean);
      if (n_seeds > 1) out << " +/- " << fixed3(*agg->auc_stddev);
    } else {
      out << "undefined";
    }
    out << '\n';
  }
  out << "PCA: " << (config.pca_standardize ? "standardized" : "centered only") << ", ";
  if (const auto* fixed = std::get_if<FixedComponents>(&config.pca_policy)) {
    out << "k = " << fixed->k << '\n';
  } else {
    out << "variance threshold " << fixed3(std::get<VarianceThreshold>(config.pca_policy).fraction) << '\n';
  }

  if (!report.direction.empty()) {
    std::size_t holds = 0;
    for (const auto& d : report.direction) holds += d.without_beats_with ? 1 : 0;
    out << "\nRandom Forest accuracy, without PCA > with PCA: " << holds << "/"
        << report.direction.size() << " seeds\n";
    for (const auto& d : report.direction) {
      out << "  seed " << d.seed << ": without " << fixed3(d.accuracy_without) << ", with "
          << fixed3(d.accuracy_with) << (d.without_beats_with ? "  holds" : "  does not hold") << '\n';
    }
  }

  if (n_seeds > 1) {
    for (std::uint64_t seed : report.seeds) {
      std::vector<TableColumn> per_seed;
      for (bool pca : {true, false})
        for (const char* model : {kMlp, kForest})
          for (const auto& c : report.cells)
            if (c.model == model && c.pca == pca && c.seed == seed) {
              per_seed.push_back({header(model, pca), metric_cells(c.cm)});
            }
      out << '\n' << metrics_table(per_seed, "Seed " + std::to_string(seed));
    }
  }
  return out.str();
}

std::string metrics_csv(const RunReport& report) {
  std::ostringstream out;
  out << "model,pca,seed,tp,fp,tn,fn,accuracy,sensitivity,specificity,precision,f1,auc,components,"
         "warnings\n";
  for (const auto& c : report.cells) {
    out << c.model << ',' << pca_tag(c.pca) << ',' << c.seed << ',' << c.cm.tp << ',' << c.cm.fp
        << ',' << c.cm.tn << ',' << c.cm.fn;
    for (const auto& cell : metric_cells(c.cm)) out << ',' << cell;
    out << ',' << (c.auc ? fixed3(*c.auc) : std::string()) << ',' << c.components << ','
        << warning_text(c.metrics.warnings) << '\n';
  }
  return out.str();
}

std::string summary_json(const RunReport& report, const ExperimentConfig& config,
                         const LabeledDataset& data) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dataset"] = {{"samples", data.size()},
                  {"features", data.dimension()},
                  {"class_0", data.count(0)},
                  {"class_1", data.count(1)},
                  {"positive_label", config.positive_label}};
  ordered_json pca = {{"standardize", config.pca_standardize}};
  if (const auto* fixed = std::get_if<FixedComponents>(&config.pca_policy)) {
    pca["components"] = fixed->k;
  } else {
    pca["variance_threshold"] = std::get<VarianceThreshold>(config.pca_policy).fraction;
  }
  j["config"] = {{"test_fraction", config.test_fraction},
                 {"stratified", config.stratified},
                 {"pca", pca},
                 {"forest",
                  {{"n_trees", config.forest.n_trees},
                   {"features_per_split", config.forest.features_per_split},
                   {"max_depth", config.forest.max_depth == kUnlimitedDepth
                                     ? ordered_json("unlimited")
                                     : ordered_json(config.forest.max_depth)},
                   {"min_samples_split", config.forest.min_samples_split},
                   {"bootstrap", config.forest.bootstrap}}},
                 {"mlp",
                  {{"hidden", config.mlp_hidden},
                   {"epochs", config.mlp.epochs},
                   {"learning_rate", config.mlp.learning_rate},
                   {"batch_size", config.mlp.batch_size},
                   {"standardize", config.mlp.standardize}}},
                 {"seeds", report.seeds}};

  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    ordered_json cell = {{"model", c.model},
                         {"pca", c.pca},
                         {"seed", c.seed},
                         {"confusion", {{"tp", c.cm.tp}, {"fp", c.cm.fp}, {"tn", c.cm.tn}, {"fn", c.cm.fn}}}};
    const auto names = kMetricNames;
    const auto values = metric_values(c.metrics);
    ordered_json metrics;
    for (std::size_t m = 0; m < 5; ++m) metrics[names[m]] = values[m];
    cell["metrics"] = metrics;
    cell["warnings"] = warning_text(c.metrics.warnings);
    cell["auc"] = c.auc ? ordered_json(*c.auc) : ordered_json(nullptr);
    cell["roc_file"] = c.roc_file;
    cell["model_file"] = c.model_file;
    if (c.pca) {
      cell["components"] = c.components;
      cell["explained_variance"] = c.explained_variance;
    }
    cells.push_back(cell);
  }
  j["cells"] = cells;

  ordered_json aggregates = ordered_json::array();
  for (const auto& a : report.aggregates) {
    ordered_json agg = {{"model", a.model}, {"pca", a.pca}};
    for (std::size_t m = 0; m < 5; ++m) {
      agg[kMetricNames[m]] = {{"mean", a.mean[m]}, {"stddev", a.stddev[m]}};
    }
    agg["AUC"] = a.auc_mean ? ordered_json{{"mean", *a.auc_mean}, {"stddev", *a.auc_stddev}}
                            : ordered_json(nullptr);
    aggregates.push_back(agg);
  }
  j["aggregates"] = aggregates;

  if (!report.direction.empty()) {
    ordered_json dir = ordered_json::array();
    std::size_t holds = 0;
    for (const auto& d : report.direction) {
      holds += d.without_beats_with ? 1 : 0;
      dir.push_back({{"seed", d.seed},
                     {"accuracy_without_pca", d.accuracy_without},
                     {"accuracy_with_pca", d.accuracy_with},
                     {"without_beats_with", d.without_beats_with}});
    }
    j["forest_direction_check"] = {{"holds", holds}, {"seeds", report.direction.size()}, {"per_seed", dir}};
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string cell_stem(const std::string& model, bool pca, std::uint64_t seed) {
  return model + "_" + pca_tag(pca) + "_seed" + std::to_string(seed);
}

std::string display_name(const std::string& model) {
  return model == kForest ? "Random Forest" : "ANN";
}

RunReport run_experiment(const ExperimentConfig& config, const LabeledDataset& data) {
  data.validate();
  if (!config.run_forest && !config.run_mlp) throw ConfigError("no model selected");
  if (config.seeds.empty()) throw ConfigError("empty seed list");
  std::filesystem::create_directories(config.output_dir / "roc");
  if (config.save_models) std::filesystem::create_directories(config.output_dir / "models");

  RunReport report;
  report.seeds = config.seeds;
  std::sort(report.seeds.begin(), report.seeds.end());
  report.seeds.erase(std::unique(report.seeds.begin(), report.seeds.end()), report.seeds.end());

  for (std::uint64_t seed : report.seeds) {
    const Split split = stratified_split(data, {config.test_fraction, seed, config.stratified});
    for (bool use_pca : config.pca_modes) {
      std::optional<PcaModel> pca;
      LabeledDataset train = split.train;
      if (use_pca) {
        pca = fit_pca(split.train.features, config.pca_policy, config.pca_standardize);
        train.features = transform(*pca, split.train.features);
        train.feature_names.clear();
        for (std::size_t k = 0; k < pca->output_dimension(); ++k) {
          train.feature_names.push_back("pc" + std::to_string(k + 1));
        }
      }
      if (config.run_forest) {
        PipelineModel pipeline{pca, fit_forest(train, config.forest, derive_seed(seed, kForestStream)),
                               config.positive_label};
        report.cells.push_back(evaluate_cell(kForest, use_pca, seed, pipeline, split.test, config));
      }
      if (config.run_mlp) {
        std::vector<std::size_t> sizes{train.dimension()};
        sizes.insert(sizes.end(), config.mlp_hidden.begin(), config.mlp_hidden.end());
        sizes.push_back(1);
        MlpTrainOptions options = config.mlp;
        options.seed = derive_seed(seed, kMlpTrainStream);
        MlpModel mlp = train_mlp(init_mlp(sizes, derive_seed(seed, kMlpInitStream)), train, options);
        PipelineModel pipeline{pca, std::move(mlp), config.positive_label};
        report.cells.push_back(evaluate_cell(kMlp, use_pca, seed, pipeline, split.test, config));
      }
    }
  }

  std::stable_sort(report.cells.begin(), report.cells.end(), [](const CellResult& a, const CellResult& b) {
    return std::tie(a.model, a.pca, a.seed) < std::tie(b.model, b.pca, b.seed);
  });

  for (const char* model : {kForest, kMlp}) {
    for (bool pca : {false, true}) {
      std::array<std::vector<double>, 5> values;
      std::vector<double> aucs;
      bool any = false;
      bool all_auc = true;
      for (const auto& c : report.cells) {
        if (c.model != model || c.pca != pca) continue;
        any = true;
        const auto v = metric_values(c.metrics);
        for (std::size_t m = 0; m < 5; ++m) values[m].push_back(v[m]);
        if (c.auc) {
          aucs.push_back(*c.auc);
        } else {
          all_auc = false;
        }
      }
      if (!any) continue;
      CellAggregate agg{model, pca, {}, {}, std::nullopt, std::nullopt};
      for (std::size_t m = 0; m < 5; ++m) std::tie(agg.mean[m], agg.stddev[m]) = mean_stddev(values[m]);
      if (all_auc) {
        const auto [mean, sd] = mean_stddev(aucs);
        agg.auc_mean = mean;
        agg.auc_stddev = sd;
      }
      report.aggregates.push_back(agg);
    }
  }

  if (config.run_forest && config.pca_modes.size() == 2) {
    for (std::uint64_t seed : report.seeds) {
      DirectionCheck d{seed, 0.0, 0.0, false};
      for (const auto& c : report.cells) {
        if (c.model != kForest || c.seed != seed) continue;
        (c.pca ? d.accuracy_with : d.accuracy_without) = c.metrics.accuracy;
      }
      d.without_beats_with = d.accuracy_without > d.accuracy_with;
      report.direction.push_back(d);
    }
  }

  write_file(config.output_dir / "metrics.csv", metrics_csv(report));
  write_file(config.output_dir / "comparison.txt", comparison_text(report, config));
  write_file(config.output_dir / "summary.json", summary_json(report, config, data));
  return report;
}

RunReport run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, load_csv(config.dataset, config.csv));
}

}  // namespace pcarf
