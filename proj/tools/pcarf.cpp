// pcarf: experiment harness for PCA + random forest / ANN classification.
//
//   pcarf run <config> [--set section.key=value]... [--output DIR]
//   pcarf evaluate <model-file> <csv> [--label-column NAME] [--drop-columns a,b] [--skip-rows N]
//                  [--roc FILE]
//   pcarf roc-plot <roc-csv> [-o FILE] [--title TEXT]
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcarf/config.hpp"
#include "pcarf/errors.hpp"
#include "pcarf/experiment.hpp"
#include "pcarf/metrics.hpp"
#include "pcarf/pipeline.hpp"
#include "pcarf/roc_plot.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kConfigFailure = 1, kDataFailure = 2, kNumericalFailure = 3 };

constexpr const char* kOutputEnv = "PCARF_OUTPUT_DIR";

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& output) {
  pcarf::IniFile ini = pcarf::IniFile::load(config_path);
  if (const char* env = std::getenv(kOutputEnv); env && *env) {
    ini.apply_override("run.output_dir=" + fs::absolute(env).string());
  }
  for (const auto& o : overrides) ini.apply_override(o);
  if (!output.empty()) ini.apply_override("run.output_dir=" + fs::absolute(output).string());

  const pcarf::ExperimentConfig config = pcarf::build_config(ini, fs::path(config_path).parent_path());
  pcarf::run_experiment(config);

  std::ifstream table(config.output_dir / "comparison.txt");
  std::cout << table.rdbuf();
  std::cout << "\nwrote " << (config.output_dir / "metrics.csv").string() << ", comparison.txt, summary.json, roc/"
            << (config.save_models ? ", models/" : "") << '\n';
  return kOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& csv_path,
                 const std::string& label_column, const std::string& drop_columns,
                 std::size_t skip_rows, const std::string& roc_path) {
  const pcarf::PipelineModel model = pcarf::load_pipeline(model_path);
  pcarf::CsvOptions csv;
  csv.label_column = label_column;
  csv.skip_rows = skip_rows;
  csv.drop_columns.clear();
  std::stringstream ss(drop_columns);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) csv.drop_columns.push_back(item);
  const pcarf::LabeledDataset data = pcarf::load_csv(csv_path, csv);
  if (data.dimension() != model.input_dimension()) {
    throw pcarf::DataError(csv_path + ": " + std::to_string(data.dimension()) +
                           " feature columns, model expects " + std::to_string(model.input_dimension()));
  }

  const auto scores = pcarf::score_rows(model, data.features);
  const auto predictions = pcarf::threshold_scores(scores, model.positive_label);
  const pcarf::ConfusionMatrix cm = pcarf::confusion(data.labels, predictions, model.positive_label);

  const pcarf::NamedConfusion row{fs::path(csv_path).filename().string(), cm};
  pcarf::write_metrics_csv(std::cout, std::span(&row, 1));
  const pcarf::TableColumn column{"Value", pcarf::metric_cells(cm)};
  std::cout << '\n' << pcarf::metrics_table(std::span(&column, 1));
  if (data.count(0) > 0 && data.count(1) > 0) {
    const pcarf::RocCurve roc = pcarf::roc_curve(scores, data.labels, model.positive_label);
    std::cout << "AUC: " << roc.auc << '\n';
    if (!roc_path.empty()) {
      std::ofstream out(roc_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + roc_path);
      pcarf::write_roc_csv(out, roc);
    }
  } else {
    std::cout << "AUC: undefined (single-class labels)\n";
  }
  return kOk;
}

int cmd_roc_plot(const std::string& roc_csv, std::string output, const std::string& title) {
  std::ifstream in(roc_csv, std::ios::binary);
  if (!in) throw pcarf::DataError("cannot open " + roc_csv);
  const pcarf::RocCurve curve = pcarf::read_roc_csv(in);
  if (output.empty()) output = fs::path(roc_csv).replace_extension(".svg").string();
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + output);
  out << pcarf::roc_svg(curve, title);
  std::cout << "wrote " << output << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCA + random forest classification experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Experiment config (INI)")->required();
  run->add_option("--set", overrides, "Override a config key: section.key=value");
  run->add_option("--output", output, "Output directory (overrides config and PCARF_OUTPUT_DIR)");

  std::string model_path;
  std::string csv_path;
  std::string label_column = "class";
  std::string drop_columns = "id";
  std::size_t skip_rows = 0;
  std::string roc_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score a labeled CSV with a saved model");
  evaluate->add_option("model", model_path, "Model file written by run")->required();
  evaluate->add_option("csv", csv_path, "Labeled CSV")->required();
  evaluate->add_option("--label-column", label_column, "Label column name");
  evaluate->add_option("--drop-columns", drop_columns, "Comma-separated columns to ignore");
  evaluate->add_option("--skip-rows", skip_rows, "Lines to discard before the CSV header");
  evaluate->add_option("--roc", roc_out, "Write ROC points to this CSV");

  std::string roc_csv;
  std::string svg_out;
  std::string title = "ROC curve";
  auto* roc_plot = app.add_subcommand("roc-plot", "Render a ROC CSV as SVG");
  roc_plot->add_option("roc-csv", roc_csv, "ROC CSV written by run or evaluate")->required();
  roc_plot->add_option("-o,--output", svg_out, "SVG path (default: input with .svg)");
  roc_plot->add_option("--title", title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*run) return cmd_run(config_path, overrides, output);
    if (*evaluate) return cmd_evaluate(model_path, csv_path, label_column, drop_columns, skip_rows, roc_out);
    if (*roc_plot) return cmd_roc_plot(roc_csv, svg_out, title);
  } catch (const pcarf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const pcarf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
