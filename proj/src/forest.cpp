#include "pcarf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "pcarf/errors.hpp"
#include "pcarf/text_io.hpp"

namespace pcarf {

double gini(const ClassCounts& counts) {
  const std::size_t total = counts[0] + counts[1];
  if (total == 0) throw std::domain_error("gini: empty node");
  const double p0 = static_cast<double>(counts[0]) / static_cast<double>(total);
  const double p1 = static_cast<double>(counts[1]) / static_cast<double>(total);
  return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

double weighted_decrease(double parent_impurity, const ClassCounts& left, const ClassCounts& right) {
  const double nl = static_cast<double>(left[0] + left[1]);
  const double nr = static_cast<double>(right[0] + right[1]);
  const double n = nl + nr;
  return parent_impurity - (nl / n * gini(left) + nr / n * gini(right));
}

ClassCounts count_labels(std::span<const std::size_t> rows, const LabeledDataset& ds) {
  ClassCounts counts{};
  for (std::size_t r : rows) ++counts[static_cast<std::size_t>(ds.labels[r])];
  return counts;
}

// Midpoint of a < b that still routes a left and b right.
double midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid < b ? mid : a;
}

}  // namespace

std::optional<SplitCandidate> best_split(std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features,
                                         const LabeledDataset& ds) {
  if (rows.empty()) return std::nullopt;
  const ClassCounts parent = count_labels(rows, ds);
  if (parent[0] == 0 || parent[1] == 0) return std::nullopt;
  const double parent_impurity = gini(parent);

  std::optional<SplitCandidate> best;
  std::vector<std::pair<double, int>> column(rows.size());
  for (std::size_t feature : features) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      column[i] = {ds.features(rows[i], feature), ds.labels[rows[i]]};
    }
    std::sort(column.begin(), column.end());
    if (column.front().first == column.back().first) continue;

    ClassCounts left{};
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      ++left[static_cast<std::size_t>(column[i].second)];
      if (column[i].first == column[i + 1].first) continue;
      const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
      const double decrease = weighted_decrease(parent_impurity, left, right);
      if (decrease > 0.0 && (!best || decrease > best->impurity_decrease)) {
        best = SplitCandidate{feature, midpoint(column[i].first, column[i + 1].first), decrease};
      }
    }
  }
  return best;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, TreeParams params)
    : nodes_(std::move(nodes)), params_(params) {
  if (nodes_.empty()) throw std::invalid_argument("DecisionTree: no nodes");
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[x[node->feature] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].is_leaf()) {
      level[nodes_[i].left] = level[i] + 1;
      level[nodes_[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& ds, const TreeParams& params, Rng& rng)
      : ds_(ds), params_(params), rng_(rng), pool_(ds.dimension()) {
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
    draw_ = params.features_per_split == 0 ? pool_.size()
                                           : std::min(params.features_per_split, pool_.size());
  }

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(std::span<std::size_t>(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::uint32_t grow(std::span<std::size_t> rows, std::size_t depth) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(TreeNode{count_labels(rows, ds_)});
    const ClassCounts counts = nodes_[index].counts;
    const bool pure = counts[0] == 0 || counts[1] == 0;
    if (pure || depth >= params_.max_depth || rows.size() < params_.min_samples_split) {
      return index;
    }

    const auto split = best_split(rows, draw_features(), ds_);
    if (!split) return index;

    const auto middle = std::stable_partition(rows.begin(), rows.end(), [&](std::size_t r) {
      return ds_.features(r, split->feature) <= split->threshold;
    });
    const auto n_left = static_cast<std::size_t>(middle - rows.begin());

    nodes_[index].feature = static_cast<std::uint32_t>(split->feature);
    nodes_[index].threshold = split->threshold;
    const std::uint32_t left = grow(rows.first(n_left), depth + 1);
    const std::uint32_t right = grow(rows.subspan(n_left), depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  // Partial Fisher-Yates over the persistent pool; the drawn prefix is
  // returned sorted so split ties favour lower feature indices.
  std::span<const std::size_t> draw_features() {
    for (std::size_t i = 0; i < draw_ && draw_ < pool_.size(); ++i) {
      const auto j = i + static_cast<std::size_t>(rng_.below(pool_.size() - i));
      std::swap(pool_[i], pool_[j]);
    }
    drawn_.assign(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(draw_));
    std::sort(drawn_.begin(), drawn_.end());
    return drawn_;
  }

  const LabeledDataset& ds_;
  const TreeParams& params_;
  Rng& rng_;
  std::vector<std::size_t> pool_;
  std::vector<std::size_t> drawn_;
  std::size_t draw_ = 0;
  std::vector<TreeNode> nodes_;
};

TreeParams tree_params(const ForestModel& m) {
  return TreeParams{m.max_depth, m.min_samples_split, m.features_per_split};
}

ForestModel forest_shell(const LabeledDataset& ds, const ForestParams& params, std::uint64_t seed) {
  ds.validate();
  if (params.n_trees == 0) throw std::invalid_argument("fit_forest: n_trees must be >= 1");
  if (params.positive_label != 0 && params.positive_label != 1) {
    throw std::invalid_argument("fit_forest: positive_label must be 0 or 1");
  }
  const std::size_t p = ds.dimension();
  if (p == 0) throw std::invalid_argument("fit_forest: dataset has no features");
  ForestModel model;
  model.n_features = p;
  model.features_per_split =
      params.features_per_split == 0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))))
          : params.features_per_split;
  if (model.features_per_split > p) {
    throw std::invalid_argument("fit_forest: features_per_split " +
                                std::to_string(model.features_per_split) + " exceeds " +
                                std::to_string(p) + " features");
  }
  model.max_depth = params.max_depth;
  model.min_samples_split = params.min_samples_split;
  model.bootstrap = params.bootstrap;
  model.seed = seed;
  model.positive_label = params.positive_label;
  model.trees.resize(params.n_trees);
  return model;
}

DecisionTree train_one(const LabeledDataset& ds, const ForestModel& model, std::size_t t) {
  Rng rng(derive_seed(model.seed, t));
  const std::size_t n = ds.size();
  std::vector<std::size_t> rows(n);
  if (model.bootstrap) {
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
  } else {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  }
  const TreeParams params = tree_params(model);
  return DecisionTree(TreeBuilder(ds, params, rng).build(std::move(rows)), params);
}

}  // namespace

DecisionTree grow_tree(std::span<const std::size_t> rows, const LabeledDataset& ds,
                       const TreeParams& params, Rng& rng) {
  if (rows.empty()) throw std::invalid_argument("grow_tree: no rows");
  std::vector<std::size_t> owned(rows.begin(), rows.end());
  return DecisionTree(TreeBuilder(ds, params, rng).build(std::move(owned)), params);
}

ForestModel fit_forest(const LabeledDataset& ds, const ForestParams& params, std::uint64_t seed) {
  ForestModel model = forest_shell(ds, params, seed);
  const auto n_trees = static_cast<std::ptrdiff_t>(model.trees.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < n_trees; ++t) {
    model.trees[static_cast<std::size_t>(t)] = train_one(ds, model, static_cast<std::size_t>(t));
  }
  return model;
}

ForestModel fit_forest_serial(const LabeledDataset& ds, const ForestParams& params,
                              std::uint64_t seed) {
  ForestModel model = forest_shell(ds, params, seed);
  for (std::size_t t = 0; t < model.trees.size(); ++t) model.trees[t] = train_one(ds, model, t);
  return model;
}

double predict_score(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw std::invalid_argument("forest predict: row has " + std::to_string(x.size()) +
                                " features, model expects " + std::to_string(model.n_features));
  }
  if (model.trees.empty()) throw std::invalid_argument("forest predict: model has no trees");
  std::size_t votes = 0;
  for (const auto& tree : model.trees)
    if (tree.predict(x) == model.positive_label) ++votes;
  return static_cast<double>(votes) / static_cast<double>(model.trees.size());
}

int predict(const ForestModel& model, std::span<const double> x) {
  return predict_score(model, x) >= 0.5 ? model.positive_label : 1 - model.positive_label;
}

std::vector<double> predict_scores(const ForestModel& model, const Matrix& x) {
  std::vector<double> out(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(x.rows()); ++r) {
    out[static_cast<std::size_t>(r)] = predict_score(model, x.row(static_cast<std::size_t>(r)));
  }
  return out;
}

std::vector<double> predict_scores_serial(const ForestModel& model, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_score(model, x.row(r));
  return out;
}

namespace {

void write_depth(std::ostream& out, std::size_t depth) {
  if (depth == kUnlimitedDepth) {
    out << "unlimited";
  } else {
    out << depth;
  }
}

std::size_t read_depth(TokenReader& reader) {
  const std::string token = reader.next();
  if (token == "unlimited") return kUnlimitedDepth;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw DataError("forest block: bad max_depth '" + token + "'");
  }
}

// Pre-order read; returns the index of the subtree root.
std::uint32_t read_node(TokenReader& reader, std::vector<TreeNode>& nodes, std::size_t limit,
                        std::size_t n_features) {
  if (nodes.size() >= limit) throw DataError("forest block: more nodes than declared");
  const auto index = static_cast<std::uint32_t>(nodes.size());
  nodes.emplace_back();
  const std::string kind = reader.next();
  if (kind == "leaf") {
    nodes[index].counts = {reader.next_size(), reader.next_size()};
    if (nodes[index].counts[0] + nodes[index].counts[1] == 0) {
      throw DataError("forest block: leaf with no samples");
    }
    return index;
  }
  if (kind != "split") throw DataError("forest block: expected 'leaf' or 'split', found '" + kind + "'");
  const std::size_t feature = reader.next_size();
  if (feature >= n_features) throw DataError("forest block: split feature out of range");
  nodes[index].feature = static_cast<std::uint32_t>(feature);
  nodes[index].threshold = reader.next_double();
  nodes[index].counts = {reader.next_size(), reader.next_size()};
  const std::uint32_t left = read_node(reader, nodes, limit, n_features);
  const std::uint32_t right = read_node(reader, nodes, limit, n_features);
  nodes[index].left = left;
  nodes[index].right = right;
  return index;
}

}  // namespace

void write_forest(std::ostream& out, const ForestModel& model) {
  out << "forest " << model.trees.size() << ' ' << model.n_features << ' '
      << model.features_per_split << ' ';
  write_depth(out, model.max_depth);
  out << ' ' << model.min_samples_split << ' ' << (model.bootstrap ? 1 : 0) << ' ' << model.seed
      << ' ' << model.positive_label << '\n';
  for (const auto& tree : model.trees) {
    out << "tree " << tree.nodes().size() << '\n';
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) {
        out << "leaf " << node.counts[0] << ' ' << node.counts[1] << '\n';
      } else {
        out << "split " << node.feature << ' ' << format_double(node.threshold) << ' '
            << node.counts[0] << ' ' << node.counts[1] << '\n';
      }
    }
  }
}

ForestModel read_forest(std::istream& in) {
  TokenReader reader(in);
  reader.expect("forest");
  ForestModel model;
  const std::size_t n_trees = reader.next_size();
  model.n_features = reader.next_size();
  model.features_per_split = reader.next_size();
  model.max_depth = read_depth(reader);
  model.min_samples_split = reader.next_size();
  model.bootstrap = reader.next_size() != 0;
  model.seed = reader.next_u64();
  model.positive_label = static_cast<int>(reader.next_int());
  if (n_trees == 0 || model.n_features == 0 ||
      (model.positive_label != 0 && model.positive_label != 1)) {
    throw DataError("forest block: bad header");
  }
  const TreeParams params = tree_params(model);
  model.trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    reader.expect("tree");
    const std::size_t count = reader.next_size();
    std::vector<TreeNode> nodes;
    nodes.reserve(count);
    read_node(reader, nodes, count, model.n_features);
    if (nodes.size() != count) throw DataError("forest block: fewer nodes than declared");
    model.trees.emplace_back(std::move(nodes), params);
  }
  return model;
}

}  // namespace pcarf
