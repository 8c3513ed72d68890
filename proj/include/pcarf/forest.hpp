#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pcarf/data.hpp"
#include "pcarf/matrix.hpp"
#include "pcarf/rng.hpp"

namespace pcarf {

// Sample counts for labels 0 and 1.
using ClassCounts = std::array<std::size_t, 2>;

// 1 - sum p_i^2. Throws std::domain_error when both counts are zero.
double gini(const ClassCounts& counts);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

// Best axis-aligned split of `rows` over the candidate `features`, trying the
// midpoints between consecutive distinct values. Ties keep the earlier feature
// in `features`, then the lower threshold. Empty when no split lowers the
// size-weighted Gini impurity. `rows` may repeat indices (bootstrap).
std::optional<SplitCandidate> best_split(std::span<const std::size_t> rows,
                                         std::span<const std::size_t> features,
                                         const LabeledDataset& ds);

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

struct TreeParams {
  std::size_t max_depth = 16;
  std::size_t min_samples_split = 2;
  // Features drawn per node; 0 means all of them.
  std::size_t features_per_split = 0;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct TreeNode {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  ClassCounts counts{};  // training samples reaching the node
  std::uint32_t feature = kNone;
  double threshold = 0.0;
  std::uint32_t left = kNone;
  std::uint32_t right = kNone;

  bool is_leaf() const noexcept { return feature == kNone; }
  // Majority label; a tie goes to 0.
  int majority() const noexcept { return counts[1] > counts[0] ? 1 : 0; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Nodes are stored in pre-order; nodes[0] is the root. x[feature] <= threshold
// goes left.
class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, TreeParams params);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeParams& params() const noexcept { return params_; }

  const TreeNode& leaf_for(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return leaf_for(x).majority(); }
  // Edges on the longest root-to-leaf path.
  std::size_t depth() const;
  std::size_t leaf_count() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
  TreeParams params_;
};

// Greedy recursive CART growth. Each internal node draws a fresh subset of
// features_per_split features from rng.
DecisionTree grow_tree(std::span<const std::size_t> rows, const LabeledDataset& ds,
                       const TreeParams& params, Rng& rng);

struct ForestParams {
  std::size_t n_trees = 100;
  // 0 selects floor(sqrt(p)).
  std::size_t features_per_split = 0;
  std::size_t max_depth = 16;
  std::size_t min_samples_split = 2;
  bool bootstrap = true;
  int positive_label = 1;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::size_t n_features = 0;
  std::size_t features_per_split = 0;
  std::size_t max_depth = 16;
  std::size_t min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  int positive_label = 1;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Tree t trains on its own bootstrap sample drawn from
// Rng(derive_seed(seed, t)), so the forest does not depend on scheduling.
// Trees are trained in parallel.
ForestModel fit_forest(const LabeledDataset& ds, const ForestParams& params, std::uint64_t seed);
// Same result, one tree after another.
ForestModel fit_forest_serial(const LabeledDataset& ds, const ForestParams& params,
                              std::uint64_t seed);

// Fraction of trees voting for the positive label.
double predict_score(const ForestModel& model, std::span<const double> x);
int predict(const ForestModel& model, std::span<const double> x);
// Row-parallel predict_score over a matrix.
std::vector<double> predict_scores(const ForestModel& model, const Matrix& x);
std::vector<double> predict_scores_serial(const ForestModel& model, const Matrix& x);

void write_forest(std::ostream& out, const ForestModel& model);
ForestModel read_forest(std::istream& in);

}  // namespace pcarf
