/*
 * Copyright 2026 The Arx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARX_TREE_H_
#define ARX_TREE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "arx/dataset.h"

namespace arx {

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();
// Sentinel for CartParams::n_candidate_features meaning "every column".
inline constexpr std::size_t kAllFeatures = std::numeric_limits<std::size_t>::max();

enum class SplitCriterion { kGini, kSquaredError };

struct CartParams {
  int max_depth = 3;                          // >= 1, or kUnlimitedDepth
  std::size_t min_samples_leaf = 1;           // >= 1 (weighted sample count)
  std::size_t n_candidate_features = kAllFeatures;
  SplitCriterion criterion = SplitCriterion::kSquaredError;
};

// A node is a leaf iff feature < 0. Rows with value <= threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;   // prediction (leaves); node mean for internal nodes
  double weight = 0.0;  // training weight reaching the node
  double gain = 0.0;    // weighted impurity decrease of the split

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_index(std::span<const double> row) const {
    int i = 0;
    while (!nodes[i].is_leaf()) {
      const TreeNode& n = nodes[i];
      i = row[n.feature] <= n.threshold ? n.left : n.right;
    }
    return i;
  }
  double predict(std::span<const double> row) const {
    return nodes[leaf_index(row)].value;
  }
  std::size_t leaf_count() const;
  int depth() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

// Checks that every internal node has two in-range children, each node has
// exactly one parent and the root reaches every node. Throws FormatError.
void check_tree_structure(const Tree& tree, std::size_t columns);

// Columns of a fixed set of training rows, each presorted once by value.
// Reused across trees so that growing a tree never sorts.
class SortedColumns {
 public:
  SortedColumns(const EncodedMatrix& m, std::span<const std::size_t> rows);

  std::size_t samples() const { return rows_.size(); }
  std::size_t columns() const { return cols_; }
  std::size_t row(std::size_t sample) const { return rows_[sample]; }
  std::span<const std::int32_t> order(std::size_t c) const {
    return {order_.data() + c * samples(), samples()};
  }
  std::span<const double> sorted_values(std::size_t c) const {
    return {values_.data() + c * samples(), samples()};
  }

 private:
  std::vector<std::size_t> rows_;
  std::size_t cols_ = 0;
  std::vector<std::int32_t> order_;  // sample positions, column-major
  std::vector<double> values_;       // values in sorted order, column-major
};

// Greedy recursive CART growth on presorted columns. targets and weights are
// indexed by sample position; samples with zero weight are left out (used for
// bootstrap multiplicities). Equal-gain splits resolve to the lowest column,
// then the lowest threshold.
// When leaf_of_sample is given it receives, per sample position, the index of
// the leaf the sample was routed to during growth (-1 for zero weight).
Tree grow_tree(const SortedColumns& columns, std::span<const double> targets,
               std::span<const double> weights, const CartParams& params,
               std::uint64_t seed, std::vector<int>* leaf_of_sample = nullptr);

// Fits a tree on the given rows of an imputed matrix. targets[i] is the target
// of matrix row i. Leaves hold the mean target (squared error) or the
// positive fraction (Gini).
Tree fit_cart(const EncodedMatrix& m, std::span<const std::size_t> rows,
              std::span<const double> targets, const CartParams& params,
              std::uint64_t seed);

std::vector<double> predict(const Tree& tree, const EncodedMatrix& m);

struct FeatureImportance {
  std::string feature;
  double importance = 0.0;
};

// Sums split gains per column across trees, folds one-hot columns back into
// their source feature and normalizes to 1. Sorted by decreasing importance,
// ties in layout order. All zeros when no tree has a split.
std::vector<FeatureImportance> aggregate_importance(std::span<const Tree> trees,
                                                    const ColumnLayout& layout);

// Throws DataError when m still has missing cells.
void require_imputed(const EncodedMatrix& m, const char* who);

}  // namespace arx

#endif  // ARX_TREE_H_
