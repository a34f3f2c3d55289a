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

#include "arx/tree.h"

#include <algorithm>
#include <numeric>

#include "arx/error.h"
#include "arx/random.h"

namespace arx {

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  // Children always follow their parent in the node array.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.is_leaf()) continue;
    d[n.left] = d[n.right] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

void check_tree_structure(const Tree& tree, std::size_t columns) {
  const int n = static_cast<int>(tree.nodes.size());
  if (n == 0) throw FormatError("tree has no nodes");
  std::vector<int> parents(n, 0);
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) {
      if (node.left != -1 || node.right != -1) {
        throw FormatError("leaf node " + std::to_string(i) + " has children");
      }
      continue;
    }
    if (static_cast<std::size_t>(node.feature) >= columns) {
      throw FormatError("node " + std::to_string(i) + " splits on column " +
                        std::to_string(node.feature) + " outside the layout");
    }
    for (int child : {node.left, node.right}) {
      if (child <= i || child >= n) {
        throw FormatError("node " + std::to_string(i) + " has invalid child " +
                          std::to_string(child));
      }
      ++parents[child];
    }
  }
  if (parents[0] != 0) throw FormatError("root node has a parent");
  for (int i = 1; i < n; ++i) {
    if (parents[i] != 1) {
      throw FormatError("node " + std::to_string(i) + " has " +
                        std::to_string(parents[i]) + " parents");
    }
  }
}

SortedColumns::SortedColumns(const EncodedMatrix& m,
                             std::span<const std::size_t> rows)
    : rows_(rows.begin(), rows.end()), cols_(m.cols) {
  const std::size_t n = rows_.size();
  order_.resize(n * cols_);
  values_.resize(n * cols_);
  std::vector<std::int32_t> idx(n);
  for (std::size_t c = 0; c < cols_; ++c) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::int32_t a, std::int32_t b) {
      return m.at(rows_[a], c) < m.at(rows_[b], c);
    });
    for (std::size_t i = 0; i < n; ++i) {
      order_[c * n + i] = idx[i];
      values_[c * n + i] = m.at(rows_[idx[i]], c);
    }
  }
}

namespace {

struct SplitChoice {
  bool valid = false;
  double gain = 0.0;
  std::size_t column = 0;
  double threshold = 0.0;
  std::size_t left_count = 0;  // positions of the segment routed left

  bool worse_than(double g, std::size_t c, double t) const {
    if (!valid) return true;
    if (g != gain) return g > gain;
    if (c != column) return c < column;
    return t < threshold;
  }
};

class TreeGrower {
 public:
  TreeGrower(const SortedColumns& columns, std::span<const double> targets,
             std::span<const double> weights, const CartParams& params,
             std::uint64_t seed)
      : params_(params), rng_(seed), d_(columns.columns()) {
    const std::size_t total = columns.samples();
    y_.assign(targets.begin(), targets.end());
    if (weights.empty()) {
      w_.assign(total, 1.0);
    } else {
      w_.assign(weights.begin(), weights.end());
    }
    for (std::size_t s = 0; s < total; ++s) {
      if (w_[s] > 0.0) active_.push_back(static_cast<std::int32_t>(s));
    }
    n_ = active_.size();
    pos_.resize(n_ * d_);
    val_.resize(n_ * d_);
    for (std::size_t c = 0; c < d_; ++c) {
      auto order = columns.order(c);
      auto values = columns.sorted_values(c);
      std::size_t k = c * n_;
      for (std::size_t i = 0; i < total; ++i) {
        if (w_[order[i]] > 0.0) {
          pos_[k] = order[i];
          val_[k] = values[i];
          ++k;
        }
      }
    }
    goes_left_.assign(total, 0);
    tmp_pos_.resize(n_);
    tmp_val_.resize(n_);
    perm_.resize(d_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    leaf_of_sample_.assign(total, -1);
  }

  Tree grow() {
    if (n_ == 0) throw FitError("cannot grow a tree without samples");
    build(0, n_, 0, 0);
    return std::move(tree_);
  }

  std::vector<int>& leaf_of_sample() { return leaf_of_sample_; }

 private:
  // Segment [begin, end) of column stat_col holds exactly the node's samples.
  int build(std::size_t begin, std::size_t end, int depth, std::size_t stat_col) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    double weight = 0.0, sum = 0.0;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    // Without columns the node is the root and holds every active sample.
    const std::int32_t* p = d_ ? pos_.data() + stat_col * n_ : active_.data();
    for (std::size_t i = begin; i < end; ++i) {
      const std::int32_t s = p[i];
      weight += w_[s];
      sum += w_[s] * y_[s];
      if (first || y_[s] < lo) lo = y_[s];
      if (first || y_[s] > hi) hi = y_[s];
      first = false;
    }
    {
      TreeNode& node = tree_.nodes[index];
      node.weight = weight;
      node.value = sum / weight;
    }

    const bool pure = lo == hi;
    const bool can_split =
        d_ > 0 && !pure && depth < params_.max_depth &&
        weight >= 2.0 * static_cast<double>(params_.min_samples_leaf);
    SplitChoice best;
    if (can_split) best = find_split(begin, end, weight, sum);
    if (!best.valid) {
      for (std::size_t i = begin; i < end; ++i) {
        leaf_of_sample_[p[i]] = index;
      }
      return index;
    }

    const std::size_t mid = begin + best.left_count;
    const std::size_t c = best.column;
    const bool children_may_split = depth + 1 < params_.max_depth;
    if (children_may_split) partition(begin, end, mid, c);

    tree_.nodes[index].feature = static_cast<int>(c);
    tree_.nodes[index].threshold = best.threshold;
    tree_.nodes[index].gain = std::max(best.gain, 0.0);
    const int left = build(begin, mid, depth + 1, c);
    const int right = build(mid, end, depth + 1, c);
    tree_.nodes[index].left = left;
    tree_.nodes[index].right = right;
    return index;
  }

  double impurity_mass(double w, double s) const {
    // Weighted impurity (node weight times impurity), up to a term that is
    // constant across the candidate splits of one node.
    if (params_.criterion == SplitCriterion::kGini) {
      return 2.0 * s * (w - s) / w;
    }
    return -s * s / w;
  }

  SplitChoice find_split(std::size_t begin, std::size_t end, double weight,
                         double sum) {
    const double min_leaf = static_cast<double>(params_.min_samples_leaf);
    const double parent = impurity_mass(weight, sum);
    SplitChoice best;
    const bool sample_features = params_.n_candidate_features < d_;
    std::size_t informative = 0;
    for (std::size_t k = 0; k < d_; ++k) {
      std::size_t c = k;
      if (sample_features) {
        if (informative >= params_.n_candidate_features) break;
        const std::size_t j = k + rng_.uniform_int(d_ - k);
        std::swap(perm_[k], perm_[j]);
        c = perm_[k];
      }
      const std::int32_t* p = pos_.data() + c * n_;
      const double* v = val_.data() + c * n_;
      if (v[begin] == v[end - 1]) continue;  // constant within the node
      ++informative;
      double wl = 0.0, sl = 0.0;
      for (std::size_t i = begin; i + 1 < end; ++i) {
        const std::int32_t s = p[i];
        wl += w_[s];
        sl += w_[s] * y_[s];
        if (v[i] == v[i + 1]) continue;
        if (wl < min_leaf) continue;
        const double wr = weight - wl;
        if (wr < min_leaf) break;
        const double sr = sum - sl;
        const double gain =
            parent - impurity_mass(wl, sl) - impurity_mass(wr, sr);
        double threshold = v[i] + (v[i + 1] - v[i]) / 2.0;
        if (!(threshold < v[i + 1])) threshold = v[i];
        if (best.worse_than(gain, c, threshold)) {
          best.valid = true;
          best.gain = gain;
          best.column = c;
          best.threshold = threshold;
          best.left_count = i + 1 - begin;
        }
      }
    }
    return best;
  }

  // Stable partition of every column's segment so that samples routed left
  // by the split on split_col come first.
  void partition(std::size_t begin, std::size_t end, std::size_t mid,
                 std::size_t split_col) {
    const std::int32_t* sp = pos_.data() + split_col * n_;
    for (std::size_t i = begin; i < mid; ++i) goes_left_[sp[i]] = 1;
    for (std::size_t i = mid; i < end; ++i) goes_left_[sp[i]] = 0;
    for (std::size_t c = 0; c < d_; ++c) {
      if (c == split_col) continue;
      std::int32_t* p = pos_.data() + c * n_;
      double* v = val_.data() + c * n_;
      std::size_t l = begin, r = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const std::int32_t s = p[i];
        if (goes_left_[s]) {
          p[l] = s;
          v[l] = v[i];
          ++l;
        } else {
          tmp_pos_[r] = s;
          tmp_val_[r] = v[i];
          ++r;
        }
      }
      std::copy_n(tmp_pos_.begin(), r, p + l);
      std::copy_n(tmp_val_.begin(), r, v + l);
    }
  }

  const CartParams& params_;
  Rng rng_;
  std::size_t d_;
  std::size_t n_ = 0;
  std::vector<double> y_, w_;
  std::vector<std::int32_t> active_;
  std::vector<std::int32_t> pos_;
  std::vector<double> val_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::int32_t> tmp_pos_;
  std::vector<double> tmp_val_;
  std::vector<std::size_t> perm_;
  std::vector<int> leaf_of_sample_;
  Tree tree_;
};

}  // namespace

Tree grow_tree(const SortedColumns& columns, std::span<const double> targets,
               std::span<const double> weights, const CartParams& params,
               std::uint64_t seed, std::vector<int>* leaf_of_sample) {
  if (targets.size() != columns.samples()) {
    throw LayoutError("grow_tree: targets do not match the sample count");
  }
  if (!weights.empty() && weights.size() != columns.samples()) {
    throw LayoutError("grow_tree: weights do not match the sample count");
  }
  if (params.max_depth < 1 && params.max_depth != kUnlimitedDepth) {
    throw ConfigError("max_depth must be >= 1");
  }
  if (params.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (params.n_candidate_features < 1) {
    throw ConfigError("n_candidate_features must be >= 1");
  }
  TreeGrower grower(columns, targets, weights, params, seed);
  Tree tree = grower.grow();
  if (leaf_of_sample) *leaf_of_sample = std::move(grower.leaf_of_sample());
  return tree;
}

void require_imputed(const EncodedMatrix& m, const char* who) {
  if (m.missing_count() != 0) {
    throw DataError(std::string(who) + ": matrix has missing cells; impute first");
  }
}

Tree fit_cart(const EncodedMatrix& m, std::span<const std::size_t> rows,
              std::span<const double> targets, const CartParams& params,
              std::uint64_t seed) {
  require_imputed(m, "fit_cart");
  if (rows.empty()) throw FitError("fit_cart: no training rows");
  if (targets.size() != m.rows) {
    throw LayoutError("fit_cart: expected one target per matrix row");
  }
  SortedColumns columns(m, rows);
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) y[i] = targets[rows[i]];
  return grow_tree(columns, y, {}, params, seed);
}

std::vector<double> predict(const Tree& tree, const EncodedMatrix& m) {
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = tree.predict(m.row(r));
  return out;
}

std::vector<FeatureImportance> aggregate_importance(std::span<const Tree> trees,
                                                    const ColumnLayout& layout) {
  std::vector<double> per_column(layout.columns, 0.0);
  for (const Tree& tree : trees) {
    for (const TreeNode& node : tree.nodes) {
      if (!node.is_leaf()) per_column.at(node.feature) += node.gain;
    }
  }
  const std::vector<std::size_t> block_of = layout.block_of_columns();
  std::vector<double> per_block(layout.blocks.size(), 0.0);
  for (std::size_t c = 0; c < layout.columns; ++c) per_block[block_of[c]] += per_column[c];
  double total = 0.0;
  for (double v : per_block) total += v;
  std::vector<FeatureImportance> out;
  out.reserve(per_block.size());
  for (std::size_t b = 0; b < per_block.size(); ++b) {
    out.push_back({layout.blocks[b].feature, total > 0.0 ? per_block[b] / total : 0.0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.importance > b.importance;
                   });
  return out;
}

}  // namespace arx
