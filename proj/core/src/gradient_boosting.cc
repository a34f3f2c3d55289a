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

#include "arx/gradient_boosting.h"

#include <cmath>
#include <limits>

#include "arx/error.h"

namespace arx {

namespace {

// Guards the Newton denominator of pure leaves.
constexpr double kNewtonDenominatorEpsilon = 1e-12;

void check_binary(std::span<const int> labels, std::size_t expected,
                  const char* who) {
  if (labels.size() != expected) {
    throw LayoutError(std::string(who) + ": label count does not match rows");
  }
  bool seen[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError(std::string(who) + ": labels must be 0/1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw FitError(std::string(who) + ": training labels contain a single class");
  }
}

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

double sigmoid(double x) {
  const double p = 1.0 / (1.0 + std::exp(-x));
  // Keep scores strictly inside (0, 1) for extreme raw scores.
  if (p >= 1.0) return std::nextafter(1.0, 0.0);
  if (p <= 0.0) return std::numeric_limits<double>::denorm_min();
  return p;
}

double mean_log_loss(std::span<const double> raw, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    total += softplus(raw[i]) - labels[i] * raw[i];
  }
  return total / static_cast<double>(raw.size());
}

double GradientBoostedEnsemble::raw_score(std::span<const double> row) const {
  double sum = 0.0;
  for (const Tree& tree : trees) sum += tree.predict(row);
  return init_score + learning_rate * sum;
}

double GradientBoostedEnsemble::predict_proba(std::span<const double> row) const {
  return sigmoid(raw_score(row));
}

GradientBoostedEnsemble fit_gradient_boosting(const EncodedMatrix& m,
                                              std::span<const int> labels,
                                              const BoostingParams& params,
                                              std::uint64_t seed) {
  require_imputed(m, "fit_gradient_boosting");
  check_binary(labels, m.rows, "fit_gradient_boosting");
  if (params.n_trees < 0) throw ConfigError("n_trees must be >= 0");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw ConfigError("learning_rate must lie in (0, 1]");
  }

  const std::size_t n = m.rows;
  GradientBoostedEnsemble model;
  model.learning_rate = params.learning_rate;
  model.layout = m.layout;
  model.params = params;
  model.seed = seed;

  double positives = 0.0;
  for (int y : labels) positives += y;
  const double base_rate = positives / static_cast<double>(n);
  model.init_score = std::log(base_rate / (1.0 - base_rate));

  std::vector<double> tree_sum(n, 0.0);  // sum of tree outputs per row
  std::vector<double> raw(n, model.init_score);
  model.training_loss.push_back(mean_log_loss(raw, labels));
  if (params.n_trees == 0) return model;

  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  const SortedColumns columns(m, rows);

  CartParams cart;
  cart.max_depth = params.max_depth;
  cart.min_samples_leaf = params.min_samples_leaf;
  cart.criterion = SplitCriterion::kSquaredError;

  std::vector<double> residual(n), hessian(n);
  std::vector<int> leaf_of;
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(raw[i]);
      residual[i] = labels[i] - p;
      hessian[i] = p * (1.0 - p);
    }
    Tree tree = grow_tree(columns, residual, {}, cart, seed, &leaf_of);

    std::vector<double> num(tree.nodes.size(), 0.0), den(tree.nodes.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      num[leaf_of[i]] += residual[i];
      den[leaf_of[i]] += hessian[i];
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.nodes[k].is_leaf()) {
        tree.nodes[k].value = num[k] / (den[k] + kNewtonDenominatorEpsilon);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      tree_sum[i] += tree.nodes[leaf_of[i]].value;
      raw[i] = model.init_score + model.learning_rate * tree_sum[i];
    }
    model.training_loss.push_back(mean_log_loss(raw, labels));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> gb_predict_proba(const GradientBoostedEnsemble& model,
                                     const EncodedMatrix& m) {
  if (!(m.layout == model.layout)) {
    throw LayoutError("gb_predict_proba: matrix layout differs from training");
  }
  require_imputed(m, "gb_predict_proba");
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = model.predict_proba(m.row(r));
  return out;
}

std::vector<FeatureImportance> gini_importance(const GradientBoostedEnsemble& model) {
  return aggregate_importance(model.trees, model.layout);
}

}  // namespace arx
