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

#include "arx/forest.h"

#include <cmath>

#include "arx/error.h"
#include "arx/parallel.h"
#include "arx/random.h"

namespace arx {

double RandomForestEnsemble::predict_proba(std::span<const double> row) const {
  double sum = 0.0;
  for (const Tree& tree : trees) sum += tree.predict(row);
  return sum / static_cast<double>(trees.size());
}

RandomForestEnsemble fit_random_forest(const EncodedMatrix& m,
                                       std::span<const int> labels,
                                       const ForestParams& params,
                                       std::uint64_t seed) {
  require_imputed(m, "fit_random_forest");
  if (labels.size() != m.rows) {
    throw LayoutError("fit_random_forest: label count does not match rows");
  }
  bool seen[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("fit_random_forest: labels must be 0/1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw FitError("fit_random_forest: training labels contain a single class");
  }
  if (params.n_trees < 1) throw ConfigError("forest needs at least one tree");

  RandomForestEnsemble model;
  model.layout = m.layout;
  model.params = params;
  model.seed = seed;
  model.n_candidate_features =
      params.n_candidate_features == 0
          ? std::max<std::size_t>(
                1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m.cols)))))
          : params.n_candidate_features;

  const std::size_t n = m.rows;
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  const SortedColumns columns(m, rows);
  std::vector<double> targets(labels.begin(), labels.end());

  CartParams cart;
  cart.max_depth = params.max_depth;
  cart.min_samples_leaf = params.min_samples_leaf;
  cart.n_candidate_features = model.n_candidate_features;
  cart.criterion = SplitCriterion::kGini;

  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(model.trees.size(), [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(seed, t);
    std::vector<double> weights;
    if (params.bootstrap) {
      weights.assign(n, 0.0);
      Rng rng(derive_seed(tree_seed, 0xB007));
      for (std::size_t i = 0; i < n; ++i) weights[rng.uniform_int(n)] += 1.0;
    }
    model.trees[t] = grow_tree(columns, targets, weights, cart, tree_seed);
  });
  return model;
}

std::vector<double> rf_predict_proba(const RandomForestEnsemble& model,
                                     const EncodedMatrix& m) {
  if (!(m.layout == model.layout)) {
    throw LayoutError("rf_predict_proba: matrix layout differs from training");
  }
  require_imputed(m, "rf_predict_proba");
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = model.predict_proba(m.row(r));
  return out;
}

std::vector<FeatureImportance> gini_importance(const RandomForestEnsemble& model) {
  return aggregate_importance(model.trees, model.layout);
}

}  // namespace arx
