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

#ifndef ARX_GRADIENT_BOOSTING_H_
#define ARX_GRADIENT_BOOSTING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "arx/dataset.h"
#include "arx/tree.h"

namespace arx {

struct BoostingParams {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  std::size_t min_samples_leaf = 20;

  friend bool operator==(const BoostingParams&, const BoostingParams&) = default;
};

// Binomial log-loss boosting (Friedman's stagewise additive model):
//   score(x) = sigmoid(init_score + learning_rate * sum_t tree_t(x))
// Each stage fits a squared-error regression tree to the residuals y - p and
// replaces the leaf values by one Newton step.
struct GradientBoostedEnsemble {
  double init_score = 0.0;  // log-odds of the training base rate
  double learning_rate = 0.1;
  std::vector<Tree> trees;
  ColumnLayout layout;
  BoostingParams params;
  std::uint64_t seed = 0;
  // Mean training log-loss before the first stage and after every stage.
  std::vector<double> training_loss;

  double raw_score(std::span<const double> row) const;
  double predict_proba(std::span<const double> row) const;
};

// m must be imputed. Throws FitError when labels hold a single class.
GradientBoostedEnsemble fit_gradient_boosting(const EncodedMatrix& m,
                                              std::span<const int> labels,
                                              const BoostingParams& params,
                                              std::uint64_t seed);

// Scores in (0, 1). Throws LayoutError on a layout mismatch.
std::vector<double> gb_predict_proba(const GradientBoostedEnsemble& model,
                                     const EncodedMatrix& m);

std::vector<FeatureImportance> gini_importance(const GradientBoostedEnsemble& model);

double sigmoid(double x);
// Mean binomial log-loss of raw scores against 0/1 labels.
double mean_log_loss(std::span<const double> raw, std::span<const int> labels);

}  // namespace arx

#endif  // ARX_GRADIENT_BOOSTING_H_
