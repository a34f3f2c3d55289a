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

#ifndef ARX_FOREST_H_
#define ARX_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "arx/dataset.h"
#include "arx/tree.h"

namespace arx {

// n_candidate_features: 0 selects floor(sqrt(columns)); kAllFeatures (or any
// value >= columns) evaluates every column at every split.
struct ForestParams {
  int n_trees = 300;
  int max_depth = kUnlimitedDepth;
  std::size_t min_samples_leaf = 5;
  std::size_t n_candidate_features = 0;
  bool bootstrap = true;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct RandomForestEnsemble {
  std::vector<Tree> trees;  // Gini trees; leaves hold the positive fraction
  ColumnLayout layout;
  ForestParams params;
  std::size_t n_candidate_features = 0;  // resolved value
  std::uint64_t seed = 0;

  double predict_proba(std::span<const double> row) const;
};

// Tree t is grown with seed derive_seed(seed, t), so the result does not
// depend on how trees are scheduled across threads.
RandomForestEnsemble fit_random_forest(const EncodedMatrix& m,
                                       std::span<const int> labels,
                                       const ForestParams& params,
                                       std::uint64_t seed);

std::vector<double> rf_predict_proba(const RandomForestEnsemble& model,
                                     const EncodedMatrix& m);

std::vector<FeatureImportance> gini_importance(const RandomForestEnsemble& model);

}  // namespace arx

#endif  // ARX_FOREST_H_
