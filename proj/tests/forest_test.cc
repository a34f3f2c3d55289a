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

#include <gtest/gtest.h>

#include "arx/error.h"
#include "arx/forest.h"
#include "arx/parallel.h"
#include "support.h"

namespace arx {
namespace {

TEST(ForestTest, SingleTreeWithoutBootstrapIsCart) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    EncodedMatrix m = testing::random_matrix(rng, 120, 4, trial % 2 ? 4 : 0);
    const auto y = testing::noisy_labels(m, rng);
    ForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.n_candidate_features = kAllFeatures;
    const auto forest = fit_random_forest(m, y, p, trial);

    CartParams cp;
    cp.max_depth = p.max_depth;
    cp.min_samples_leaf = p.min_samples_leaf;
    cp.criterion = SplitCriterion::kGini;
    const std::vector<double> targets(y.begin(), y.end());
    const Tree cart = fit_cart(m, testing::iota_rows(m.rows), targets, cp, 0);
    EXPECT_EQ(rf_predict_proba(forest, m), predict(cart, m));
  }
}

TEST(ForestTest, SingleClassIsRejected) {
  const EncodedMatrix m = testing::numeric_matrix(3, 1, {1, 2, 3});
  EXPECT_THROW(fit_random_forest(m, std::vector<int>{1, 1, 1}, ForestParams{}, 0), FitError);
}

TEST(ForestTest, ResultDoesNotDependOnThreadCount) {
  Rng rng(32);
  EncodedMatrix m = testing::random_matrix(rng, 200, 5);
  const auto y = testing::noisy_labels(m, rng);
  ForestParams p;
  p.n_trees = 20;
  set_max_threads(1);
  const auto a = rf_predict_proba(fit_random_forest(m, y, p, 9), m);
  set_max_threads(4);
  const auto b = rf_predict_proba(fit_random_forest(m, y, p, 9), m);
  set_max_threads(0);
  EXPECT_EQ(a, b);
}

TEST(ForestTest, ScoresAreFractionsAndImportanceIsNormalized) {
  Rng rng(33);
  EncodedMatrix m = testing::random_matrix(rng, 200, 6);
  const auto y = testing::noisy_labels(m, rng);
  ForestParams p;
  p.n_trees = 25;
  const auto forest = fit_random_forest(m, y, p, 1);
  EXPECT_EQ(forest.n_candidate_features, 2u);
  for (double s : rf_predict_proba(forest, m)) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  double total = 0.0;
  for (const auto& f : gini_importance(forest)) total += f.importance;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

}  // namespace
}  // namespace arx
