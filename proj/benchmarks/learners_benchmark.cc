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

#include <benchmark/benchmark.h>

#include <vector>

#include "arx/gradient_boosting.h"
#include "arx/knn.h"
#include "arx/metrics.h"
#include "arx/random.h"
#include "arx/synth.h"
#include "arx/tree.h"

namespace arx {
namespace {

EncodedMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  EncodedMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.values.resize(rows * cols);
  for (double& v : m.values) v = rng.normal();
  m.mask.assign(rows * cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    m.layout.blocks.push_back({"f" + std::to_string(c), FeatureKind::kReal, c, 1, {}});
  }
  m.layout.columns = cols;
  return m;
}

std::vector<int> labels_for(const EncodedMatrix& m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> y(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    y[r] = m.at(r, 0) - m.at(r, 1) + rng.normal() > 0.0;
  }
  return y;
}

void BM_FitCart(benchmark::State& state) {
  const EncodedMatrix m = random_matrix(state.range(0), 40, 1);
  const auto y = labels_for(m, 2);
  const std::vector<double> targets(y.begin(), y.end());
  std::vector<std::size_t> rows(m.rows);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  CartParams p;
  p.max_depth = 8;
  for (auto _ : state) benchmark::DoNotOptimize(fit_cart(m, rows, targets, p, 0));
}
BENCHMARK(BM_FitCart)->Arg(2000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_FitBoosting(benchmark::State& state) {
  const EncodedMatrix m = random_matrix(state.range(0), 40, 3);
  const auto y = labels_for(m, 4);
  BoostingParams p;
  for (auto _ : state) benchmark::DoNotOptimize(fit_gradient_boosting(m, y, p, 0));
}
BENCHMARK(BM_FitBoosting)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_RocAuc(benchmark::State& state) {
  Rng rng(5);
  std::vector<double> s(state.range(0));
  std::vector<int> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = rng.uniform();
    y[i] = rng.bernoulli(0.12);
  }
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(s, y));
}
BENCHMARK(BM_RocAuc)->Arg(4000)->Arg(100000);

void BM_KnnScore(benchmark::State& state) {
  const EncodedMatrix train = random_matrix(16000, 40, 6);
  const EncodedMatrix test = random_matrix(state.range(0), 40, 7);
  const KnnModel model = fit_knn(train, labels_for(train, 8), 5);
  for (auto _ : state) benchmark::DoNotOptimize(knn_predict_proba(model, test));
}
BENCHMARK(BM_KnnScore)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_GenerateCohort(benchmark::State& state) {
  GeneratorConfig cfg = default_generator_config();
  cfg.n = state.range(0);
  cfg.pilot_size = 20000;
  for (auto _ : state) benchmark::DoNotOptimize(generate_cohort(cfg));
}
BENCHMARK(BM_GenerateCohort)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace arx

BENCHMARK_MAIN();
