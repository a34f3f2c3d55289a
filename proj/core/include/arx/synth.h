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

#ifndef ARX_SYNTH_H_
#define ARX_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arx/dataset.h"

namespace arx {

// Marginals plus a planted logistic mortality mechanism. Risk weights apply to
// standardized values:
//   numeric      z = (x - mean) / sd                      (configured moments)
//   boolean      z = (b - rate) / sqrt(rate * (1 - rate))
//   categorical  z = standardized level effect under the level probabilities
// and the outcome is Bernoulli(sigmoid(intercept + sum_f weight_f * z_f)).

struct NumericFeatureConfig {
  std::string name;
  double mean = 0.0;
  double sd = 1.0;
  double lower = -1e300;
  double upper = 1e300;
  double missing_rate = 0.0;
  double weight = 0.0;
};

struct BooleanFeatureConfig {
  std::string name;
  double positive_rate = 0.5;
  double weight = 0.0;
};

struct CategoryLevel {
  std::string name;
  double probability = 0.0;
  double effect = 0.0;
};

struct CategoricalFeatureConfig {
  std::string name;
  std::vector<CategoryLevel> levels;
  double weight = 0.0;
};

struct GeneratorConfig {
  std::size_t n = 20000;
  std::uint64_t seed = 2024;
  double prevalence = 0.1243;
  std::size_t pilot_size = 50000;
  // probability of a patient contributing 1, 2, ... episodes
  std::vector<double> episodes_per_patient = {1.0};
  std::vector<NumericFeatureConfig> numeric;
  std::vector<BooleanFeatureConfig> boolean;
  std::vector<CategoricalFeatureConfig> categorical;
};

// The shipped configuration: published cohort marginals of the default schema
// with invented category vocabularies and a risk model led by Urea and
// Service.
GeneratorConfig default_generator_config();

// Throws ConfigError naming the offending feature. Every schema feature must
// be configured exactly once with a matching kind.
void validate(const GeneratorConfig& cfg, const CohortSchema& schema);

GeneratorConfig parse_generator_config(std::string_view json_text);
GeneratorConfig load_generator_config(const std::filesystem::path& path);
std::string to_json(const GeneratorConfig& cfg);

struct GroundTruth {
  double intercept = 0.0;
  std::vector<double> linear_risk;  // sum of weight * z, before the intercept
  std::vector<double> true_risk;    // sigmoid(intercept + linear_risk)
  std::vector<int> outcome;
};

// Intercept such that the mean pilot-sample probability matches the target
// prevalence (bisection). Throws ConfigError when bisection does not reach
// the target within +-0.002 in 100 steps.
double calibrate_intercept(const GeneratorConfig& cfg,
                           const CohortSchema& schema = default_schema());

// Row i depends only on (seed, i), so output is independent of scheduling.
// Missingness is applied after the outcome draw and independently of it.
std::pair<Cohort, GroundTruth> generate_cohort(
    const GeneratorConfig& cfg, const CohortSchema& schema = default_schema());

// AUC of the true risk against the drawn outcomes.
double bayes_auc(const GroundTruth& truth, std::span<const int> outcomes);
double bayes_auc(const GroundTruth& truth);

// episode_id, true_risk, outcome
std::string ground_truth_csv(const Cohort& cohort, const GroundTruth& truth);

}  // namespace arx

#endif  // ARX_SYNTH_H_
