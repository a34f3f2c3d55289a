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

#ifndef ARX_EVAL_H_
#define ARX_EVAL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arx/dataset.h"
#include "arx/pipeline.h"

namespace arx {

enum class ThresholdMode {
  kFixed,             // use EvalConfig::fixed_threshold
  kCalibrationSplit,  // search once on a separately seeded 80/20 split
  kPerRepetition,     // search on each repetition's own test scores
};

std::string_view to_string(ThresholdMode mode);
std::optional<ThresholdMode> parse_threshold_mode(std::string_view name);

struct EvalConfig {
  int repetitions = 100;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  ModelSpec model;
  ThresholdMode threshold_mode = ThresholdMode::kCalibrationSplit;
  double fixed_threshold = 0.5;
};

// Throws ConfigError unless repetitions >= 2 and 0 < test_fraction < 1.
void validate(const EvalConfig& cfg);

// Derived seeds. Splits depend on the master seed only, so every model kind
// evaluated with the same master seed sees the same splits.
std::uint64_t calibration_split_seed(std::uint64_t master);
std::uint64_t calibration_fit_seed(std::uint64_t master);
std::uint64_t repetition_split_seed(std::uint64_t master, int repetition);
std::uint64_t repetition_fit_seed(std::uint64_t master, int repetition);

inline constexpr std::array<std::string_view, 5> kMetricNames = {
    "accuracy", "auc", "specificity", "sensitivity", "ber"};

struct MetricSummary {
  std::string metric;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> values;  // one per repetition, in repetition order
};

// mean +- 1.96 * sample SD / sqrt(n). Throws DataError for fewer than two
// values.
MetricSummary summarize_metric(std::string metric, std::span<const double> values);

struct EvaluationReport {
  std::string model;  // kind name
  double threshold = 0.0;
  std::vector<MetricSummary> metrics;  // kMetricNames order
  std::optional<std::vector<FeatureImportance>> importance;
  EvalConfig config;
  std::vector<double> thresholds;  // per repetition (equal unless per-repetition mode)
  std::vector<double> seconds_per_repetition;

  const MetricSummary& metric(std::string_view name) const;
};

// Minimum-BER threshold of a pipeline fitted on a calibration split of the
// cohort and scored on its held-out part.
double calibrate_threshold(const Cohort& cohort, const ModelSpec& spec,
                           std::uint64_t seed, double test_fraction = 0.2);

// Fits on every row of the cohort. The threshold is the given one, or the
// calibration-split threshold when none is given.
Pipeline train_pipeline(const Cohort& cohort, const ModelSpec& spec, std::uint64_t seed,
                        std::optional<double> threshold = std::nullopt,
                        double test_fraction = 0.2);

// The repeated stratified hold-out protocol. Repetitions may run in
// parallel; results are stored by repetition index, so the report is a pure
// function of (cohort, cfg). Errors are rethrown with the repetition index.
EvaluationReport run_repeated_holdout(const Cohort& cohort, const EvalConfig& cfg);

struct ImportanceRow {
  std::string feature;
  std::string label;
  double percent = 0.0;
};

// Importance as percentages summing to 100, descending, with display labels
// taken from the schema.
std::vector<ImportanceRow> importance_report(std::span<const FeatureImportance> importance,
                                             const CohortSchema& schema);
std::vector<ImportanceRow> importance_report(const Pipeline& pipeline);

}  // namespace arx

#endif  // ARX_EVAL_H_
