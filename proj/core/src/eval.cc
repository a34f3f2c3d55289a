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

#include "arx/eval.h"

#include <chrono>
#include <cmath>
#include <map>

#include "arx/error.h"
#include "arx/metrics.h"
#include "arx/parallel.h"
#include "arx/random.h"

namespace arx {

std::string_view to_string(ThresholdMode mode) {
  switch (mode) {
    case ThresholdMode::kFixed:
      return "fixed";
    case ThresholdMode::kCalibrationSplit:
      return "calibration";
    case ThresholdMode::kPerRepetition:
      return "per-repetition";
  }
  return "unknown";
}

std::optional<ThresholdMode> parse_threshold_mode(std::string_view name) {
  for (ThresholdMode m : {ThresholdMode::kFixed, ThresholdMode::kCalibrationSplit,
                          ThresholdMode::kPerRepetition}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

void validate(const EvalConfig& cfg) {
  if (cfg.repetitions < 2) throw ConfigError("repetitions must be >= 2");
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
}

std::uint64_t calibration_split_seed(std::uint64_t master) {
  return derive_seed(master, 0xCA11B0);
}
std::uint64_t calibration_fit_seed(std::uint64_t master) {
  return derive_seed(master, 0xCA11B1);
}
std::uint64_t repetition_split_seed(std::uint64_t master, int repetition) {
  return derive_seed(master, 2 * static_cast<std::uint64_t>(repetition));
}
std::uint64_t repetition_fit_seed(std::uint64_t master, int repetition) {
  return derive_seed(master, 2 * static_cast<std::uint64_t>(repetition) + 1);
}

MetricSummary summarize_metric(std::string metric, std::span<const double> values) {
  if (values.size() < 2) {
    throw DataError("summarize_metric: need at least 2 values for " + metric);
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double half = 1.96 * sd / std::sqrt(n);
  MetricSummary s;
  s.metric = std::move(metric);
  s.mean = mean;
  s.ci_low = mean - half;
  s.ci_high = mean + half;
  s.values.assign(values.begin(), values.end());
  return s;
}

const MetricSummary& EvaluationReport::metric(std::string_view name) const {
  for (const MetricSummary& m : metrics) {
    if (m.metric == name) return m;
  }
  throw Error("report has no metric " + std::string(name));
}

namespace {

struct RepetitionResult {
  std::array<double, 5> metrics{};
  double threshold = 0.0;
  double seconds = 0.0;
  std::vector<FeatureImportance> importance;
};

std::vector<int> labels_of(const Cohort& cohort, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(*cohort.records[r].outcome);
  return out;
}

}  // namespace

double calibrate_threshold(const Cohort& cohort, const ModelSpec& spec,
                           std::uint64_t seed, double test_fraction) {
  const std::vector<int> labels = cohort.labels();
  const SplitIndices split =
      stratified_split(labels, test_fraction, calibration_split_seed(seed));
  const Pipeline p = fit_pipeline(cohort, split.train, spec, calibration_fit_seed(seed));
  const std::vector<double> scores = p.score(subset(cohort, split.test).records);
  return optimal_threshold(scores, labels_of(cohort, split.test)).threshold;
}

Pipeline train_pipeline(const Cohort& cohort, const ModelSpec& spec, std::uint64_t seed,
                        std::optional<double> threshold, double test_fraction) {
  const double chosen =
      threshold ? *threshold : calibrate_threshold(cohort, spec, seed, test_fraction);
  std::vector<std::size_t> all(cohort.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Pipeline p = fit_pipeline(cohort, all, spec, seed);
  p.threshold = chosen;
  return p;
}

EvaluationReport run_repeated_holdout(const Cohort& cohort, const EvalConfig& cfg) {
  validate(cfg);
  const std::vector<int> labels = cohort.labels();

  double threshold = cfg.fixed_threshold;
  if (cfg.threshold_mode == ThresholdMode::kCalibrationSplit) {
    threshold = calibrate_threshold(cohort, cfg.model, cfg.seed, cfg.test_fraction);
  }

  std::vector<RepetitionResult> results(static_cast<std::size_t>(cfg.repetitions));
  parallel_for(results.size(), [&](std::size_t i) {
    const int rep = static_cast<int>(i);
    try {
      const auto start = std::chrono::steady_clock::now();
      const SplitIndices split = stratified_split(
          labels, cfg.test_fraction, repetition_split_seed(cfg.seed, rep));
      const Pipeline p =
          fit_pipeline(cohort, split.train, cfg.model, repetition_fit_seed(cfg.seed, rep));
      const std::vector<double> scores = p.score(subset(cohort, split.test).records);
      const std::vector<int> test_labels = labels_of(cohort, split.test);
      RepetitionResult& out = results[i];
      out.threshold = cfg.threshold_mode == ThresholdMode::kPerRepetition
                          ? optimal_threshold(scores, test_labels).threshold
                          : threshold;
      const MetricSet m =
          metric_set(confusion_at_threshold(scores, test_labels, out.threshold));
      out.metrics = {m.accuracy, roc_auc(scores, test_labels), m.specificity,
                     m.sensitivity, m.ber};
      if (p.supports_importance()) out.importance = p.importance();
      out.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start).count();
    } catch (const std::exception& e) {
      throw Error("repetition " + std::to_string(rep) + ": " + e.what());
    }
  });

  EvaluationReport report;
  report.model = std::string(to_string(cfg.model.kind));
  report.config = cfg;
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    std::vector<double> values;
    values.reserve(results.size());
    for (const RepetitionResult& r : results) values.push_back(r.metrics[k]);
    report.metrics.push_back(summarize_metric(std::string(kMetricNames[k]), values));
  }
  double threshold_sum = 0.0;
  for (const RepetitionResult& r : results) {
    report.thresholds.push_back(r.threshold);
    report.seconds_per_repetition.push_back(r.seconds);
    threshold_sum += r.threshold;
  }
  report.threshold = cfg.threshold_mode == ThresholdMode::kPerRepetition
                         ? threshold_sum / static_cast<double>(results.size())
                         : threshold;

  if (cfg.model.kind == ModelKind::kGradientBoosting ||
      cfg.model.kind == ModelKind::kRandomForest) {
    // Mean of the per-repetition normalized importances, accumulated in
    // repetition order.
    std::vector<std::string> order;
    std::map<std::string, double> sum;
    for (const RepetitionResult& r : results) {
      for (const FeatureImportance& f : r.importance) {
        if (sum.emplace(f.feature, 0.0).second) order.push_back(f.feature);
        sum[f.feature] += f.importance;
      }
    }
    double total = 0.0;
    for (const auto& [name, v] : sum) total += v;
    std::vector<FeatureImportance> mean;
    for (const std::string& name : order) {
      mean.push_back({name, total > 0.0 ? sum[name] / total : 0.0});
    }
    std::stable_sort(mean.begin(), mean.end(),
                     [](const FeatureImportance& a, const FeatureImportance& b) {
                       return a.importance > b.importance;
                     });
    report.importance = std::move(mean);
  }
  return report;
}

std::vector<ImportanceRow> importance_report(std::span<const FeatureImportance> importance,
                                             const CohortSchema& schema) {
  double total = 0.0;
  for (const FeatureImportance& f : importance) total += f.importance;
  std::vector<ImportanceRow> rows;
  rows.reserve(importance.size());
  for (const FeatureImportance& f : importance) {
    ImportanceRow row;
    row.feature = f.feature;
    auto idx = schema.index_of(f.feature);
    row.label = idx ? schema.feature(*idx).display_name() : f.feature;
    row.percent = total > 0.0 ? 100.0 * f.importance / total : 0.0;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ImportanceRow& a, const ImportanceRow& b) {
    return a.percent > b.percent;
  });
  return rows;
}

std::vector<ImportanceRow> importance_report(const Pipeline& pipeline) {
  if (!pipeline.supports_importance()) {
    throw Error("importance is not available for model kind " +
                std::string(to_string(pipeline.kind())));
  }
  const std::vector<FeatureImportance> imp = pipeline.importance();
  return importance_report(imp, pipeline.schema);
}

}  // namespace arx
