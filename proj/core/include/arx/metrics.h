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

#ifndef ARX_METRICS_H_
#define ARX_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace arx {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// A sample is predicted positive iff score >= threshold. Throws DataError on
// empty or misaligned input.
ConfusionMatrix confusion_at_threshold(std::span<const double> scores,
                                       std::span<const int> labels,
                                       double threshold);

struct MetricSet {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double ber = 0.0;  // 1 - (sensitivity + specificity) / 2
};

// Throws DataError when either class is absent.
MetricSet metric_set(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0, 0) origin
};

// From (0, 0) to (1, 1), one point per distinct score (descending).
struct RocCurve {
  std::vector<RocPoint> points;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);
// Trapezoidal area; equals P(score+ > score-) + P(tie) / 2.
double auc(const RocCurve& curve);
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdChoice {
  double threshold = 0.0;
  double ber = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

// Candidate thresholds: midpoints between adjacent distinct scores plus one
// value just below the minimum and one just above the maximum. Returns the
// minimum-BER candidate; ties prefer higher sensitivity, then the lower
// threshold.
ThresholdChoice optimal_threshold(std::span<const double> scores,
                                  std::span<const int> labels);

// The candidate list used by optimal_threshold, ascending.
std::vector<double> candidate_thresholds(std::span<const double> scores);

}  // namespace arx

#endif  // ARX_METRICS_H_
