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

#include "arx/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "arx/error.h"

namespace arx {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels,
                  const char* who) {
  if (scores.size() != labels.size()) {
    throw DataError(std::string(who) + ": scores and labels differ in length");
  }
  if (scores.empty()) throw DataError(std::string(who) + ": empty input");
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError(std::string(who) + ": labels must be 0/1");
  }
}

void check_both_classes(std::span<const int> labels, const char* who) {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size())) {
    throw DataError(std::string(who) + ": both classes must be present");
  }
}

}  // namespace

ConfusionMatrix confusion_at_threshold(std::span<const double> scores,
                                       std::span<const int> labels,
                                       double threshold) {
  check_inputs(scores, labels, "confusion_at_threshold");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      predicted ? ++cm.tp : ++cm.fn;
    } else {
      predicted ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

MetricSet metric_set(const ConfusionMatrix& cm) {
  const std::size_t positives = cm.tp + cm.fn;
  const std::size_t negatives = cm.tn + cm.fp;
  if (positives == 0 || negatives == 0) {
    throw DataError("metric_set: sensitivity/specificity undefined without both classes");
  }
  MetricSet m;
  m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(positives);
  m.specificity = static_cast<double>(cm.tn) / static_cast<double>(negatives);
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  m.ber = 1.0 - (m.sensitivity + m.specificity) / 2.0;
  return m;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels, "roc_curve");
  check_both_classes(labels, "roc_curve");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const double positives =
      static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double negatives = static_cast<double>(labels.size()) - positives;

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      labels[order[i]] == 1 ? ++tp : ++fp;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives, s});
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  return auc(roc_curve(scores, labels));
}

std::vector<double> candidate_thresholds(std::span<const double> scores) {
  std::vector<double> unique(scores.begin(), scores.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<double> out;
  if (unique.empty()) return out;
  out.reserve(unique.size() + 1);
  out.push_back(std::nextafter(unique.front(), -std::numeric_limits<double>::infinity()));
  for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
    const double lo = unique[i], hi = unique[i + 1];
    double mid = lo + (hi - lo) / 2.0;
    // The midpoint must separate lo (negative) from hi (positive).
    if (!(mid > lo && mid <= hi)) mid = hi;
    out.push_back(mid);
  }
  out.push_back(std::nextafter(unique.back(), std::numeric_limits<double>::infinity()));
  return out;
}

ThresholdChoice optimal_threshold(std::span<const double> scores,
                                  std::span<const int> labels) {
  check_inputs(scores, labels, "optimal_threshold");
  check_both_classes(labels, "optimal_threshold");
  const std::vector<double> candidates = candidate_thresholds(scores);

  // Scores sorted descending; sweep candidates from the highest threshold
  // down, admitting the scores that reach each one.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const std::size_t positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = labels.size() - positives;

  ThresholdChoice best;
  bool have = false;
  std::size_t next = 0;
  ConfusionMatrix cm{0, 0, negatives, positives};
  for (std::size_t k = candidates.size(); k-- > 0;) {
    const double thr = candidates[k];
    while (next < order.size() && scores[order[next]] >= thr) {
      if (labels[order[next]] == 1) {
        ++cm.tp;
        --cm.fn;
      } else {
        ++cm.fp;
        --cm.tn;
      }
      ++next;
    }
    const MetricSet m = metric_set(cm);
    const bool better = !have || m.ber < best.ber ||
                        (m.ber == best.ber && m.sensitivity > best.sensitivity) ||
                        (m.ber == best.ber && m.sensitivity == best.sensitivity &&
                         thr < best.threshold);
    if (better) {
      best = {thr, m.ber, m.sensitivity, m.specificity};
      have = true;
    }
  }
  return best;
}

}  // namespace arx
