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

#include "arx/knn.h"

#include <algorithm>
#include <utility>

#include "arx/error.h"
#include "arx/parallel.h"
#include "arx/tree.h"

namespace arx {

KnnModel fit_knn(const EncodedMatrix& standardized, std::span<const int> labels,
                 std::size_t k) {
  require_imputed(standardized, "fit_knn");
  if (labels.size() != standardized.rows) {
    throw LayoutError("fit_knn: label count does not match rows");
  }
  if (k == 0) throw FitError("fit_knn: k must be >= 1");
  if (k > standardized.rows) {
    throw FitError("fit_knn: k = " + std::to_string(k) + " exceeds the " +
                   std::to_string(standardized.rows) + " training rows");
  }
  KnnModel model;
  model.k = k;
  model.train = standardized;
  model.train.labels.reset();
  model.labels.assign(labels.begin(), labels.end());
  return model;
}

namespace {

using Candidate = std::pair<double, std::size_t>;  // (squared distance, row)

void nearest(const KnnModel& model, std::span<const double> query,
             std::vector<Candidate>& heap) {
  const EncodedMatrix& train = model.train;
  const std::size_t d = train.cols;
  heap.clear();
  // Max-heap on (distance, index): the root is the current k-th neighbour.
  for (std::size_t r = 0; r < train.rows; ++r) {
    const double* x = train.values.data() + r * d;
    double dist = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = x[c] - query[c];
      dist += diff * diff;
    }
    if (heap.size() < model.k) {
      heap.emplace_back(dist, r);
      std::push_heap(heap.begin(), heap.end());
    } else if (dist < heap.front().first) {
      // Equal distances never displace: the earlier row has the lower index.
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {dist, r};
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort_heap(heap.begin(), heap.end());
}

}  // namespace

std::vector<std::size_t> knn_neighbors(const KnnModel& model,
                                       std::span<const double> query) {
  if (query.size() != model.train.cols) {
    throw LayoutError("knn_neighbors: query width differs from training");
  }
  std::vector<Candidate> heap;
  heap.reserve(model.k);
  nearest(model, query, heap);
  std::vector<std::size_t> out;
  out.reserve(heap.size());
  for (const auto& c : heap) out.push_back(c.second);
  return out;
}

std::vector<double> knn_predict_proba(const KnnModel& model,
                                      const EncodedMatrix& standardized) {
  if (!(standardized.layout == model.train.layout)) {
    throw LayoutError("knn_predict_proba: matrix layout differs from training");
  }
  require_imputed(standardized, "knn_predict_proba");
  std::vector<double> out(standardized.rows);
  const std::size_t block = 64;
  const std::size_t blocks = (standardized.rows + block - 1) / block;
  parallel_for(blocks, [&](std::size_t b) {
    std::vector<Candidate> heap;
    heap.reserve(model.k);
    const std::size_t end = std::min(standardized.rows, (b + 1) * block);
    for (std::size_t r = b * block; r < end; ++r) {
      nearest(model, standardized.row(r), heap);
      std::size_t positives = 0;
      for (const auto& c : heap) positives += static_cast<std::size_t>(model.labels[c.second]);
      out[r] = static_cast<double>(positives) / static_cast<double>(model.k);
    }
  });
  return out;
}

}  // namespace arx
