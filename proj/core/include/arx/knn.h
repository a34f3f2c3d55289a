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

#ifndef ARX_KNN_H_
#define ARX_KNN_H_

#include <cstddef>
#include <span>
#include <vector>

#include "arx/dataset.h"

namespace arx {

// Exact Euclidean k-nearest-neighbours over a standardized training matrix.
struct KnnModel {
  std::size_t k = 5;
  EncodedMatrix train;  // standardized, no missing cells
  std::vector<int> labels;
};

// Throws FitError when k is 0 or exceeds the training rows.
KnnModel fit_knn(const EncodedMatrix& standardized, std::span<const int> labels,
                 std::size_t k);

// Indices of the k nearest training rows, nearest first. Distance ties are
// broken by the lower training-row index.
std::vector<std::size_t> knn_neighbors(const KnnModel& model,
                                       std::span<const double> query);

// Fraction of positive labels among the k nearest neighbours.
std::vector<double> knn_predict_proba(const KnnModel& model,
                                      const EncodedMatrix& standardized);

}  // namespace arx

#endif  // ARX_KNN_H_
