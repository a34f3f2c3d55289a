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

#ifndef ARX_PREPROCESS_H_
#define ARX_PREPROCESS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "arx/dataset.h"

namespace arx {

// Replacement statistics learned from training rows only. Numeric and
// boolean columns use the median of the observed cells; a missing
// categorical block is filled with the one-hot code of the block's mode.
struct Imputer {
  ColumnLayout layout;
  std::vector<double> column_fill;      // value written into a masked cell
  std::vector<std::string> block_mode;  // per block; empty for non-categorical
  bool fitted = false;

  friend bool operator==(const Imputer&, const Imputer&) = default;
};

// Throws DataError when rows is empty or a column has no observed value
// among the rows.
Imputer fit_imputer(const EncodedMatrix& m, std::span<const std::size_t> rows);
Imputer fit_imputer(const EncodedMatrix& m);

// Returns a copy with every masked cell filled and the mask cleared. Throws
// LayoutError when the matrix layout differs from the fitted one.
EncodedMatrix apply_imputer(const EncodedMatrix& m, const Imputer& imputer);

inline constexpr double kStandardizerSdFloor = 1e-12;

// Column-wise z-scoring with the population SD; the SD is floored so that
// constant columns map to zero.
struct Standardizer {
  ColumnLayout layout;
  std::vector<double> mean;
  std::vector<double> sd;
  double sd_floor = kStandardizerSdFloor;
  bool fitted = false;

  double scale(std::size_t c) const { return sd[c] > sd_floor ? sd[c] : sd_floor; }

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

Standardizer fit_standardizer(const EncodedMatrix& m,
                              std::span<const std::size_t> rows);
EncodedMatrix apply_standardizer(const EncodedMatrix& m, const Standardizer& s);
EncodedMatrix invert_standardizer(const EncodedMatrix& m, const Standardizer& s);

}  // namespace arx

#endif  // ARX_PREPROCESS_H_
