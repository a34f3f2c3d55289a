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

#include "arx/preprocess.h"

#include <algorithm>
#include <cmath>

#include "arx/error.h"

namespace arx {

namespace {

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return (lower + upper) / 2.0;
}

void check_layout(const ColumnLayout& fitted, const EncodedMatrix& m,
                  const char* what) {
  if (!(fitted == m.layout) || m.cols != fitted.columns) {
    throw LayoutError(std::string(what) +
                      ": matrix column layout differs from the fitted layout");
  }
}

}  // namespace

Imputer fit_imputer(const EncodedMatrix& m, std::span<const std::size_t> rows) {
  if (rows.empty()) throw DataError("cannot fit an imputer on zero rows");
  Imputer imp;
  imp.layout = m.layout;
  imp.column_fill.assign(m.cols, 0.0);
  imp.block_mode.assign(m.layout.blocks.size(), "");
  std::vector<double> observed;
  observed.reserve(rows.size());
  for (std::size_t b = 0; b < m.layout.blocks.size(); ++b) {
    const ColumnBlock& block = m.layout.blocks[b];
    if (block.kind == FeatureKind::kCategorical) {
      if (block.width == 0) continue;
      std::vector<std::size_t> counts(block.width, 0);
      std::size_t present = 0;
      for (std::size_t r : rows) {
        if (m.is_missing(r, block.first)) continue;
        ++present;
        for (std::size_t k = 0; k < block.width; ++k) {
          if (m.at(r, block.first + k) == 1.0) ++counts[k];
        }
      }
      if (present == 0) {
        throw DataError("feature " + block.feature +
                        " is missing in every training row");
      }
      // max_element returns the first maximum: lowest (lexical) category.
      const std::size_t mode = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      imp.column_fill[block.first + mode] = 1.0;
      imp.block_mode[b] = block.categories[mode];
      continue;
    }
    const std::size_t c = block.first;
    observed.clear();
    for (std::size_t r : rows) {
      if (!m.is_missing(r, c)) observed.push_back(m.at(r, c));
    }
    if (observed.empty()) {
      throw DataError("feature " + block.feature +
                      " is missing in every training row");
    }
    imp.column_fill[c] = median_of(observed);
  }
  imp.fitted = true;
  return imp;
}

Imputer fit_imputer(const EncodedMatrix& m) {
  std::vector<std::size_t> all(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) all[i] = i;
  return fit_imputer(m, all);
}

EncodedMatrix apply_imputer(const EncodedMatrix& m, const Imputer& imputer) {
  if (!imputer.fitted) throw LayoutError("imputer is not fitted");
  check_layout(imputer.layout, m, "apply_imputer");
  EncodedMatrix out = m;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.mask[i]) {
      out.values[i] = imputer.column_fill[i % out.cols];
      out.mask[i] = 0;
    }
  }
  return out;
}

Standardizer fit_standardizer(const EncodedMatrix& m,
                              std::span<const std::size_t> rows) {
  if (rows.empty()) throw DataError("cannot fit a standardizer on zero rows");
  Standardizer s;
  s.layout = m.layout;
  s.mean.assign(m.cols, 0.0);
  s.sd.assign(m.cols, 0.0);
  const double n = static_cast<double>(rows.size());
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < m.cols; ++c) s.mean[c] += m.at(r, c);
  }
  for (double& v : s.mean) v /= n;
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double d = m.at(r, c) - s.mean[c];
      s.sd[c] += d * d;
    }
  }
  for (double& v : s.sd) v = std::sqrt(v / n);
  s.fitted = true;
  return s;
}

EncodedMatrix apply_standardizer(const EncodedMatrix& m, const Standardizer& s) {
  if (!s.fitted) throw LayoutError("standardizer is not fitted");
  check_layout(s.layout, m, "apply_standardizer");
  EncodedMatrix out = m;
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      out.at(r, c) = (out.at(r, c) - s.mean[c]) / s.scale(c);
    }
  }
  return out;
}

EncodedMatrix invert_standardizer(const EncodedMatrix& m, const Standardizer& s) {
  if (!s.fitted) throw LayoutError("standardizer is not fitted");
  check_layout(s.layout, m, "invert_standardizer");
  EncodedMatrix out = m;
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      out.at(r, c) = out.at(r, c) * s.scale(c) + s.mean[c];
    }
  }
  return out;
}

}  // namespace arx
