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

#ifndef ARX_BASELINES_H_
#define ARX_BASELINES_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arx/dataset.h"
#include "arx/schema.h"

namespace arx {

// --- PROFUND point score ------------------------------------------------------

enum class ProfundOp { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual, kFlag };

std::string_view to_string(ProfundOp op);

struct ProfundItem {
  std::string name;
  std::string feature;
  ProfundOp op = ProfundOp::kFlag;
  std::string cutpoint;  // as written; numeric comparisons parse it
  int points = 0;

  friend bool operator==(const ProfundItem&, const ProfundItem&) = default;
};

struct ProfundTable {
  std::vector<ProfundItem> items;

  int max_points() const;
  friend bool operator==(const ProfundTable&, const ProfundTable&) = default;
};

// One item per line: `name, feature, op, cutpoint, points`. Blank lines and
// lines starting with '#' are ignored; `flag` items leave the cutpoint empty.
// Throws ConfigError citing the line number.
ProfundTable parse_profund_table(std::string_view text);
ProfundTable load_profund_table(const std::filesystem::path& path);
std::string to_text(const ProfundTable& table);

// Throws ConfigError when an item references a feature missing from the
// schema or applies an operator the feature kind does not support.
void check_profund_table(const ProfundTable& table, const CohortSchema& schema);

// False when the record's value is missing.
bool profund_item_satisfied(const ProfundItem& item, const PatientRecord& record,
                            const CohortSchema& schema);

// Sum of points over satisfied items.
int profund_score(const PatientRecord& record, const ProfundTable& table,
                  const CohortSchema& schema);

// The shipped table: the PROFUND items that admission data can express.
const ProfundTable& default_profund_table();

// --- Buurman-modified linear index -----------------------------------------

inline constexpr std::array<std::string_view, 4> kBuurmanFeatures = {
    "Barthel", "Charlson", "Malignancy", "Urea"};

// Ordinary least squares of the 0/1 one-year outcome on four admission
// features. Scores are the raw linear predictor.
struct BuurmanModel {
  double intercept = 0.0;
  std::array<double, 4> coefficients{};
  ColumnLayout layout;
  bool fitted = false;
};

// m must be imputed and hold exactly four columns. Throws FitError for fewer
// than five rows, constant targets or a rank-deficient design (naming the
// degenerate feature).
BuurmanModel fit_buurman(const EncodedMatrix& m, std::span<const double> targets);
BuurmanModel fit_buurman(const EncodedMatrix& m, std::span<const int> labels);

std::vector<double> buurman_predict(const BuurmanModel& model,
                                    const EncodedMatrix& m);

}  // namespace arx

#endif  // ARX_BASELINES_H_
