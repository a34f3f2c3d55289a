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

#ifndef ARX_SCHEMA_H_
#define ARX_SCHEMA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace arx {

enum class FeatureKind { kCategorical, kBoolean, kInteger, kReal };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view text);

inline bool is_numeric(FeatureKind kind) {
  return kind == FeatureKind::kInteger || kind == FeatureKind::kReal;
}

struct FeatureSpec {
  std::string name;            // identifier, also the CSV column header
  FeatureKind kind = FeatureKind::kReal;
  std::string units;           // empty when dimensionless
  bool missing_allowed = false;
  std::string label;           // human-readable name used in reports

  const std::string& display_name() const {
    return label.empty() ? name : label;
  }
};

// Ordered list of features plus the name of the binary target. Immutable.
class CohortSchema {
 public:
  // Throws ConfigError on duplicate or empty feature names.
  CohortSchema(std::vector<FeatureSpec> features, std::string target_name);

  const std::vector<FeatureSpec>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
  const std::string& target_name() const { return target_name_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  // Like index_of but throws ConfigError naming the unknown feature.
  std::size_t require_index(std::string_view name) const;

  friend bool operator==(const CohortSchema& a, const CohortSchema& b);

 private:
  std::vector<FeatureSpec> features_;
  std::string target_name_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// The 36 admission features (demographics, admission data, 7 laboratory
// values and 18 comorbidity flags) with target "exitus_1y".
const CohortSchema& default_schema();

// Missing, numeric (integer/real/boolean as 0/1) or categorical text code.
using FeatureValue = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const FeatureValue& v) {
  return std::holds_alternative<std::monostate>(v);
}

// One admission episode. values are aligned with the schema's feature order.
struct PatientRecord {
  std::string patient_id;
  std::string episode_id;
  std::vector<FeatureValue> values;
  std::optional<int> outcome;  // exitus within 365 days of admission
};

struct Violation {
  std::string feature;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate_record(const PatientRecord& record,
                                 const CohortSchema& schema);

struct FeatureSummary {
  std::string name;
  FeatureKind kind = FeatureKind::kReal;
  std::size_t present = 0;
  std::size_t missing = 0;
  // Integer/real: mean and sample SD (n - 1) over present values. NaN when
  // undefined (no values for the mean, fewer than two for the SD).
  double mean = 0.0;
  double sd = 0.0;
  // Boolean: fraction of present values equal to 1.
  double positive_rate = 0.0;
  // Categorical: count per observed level, ordered by level.
  std::map<std::string, std::size_t> levels;
};

// Per-feature cohort description. Values that do not match the feature kind
// are ignored. Throws DataError on an empty cohort.
std::vector<FeatureSummary> summarize(std::span<const PatientRecord> cohort,
                                      const CohortSchema& schema);

}  // namespace arx

#endif  // ARX_SCHEMA_H_
