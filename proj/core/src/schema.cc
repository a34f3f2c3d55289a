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

#include "arx/schema.h"

#include <cmath>
#include <limits>

#include "arx/error.h"

namespace arx {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kCategorical:
      return "categorical";
    case FeatureKind::kBoolean:
      return "boolean";
    case FeatureKind::kInteger:
      return "integer";
    case FeatureKind::kReal:
      return "real";
  }
  return "unknown";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view text) {
  if (text == "categorical") return FeatureKind::kCategorical;
  if (text == "boolean") return FeatureKind::kBoolean;
  if (text == "integer") return FeatureKind::kInteger;
  if (text == "real") return FeatureKind::kReal;
  return std::nullopt;
}

CohortSchema::CohortSchema(std::vector<FeatureSpec> features,
                           std::string target_name)
    : features_(std::move(features)), target_name_(std::move(target_name)) {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const std::string& name = features_[i].name;
    if (name.empty()) throw ConfigError("schema feature with empty name");
    if (!index_.emplace(name, i).second) {
      throw ConfigError("duplicate feature name in schema: " + name);
    }
  }
  if (target_name_.empty()) throw ConfigError("schema target name is empty");
}

std::optional<std::size_t> CohortSchema::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CohortSchema::require_index(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) throw ConfigError("unknown feature: " + std::string(name));
  return *idx;
}

bool operator==(const CohortSchema& a, const CohortSchema& b) {
  if (a.target_name_ != b.target_name_) return false;
  if (a.features_.size() != b.features_.size()) return false;
  for (std::size_t i = 0; i < a.features_.size(); ++i) {
    const auto& x = a.features_[i];
    const auto& y = b.features_[i];
    if (x.name != y.name || x.kind != y.kind || x.units != y.units ||
        x.missing_allowed != y.missing_allowed || x.label != y.label) {
      return false;
    }
  }
  return true;
}

namespace {

CohortSchema build_default_schema() {
  using K = FeatureKind;
  auto f = [](std::string name, K kind, std::string label,
              std::string units = "", bool missing = false) {
    return FeatureSpec{std::move(name), kind, std::move(units), missing,
                       std::move(label)};
  };
  auto flag = [&](std::string name, std::string label) {
    return f(std::move(name), K::kBoolean, std::move(label));
  };
  std::vector<FeatureSpec> features = {
      f("Sex", K::kCategorical, "Sex"),
      f("Age", K::kInteger, "Age"),
      f("UrgentAdmission", K::kBoolean, "Urgent Admission"),
      f("AdmissionDestination", K::kCategorical, "Admission Destination"),
      f("Service", K::kCategorical, "Service"),
      f("AdmissionCause", K::kCategorical, "Admission Cause"),
      f("PrevStays", K::kInteger, "Prev. Stays"),
      f("Barthel", K::kInteger, "Barthel Test", "", true),
      f("PrevAdmissions", K::kInteger, "Prev. Admissions"),
      f("PrevEmergencyRoom", K::kInteger, "Prev. Emergency Room"),
      f("Charlson", K::kInteger, "Charlson Score"),
      f("Albumin", K::kReal, "Albumin", "g/dL", true),
      f("Creatinine", K::kReal, "Creatinine", "mg/dL", true),
      f("Hemoglobin", K::kReal, "Hemoglobin", "g/dL", true),
      f("Leucocytes", K::kReal, "Leucocytes", "Cel/mL", true),
      f("PCR", K::kReal, "PCR", "mg/L", true),
      f("Sodium", K::kReal, "Sodium", "mEq/L", true),
      f("Urea", K::kReal, "Urea", "mg/dL", true),
      flag("AcuteMyocardialInfarction", "Acute Myocardial Infarction"),
      flag("CongestiveHeartFailure", "Congestive Heart Failure"),
      flag("PeripheralVascularDisease", "Peripheral Vascular Disease"),
      flag("CerebrovascularDisease", "Cerebrovascular Disease"),
      flag("Dementia", "Dementia"),
      flag("ChronicPulmonaryDisease", "Chronic Pulmonary Disease"),
      flag("RheumaticDisease", "Rheumatic Disease"),
      flag("PepticUlcerDisease", "Peptic Ulcer Disease"),
      flag("MildLiverDisease", "Mild Liver Disease"),
      flag("DiabetesWithoutComplications", "Diabetes Without Complications"),
      flag("DiabetesWithComplications", "Diabetes With Complications"),
      flag("HemiplegiaParaplegia", "Hemiplegia Paraplegia"),
      flag("RenalDisease", "Renal Disease"),
      flag("Malignancy", "Malignancy"),
      flag("ModerateSevereLiverDisease", "Moderate Severe Liver Disease"),
      flag("Metastasis", "Metastasis"),
      flag("AIDS", "AIDS"),
      flag("Delirium", "Delirium"),
  };
  return CohortSchema(std::move(features), "exitus_1y");
}

// Returns an empty string when the value conforms to the kind.
std::string check_kind(const FeatureValue& value, FeatureKind kind) {
  if (kind == FeatureKind::kCategorical) {
    const auto* s = std::get_if<std::string>(&value);
    if (s == nullptr) return "expected a categorical code";
    if (s->empty()) return "empty categorical code";
    return "";
  }
  const auto* d = std::get_if<double>(&value);
  if (d == nullptr) {
    return "expected a " + std::string(to_string(kind)) + " value, got text '" +
           std::get<std::string>(value) + "'";
  }
  if (!std::isfinite(*d)) return "non-finite value";
  switch (kind) {
    case FeatureKind::kBoolean:
      if (*d != 0.0 && *d != 1.0) return "boolean must be 0 or 1";
      break;
    case FeatureKind::kInteger:
      if (*d != std::floor(*d)) return "expected an integer";
      break;
    default:
      break;
  }
  return "";
}

}  // namespace

const CohortSchema& default_schema() {
  static const CohortSchema schema = build_default_schema();
  return schema;
}

ValidationResult validate_record(const PatientRecord& record,
                                 const CohortSchema& schema) {
  ValidationResult result;
  if (record.values.size() != schema.size()) {
    result.violations.push_back(
        {"", "record has " + std::to_string(record.values.size()) +
                 " values, schema has " + std::to_string(schema.size())});
    return result;
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const FeatureSpec& spec = schema.feature(i);
    const FeatureValue& value = record.values[i];
    if (is_missing(value)) {
      if (!spec.missing_allowed) {
        result.violations.push_back({spec.name, "missing value not allowed"});
      }
      continue;
    }
    std::string problem = check_kind(value, spec.kind);
    if (!problem.empty()) result.violations.push_back({spec.name, problem});
  }
  if (record.outcome && *record.outcome != 0 && *record.outcome != 1) {
    result.violations.push_back(
        {schema.target_name(), "outcome must be 0 or 1"});
  }
  return result;
}

std::vector<FeatureSummary> summarize(std::span<const PatientRecord> cohort,
                                      const CohortSchema& schema) {
  if (cohort.empty()) throw DataError("cannot summarize an empty cohort");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<FeatureSummary> out;
  out.reserve(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const FeatureSpec& spec = schema.feature(j);
    FeatureSummary s;
    s.name = spec.name;
    s.kind = spec.kind;
    double sum = 0.0;
    std::vector<double> numbers;
    for (const PatientRecord& r : cohort) {
      if (j >= r.values.size() || is_missing(r.values[j])) {
        ++s.missing;
        continue;
      }
      const FeatureValue& v = r.values[j];
      if (!check_kind(v, spec.kind).empty()) continue;
      ++s.present;
      if (spec.kind == FeatureKind::kCategorical) {
        ++s.levels[std::get<std::string>(v)];
      } else {
        numbers.push_back(std::get<double>(v));
        sum += numbers.back();
      }
    }
    if (spec.kind != FeatureKind::kCategorical) {
      const double n = static_cast<double>(numbers.size());
      s.mean = numbers.empty() ? nan : sum / n;
      if (numbers.size() >= 2) {
        double ss = 0.0;
        for (double x : numbers) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / (n - 1.0));
      } else {
        s.sd = nan;
      }
      if (spec.kind == FeatureKind::kBoolean) {
        s.positive_rate = numbers.empty() ? nan : s.mean;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace arx
