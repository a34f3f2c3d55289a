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

#ifndef ARX_PIPELINE_H_
#define ARX_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arx/baselines.h"
#include "arx/dataset.h"
#include "arx/forest.h"
#include "arx/gradient_boosting.h"
#include "arx/knn.h"
#include "arx/preprocess.h"

namespace arx {

enum class ModelKind { kGradientBoosting, kRandomForest, kKnn, kBuurman, kProfund };

// Short names used on the command line and in files: gbc, rf, knn, buurman,
// profund.
std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);
std::vector<std::string> supported_model_kinds();

// Kind plus hyperparameters for every kind; only the selected kind's block is
// used.
struct ModelSpec {
  ModelKind kind = ModelKind::kGradientBoosting;
  BoostingParams boosting;
  ForestParams forest;
  std::size_t knn_k = 5;
  ProfundTable profund = default_profund_table();
};

// Encoder, imputer, optional standardizer and learner, fitted together on one
// set of training rows, plus the decision threshold.
struct Pipeline {
  CohortSchema schema = default_schema();
  ModelSpec spec;
  Encoder encoder;
  Imputer imputer;
  std::optional<Standardizer> standardizer;
  std::variant<GradientBoostedEnsemble, RandomForestEnsemble, KnnModel,
               BuurmanModel, ProfundTable>
      model;
  double threshold = 0.5;
  std::uint64_t seed = 0;

  ModelKind kind() const { return spec.kind; }
  bool supports_importance() const {
    return kind() == ModelKind::kGradientBoosting || kind() == ModelKind::kRandomForest;
  }

  std::vector<double> score(const Cohort& cohort) const;
  std::vector<double> score(std::span<const PatientRecord> records) const;
  // Throws Error for kinds without split-based importance.
  std::vector<FeatureImportance> importance() const;
};

// Fits every stage on the train rows only. Throws FitError for single-class
// training labels.
Pipeline fit_pipeline(const Cohort& cohort, std::span<const std::size_t> train_rows,
                      const ModelSpec& spec, std::uint64_t seed);

}  // namespace arx

#endif  // ARX_PIPELINE_H_
