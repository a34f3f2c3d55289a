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

#include "arx/pipeline.h"

#include <algorithm>

#include "arx/error.h"

namespace arx {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGradientBoosting:
      return "gbc";
    case ModelKind::kRandomForest:
      return "rf";
    case ModelKind::kKnn:
      return "knn";
    case ModelKind::kBuurman:
      return "buurman";
    case ModelKind::kProfund:
      return "profund";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::kGradientBoosting, ModelKind::kRandomForest,
                      ModelKind::kKnn, ModelKind::kBuurman, ModelKind::kProfund}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::vector<std::string> supported_model_kinds() {
  return {"gbc", "rf", "knn", "buurman", "profund"};
}

namespace {

std::vector<std::string> buurman_feature_names() {
  return {kBuurmanFeatures.begin(), kBuurmanFeatures.end()};
}

}  // namespace

Pipeline fit_pipeline(const Cohort& cohort, std::span<const std::size_t> train_rows,
                      const ModelSpec& spec, std::uint64_t seed) {
  if (train_rows.empty()) throw FitError("fit_pipeline: no training rows");
  Pipeline p;
  p.schema = cohort.schema;
  p.spec = spec;
  p.seed = seed;

  std::vector<int> labels;
  labels.reserve(train_rows.size());
  for (std::size_t r : train_rows) {
    const auto& outcome = cohort.records.at(r).outcome;
    if (!outcome) throw DataError("fit_pipeline: training record without outcome");
    labels.push_back(*outcome);
  }
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_pos || !has_neg) {
    throw FitError("fit_pipeline: training labels contain a single class");
  }

  if (spec.kind == ModelKind::kProfund) {
    check_profund_table(spec.profund, cohort.schema);
    p.model = spec.profund;
    return p;
  }

  const std::vector<std::string> features =
      spec.kind == ModelKind::kBuurman ? buurman_feature_names()
                                       : std::vector<std::string>{};
  p.encoder = fit_encoder(cohort, train_rows, features);
  const Cohort train = subset(cohort, train_rows);
  const EncodedMatrix raw = p.encoder.encode(train);
  p.imputer = fit_imputer(raw);
  EncodedMatrix x = apply_imputer(raw, p.imputer);

  switch (spec.kind) {
    case ModelKind::kGradientBoosting:
      p.model = fit_gradient_boosting(x, labels, spec.boosting, seed);
      break;
    case ModelKind::kRandomForest:
      p.model = fit_random_forest(x, labels, spec.forest, seed);
      break;
    case ModelKind::kKnn: {
      std::vector<std::size_t> all(x.rows);
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      p.standardizer = fit_standardizer(x, all);
      p.model = fit_knn(apply_standardizer(x, *p.standardizer), labels, spec.knn_k);
      break;
    }
    case ModelKind::kBuurman:
      p.model = fit_buurman(x, labels);
      break;
    case ModelKind::kProfund:
      break;
  }
  return p;
}

std::vector<double> Pipeline::score(const Cohort& cohort) const {
  if (!(cohort.schema == schema)) {
    throw LayoutError("cohort schema differs from the schema the model was trained on");
  }
  return score(cohort.records);
}

std::vector<double> Pipeline::score(std::span<const PatientRecord> records) const {
  if (const auto* table = std::get_if<ProfundTable>(&model)) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const PatientRecord& r : records) {
      out.push_back(static_cast<double>(profund_score(r, *table, schema)));
    }
    return out;
  }
  EncodedMatrix x = apply_imputer(encoder.encode(records, schema), imputer);
  if (const auto* gb = std::get_if<GradientBoostedEnsemble>(&model)) {
    return gb_predict_proba(*gb, x);
  }
  if (const auto* rf = std::get_if<RandomForestEnsemble>(&model)) {
    return rf_predict_proba(*rf, x);
  }
  if (const auto* knn = std::get_if<KnnModel>(&model)) {
    if (!standardizer) throw LayoutError("knn pipeline without a standardizer");
    return knn_predict_proba(*knn, apply_standardizer(x, *standardizer));
  }
  return buurman_predict(std::get<BuurmanModel>(model), x);
}

std::vector<FeatureImportance> Pipeline::importance() const {
  if (const auto* gb = std::get_if<GradientBoostedEnsemble>(&model)) {
    return gini_importance(*gb);
  }
  if (const auto* rf = std::get_if<RandomForestEnsemble>(&model)) {
    return gini_importance(*rf);
  }
  throw Error("model kind " + std::string(to_string(spec.kind)) +
              " does not provide split-based importance");
}

}  // namespace arx
