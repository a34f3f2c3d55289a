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

#include "arx/options.h"

#include <sstream>

#include "arx/baselines.h"
#include "arx/csv.h"
#include "arx/error.h"
#include "json.hpp"

namespace arx::cli {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void apply_model_blocks(const json& j, ModelSpec& spec,
                        const std::filesystem::path& base_dir) {
  if (j.contains("boosting")) {
    const json& b = j["boosting"];
    spec.boosting.n_trees = b.value("n_trees", spec.boosting.n_trees);
    spec.boosting.learning_rate = b.value("learning_rate", spec.boosting.learning_rate);
    spec.boosting.max_depth = b.value("max_depth", spec.boosting.max_depth);
    spec.boosting.min_samples_leaf =
        b.value("min_samples_leaf", spec.boosting.min_samples_leaf);
  }
  if (j.contains("forest")) {
    const json& f = j["forest"];
    spec.forest.n_trees = f.value("n_trees", spec.forest.n_trees);
    if (f.contains("max_depth")) {
      spec.forest.max_depth =
          f["max_depth"].is_null() ? kUnlimitedDepth : f["max_depth"].get<int>();
    }
    spec.forest.min_samples_leaf = f.value("min_samples_leaf", spec.forest.min_samples_leaf);
    if (f.contains("n_candidate_features")) {
      const json& k = f["n_candidate_features"];
      if (k.is_string() && k.get<std::string>() == "all") {
        spec.forest.n_candidate_features = kAllFeatures;
      } else if (k.is_string() && k.get<std::string>() == "sqrt") {
        spec.forest.n_candidate_features = 0;
      } else {
        spec.forest.n_candidate_features = k.get<std::size_t>();
      }
    }
    spec.forest.bootstrap = f.value("bootstrap", spec.forest.bootstrap);
  }
  if (j.contains("knn")) spec.knn_k = j["knn"].value("k", spec.knn_k);
  if (j.contains("profund_table")) {
    std::filesystem::path table = j["profund_table"].get<std::string>();
    if (table.is_relative()) table = base_dir / table;
    spec.profund = load_profund_table(table);
  }
}

template <typename Fn>
auto config_guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

ModelKind require_model_kind(std::string_view name) {
  if (auto kind = parse_model_kind(name)) return *kind;
  std::string list;
  for (const std::string& k : supported_model_kinds()) {
    list += list.empty() ? k : ", " + k;
  }
  throw UsageError("unknown model kind '" + std::string(name) + "' (supported: " + list +
                   ")");
}

std::vector<ModelKind> parse_model_list(std::string_view comma_separated) {
  std::vector<ModelKind> out;
  std::stringstream in{std::string(comma_separated)};
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(require_model_kind(item));
  }
  if (out.empty()) throw UsageError("empty model list");
  return out;
}

ModelSpec parse_model_spec(std::string_view json_text, ModelKind kind,
                           const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text, "model config");
  return config_guard("model config", [&] {
    ModelSpec spec;
    spec.kind = kind;
    apply_model_blocks(j, spec, base_dir);
    return spec;
  });
}

ModelSpec load_model_spec(const std::filesystem::path& path, ModelKind kind) {
  return parse_model_spec(read_text_file(path), kind, path.parent_path());
}

EvaluateSettings parse_evaluate_settings(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text, "evaluation config");
  return config_guard("evaluation config", [&] {
    EvaluateSettings s;
    EvalConfig& c = s.base;
    c.repetitions = j.value("repetitions", c.repetitions);
    c.test_fraction = j.value("test_fraction", c.test_fraction);
    c.seed = j.value("seed", c.seed);
    if (j.contains("threshold_mode")) {
      const std::string mode = j["threshold_mode"].get<std::string>();
      const auto parsed = parse_threshold_mode(mode);
      if (!parsed) {
        throw ConfigError("evaluation config: unknown threshold_mode '" + mode +
                          "' (expected fixed, calibration or per-repetition)");
      }
      c.threshold_mode = *parsed;
    }
    c.fixed_threshold = j.value("fixed_threshold", c.fixed_threshold);
    if (j.contains("models")) {
      s.models.clear();
      for (const auto& m : j["models"]) s.models.push_back(require_model_kind(m.get<std::string>()));
    }
    apply_model_blocks(j, c.model, base_dir);
    validate(c);
    return s;
  });
}

EvaluateSettings load_evaluate_settings(const std::filesystem::path& path) {
  return parse_evaluate_settings(read_text_file(path), path.parent_path());
}

}  // namespace arx::cli
