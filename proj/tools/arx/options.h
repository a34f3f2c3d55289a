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

#ifndef ARX_TOOLS_OPTIONS_H_
#define ARX_TOOLS_OPTIONS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "arx/eval.h"
#include "arx/pipeline.h"

namespace arx::cli {

// Model hyperparameters read from JSON:
//   {"boosting": {...}, "forest": {...}, "knn": {"k": 5},
//    "profund_table": "profund.cfg"}
// Every block is optional. Relative table paths resolve against base_dir.
ModelSpec parse_model_spec(std::string_view json_text, ModelKind kind,
                           const std::filesystem::path& base_dir);
ModelSpec load_model_spec(const std::filesystem::path& path, ModelKind kind);

// Evaluation settings plus the model list:
//   {"repetitions": 100, "test_fraction": 0.2, "seed": 0,
//    "threshold_mode": "calibration", "fixed_threshold": 0.5,
//    "models": ["gbc", ...], <model hyperparameter blocks>}
struct EvaluateSettings {
  EvalConfig base;                 // base.model.kind is ignored
  std::vector<ModelKind> models = {ModelKind::kGradientBoosting};
};

EvaluateSettings parse_evaluate_settings(std::string_view json_text,
                                         const std::filesystem::path& base_dir);
EvaluateSettings load_evaluate_settings(const std::filesystem::path& path);

// Throws UsageError listing the supported kinds.
ModelKind require_model_kind(std::string_view name);
std::vector<ModelKind> parse_model_list(std::string_view comma_separated);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arx::cli

#endif  // ARX_TOOLS_OPTIONS_H_
