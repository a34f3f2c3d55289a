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

#ifndef ARX_TOOLS_COMMANDS_H_
#define ARX_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "arx/eval.h"

namespace arx::cli {

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

// Parses argv and runs the selected subcommand. Never throws.
int run(int argc, char** argv);

// Console tables.
std::string format_estimate(const MetricSummary& m);  // "0.911 [0.911, 0.912]"
std::string evaluation_table(std::span<const EvaluationReport> reports);
// Percentages rounded to two decimals by largest remainder, so the printed
// column sums to exactly 100.00.
std::vector<ImportanceRow> round_importance(std::vector<ImportanceRow> rows);
std::string importance_table(std::span<const ImportanceRow> rows);

}  // namespace arx::cli

#endif  // ARX_TOOLS_COMMANDS_H_
