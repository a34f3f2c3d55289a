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

#ifndef ARX_TOOLS_SCORER_H_
#define ARX_TOOLS_SCORER_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>

#include "arx/persist.h"

namespace arx::cli {

// Batch scoring of admitted patients into an append-only JSON-lines log.
// Sidecars next to the log:
//   <log>.seen    episode ids already logged, one per line
//   <log>.errors  rejected input rows, one JSON object per line
//   <log>.lock    held with flock() while a scorer runs
struct ScorerOptions {
  std::filesystem::path bundle;
  std::filesystem::path input;  // a CSV file, or a directory of *.csv files
  std::filesystem::path log;
  bool watch = false;
  std::chrono::milliseconds interval{std::chrono::hours(24)};
  std::size_t max_cycles = 0;  // watch mode; 0 runs until interrupted
  bool quiet = false;
};

struct CycleStats {
  std::size_t scored = 0;
  std::size_t already_seen = 0;
  std::size_t rejected = 0;
};

std::filesystem::path seen_sidecar(const std::filesystem::path& log);
std::filesystem::path errors_sidecar(const std::filesystem::path& log);
std::filesystem::path lock_sidecar(const std::filesystem::path& log);

// Runs one cycle (or the watch loop). Throws DataError when another scorer
// holds the lock.
CycleStats run_scorer(const ScorerOptions& options);

}  // namespace arx::cli

#endif  // ARX_TOOLS_SCORER_H_
