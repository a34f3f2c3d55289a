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

#ifndef ARX_PERSIST_H_
#define ARX_PERSIST_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arx/dataset.h"
#include "arx/eval.h"
#include "arx/pipeline.h"

namespace arx {

// Container shared by model bundles and evaluation reports, written as one
// JSON object with the fields in this order:
//   format_version, kind, created_utc, checksum, payload
// The checksum is "crc32:" plus eight hex digits, computed over the file
// bytes with those eight digits set to '0'.
inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kReportKind = "evaluation_report";

struct BundleMetadata {
  int format_version = kFormatVersion;
  std::uint64_t seed = 0;
  std::string cohort_fingerprint;
  std::string created_utc;  // RFC 3339, UTC
};

struct ModelBundle {
  Pipeline pipeline;
  BundleMetadata metadata;
};

// Readable without deserializing the payload. kind is a model kind name or
// kReportKind.
struct FileHeader {
  int format_version = 0;
  std::string kind;
  std::string created_utc;  // empty when the file carries no creation time
  std::string checksum;
};

// crc32 of the cohort's canonical CSV form, as 8 hex digits.
std::string cohort_fingerprint(const Cohort& cohort);

// RFC 3339 UTC time. Honors SOURCE_DATE_EPOCH when it is set.
std::string utc_timestamp();

ModelBundle make_bundle(Pipeline pipeline, const Cohort& training_cohort);

std::string serialize_model(const ModelBundle& bundle);
// Verifies the checksum first, then the format version. Throws
// ChecksumError, VersionMismatchError or FormatError.
ModelBundle parse_model(std::string_view text);
void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

FileHeader parse_header(std::string_view text);
FileHeader peek_header(const std::filesystem::path& path);

// Per-repetition timings and the creation time are nondeterministic and are
// only written when include_timings is set; otherwise created_utc is null and
// the file is a pure function of the reports.
std::string serialize_reports(std::span<const EvaluationReport> reports,
                              bool include_timings = false);
std::vector<EvaluationReport> parse_reports(std::string_view text);
void save_report(const EvaluationReport& report, const std::filesystem::path& path,
                 bool include_timings = false);
void save_reports(std::span<const EvaluationReport> reports,
                  const std::filesystem::path& path, bool include_timings = false);
EvaluationReport load_report(const std::filesystem::path& path);
std::vector<EvaluationReport> load_reports(const std::filesystem::path& path);

// Recomputes the checksum of an edited container.
std::string reseal(std::string_view text);

}  // namespace arx

#endif  // ARX_PERSIST_H_
