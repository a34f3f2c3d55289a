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

#ifndef ARX_DATASET_H_
#define ARX_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arx/schema.h"

namespace arx {

// Reserved CSV columns besides the schema features.
inline constexpr std::string_view kPatientIdColumn = "patient_id";
inline constexpr std::string_view kEpisodeIdColumn = "episode_id";

struct Cohort {
  CohortSchema schema;
  std::vector<PatientRecord> records;

  std::size_t size() const { return records.size(); }
  bool has_labels() const;                 // every record carries an outcome
  std::vector<int> labels() const;         // throws DataError if unlabeled
};

struct RowError {
  std::size_t row = 0;   // 1-based data row (the header is not counted)
  std::size_t line = 0;  // 1-based line in the source text
  std::string column;    // empty when the problem is not cell-specific
  std::string message;
  std::string episode_id;
  std::string raw;       // the offending row, re-joined as CSV

  std::string describe() const;
};

struct CsvLoadResult {
  Cohort cohort;
  std::vector<RowError> rejected;
};

// Strict loaders: the first malformed row raises a DataError that cites the
// data row number and column.
Cohort load_csv(const std::filesystem::path& path, const CohortSchema& schema);
Cohort parse_cohort_csv(std::string_view text, const CohortSchema& schema);

// Lenient variant for batch scoring: malformed rows are collected instead of
// aborting. Header problems still throw.
CsvLoadResult load_csv_lenient(const std::filesystem::path& path,
                               const CohortSchema& schema);
CsvLoadResult parse_cohort_csv_lenient(std::string_view text,
                                       const CohortSchema& schema);

// Header: patient_id, episode_id, features in schema order, target (only when
// every record is labeled).
std::string to_csv(const Cohort& cohort);
void write_csv(const Cohort& cohort, const std::filesystem::path& path);

// Keeps one uniformly chosen episode per patient_id. Patients appear in order
// of first occurrence.
Cohort one_episode_per_patient(const Cohort& cohort, std::uint64_t seed);

Cohort subset(const Cohort& cohort, std::span<const std::size_t> rows);

// --- Encoding ---------------------------------------------------------------

// Contiguous output columns produced for one source feature.
struct ColumnBlock {
  std::string feature;
  FeatureKind kind = FeatureKind::kReal;
  std::size_t first = 0;
  std::size_t width = 1;
  std::vector<std::string> categories;  // categorical only, sorted

  friend bool operator==(const ColumnBlock&, const ColumnBlock&) = default;
};

struct ColumnLayout {
  std::vector<ColumnBlock> blocks;
  std::size_t columns = 0;

  std::vector<std::string> column_names() const;
  // Index into blocks for every output column.
  std::vector<std::size_t> block_of_columns() const;

  friend bool operator==(const ColumnLayout&, const ColumnLayout&) = default;
};

struct EncodedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;      // row-major, rows * cols
  std::vector<std::uint8_t> mask;  // 1 exactly where the source was missing
  std::optional<std::vector<int>> labels;
  ColumnLayout layout;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  bool is_missing(std::size_t r, std::size_t c) const {
    return mask[r * cols + c] != 0;
  }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
  std::size_t missing_count() const;

  // Keeps the given rows, in the given order.
  EncodedMatrix select_rows(std::span<const std::size_t> rows) const;
};

// One-hot for categoricals (vocabulary observed in the fitted rows, sorted
// lexically), a single 0/1 column for booleans and a passthrough column for
// numeric features. Categories not in the vocabulary encode to all zeros.
class Encoder {
 public:
  Encoder() = default;
  Encoder(ColumnLayout layout, std::vector<std::size_t> schema_indices);

  const ColumnLayout& layout() const { return layout_; }
  std::size_t columns() const { return layout_.columns; }
  // Schema position of each block's feature.
  const std::vector<std::size_t>& schema_indices() const {
    return schema_indices_;
  }

  EncodedMatrix encode(const Cohort& cohort) const;
  EncodedMatrix encode(std::span<const PatientRecord> records,
                       const CohortSchema& schema) const;

 private:
  ColumnLayout layout_;
  std::vector<std::size_t> schema_indices_;
};

// Fits on every record. Throws DataError on an empty cohort.
Encoder fit_encoder(const Cohort& cohort);
// Fits on the given rows only, optionally restricted to a feature subset
// (schema order is kept).
Encoder fit_encoder(const Cohort& cohort, std::span<const std::size_t> rows,
                    std::span<const std::string> features = {});

EncodedMatrix encode(const Cohort& cohort, const Encoder& encoder);

// --- Splitting --------------------------------------------------------------

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::uint64_t seed = 0;
};

// Stratified hold-out. The minority class contributes round(count * fraction)
// test rows (round half up); the majority class takes the remainder of
// round(n * fraction) so totals are exact. Throws DataError unless both
// classes are present and 0 < test_fraction < 1.
SplitIndices stratified_split(std::span<const int> labels, double test_fraction,
                              std::uint64_t seed);

}  // namespace arx

#endif  // ARX_DATASET_H_
