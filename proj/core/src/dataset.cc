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

#include "arx/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "arx/csv.h"
#include "arx/error.h"
#include "arx/random.h"

namespace arx {

bool Cohort::has_labels() const {
  return std::all_of(records.begin(), records.end(),
                     [](const PatientRecord& r) { return r.outcome.has_value(); });
}

std::vector<int> Cohort::labels() const {
  std::vector<int> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].outcome) {
      throw DataError("record " + std::to_string(i + 1) + " (episode " +
                      records[i].episode_id + ") has no outcome label");
    }
    out.push_back(*records[i].outcome);
  }
  return out;
}

std::string RowError::describe() const {
  std::string out = "row " + std::to_string(row) + " (line " +
                    std::to_string(line) + ")";
  if (!column.empty()) out += ", column " + column;
  return out + ": " + message;
}

namespace {

struct HeaderMap {
  std::vector<std::optional<std::size_t>> feature_of_column;
  std::optional<std::size_t> patient_col;
  std::optional<std::size_t> episode_col;
  std::optional<std::size_t> target_col;
};

HeaderMap map_header(const std::vector<std::string>& header,
                     const CohortSchema& schema) {
  HeaderMap map;
  map.feature_of_column.resize(header.size());
  std::vector<bool> seen(schema.size(), false);
  std::set<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (!names.insert(name).second) {
      throw DataError("duplicate column in header: " + name);
    }
    if (name == kPatientIdColumn) {
      map.patient_col = c;
    } else if (name == kEpisodeIdColumn) {
      map.episode_col = c;
    } else if (name == schema.target_name()) {
      map.target_col = c;
    } else if (auto idx = schema.index_of(name)) {
      map.feature_of_column[c] = *idx;
      seen[*idx] = true;
    } else {
      throw DataError("unknown column in header: " + name);
    }
  }
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (!seen[j]) {
      throw DataError("missing column in header: " + schema.feature(j).name);
    }
  }
  return map;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(cells[i]);
  }
  return out;
}

// Parses one data row. On failure returns the error and leaves record unset.
std::optional<RowError> parse_row(const std::vector<std::string>& cells,
                                  std::size_t row, std::size_t line,
                                  const HeaderMap& map,
                                  const CohortSchema& schema,
                                  PatientRecord& record) {
  auto fail = [&](std::string column, std::string message) {
    RowError e;
    e.row = row;
    e.line = line;
    e.column = std::move(column);
    e.message = std::move(message);
    if (map.episode_col && *map.episode_col < cells.size()) {
      e.episode_id = cells[*map.episode_col];
    }
    e.raw = join_row(cells);
    return e;
  };
  if (cells.size() != map.feature_of_column.size()) {
    return fail("", "expected " + std::to_string(map.feature_of_column.size()) +
                        " fields, found " + std::to_string(cells.size()));
  }
  record = PatientRecord{};
  record.values.assign(schema.size(), std::monostate{});
  record.episode_id =
      map.episode_col ? cells[*map.episode_col] : std::to_string(row);
  record.patient_id =
      map.patient_col ? cells[*map.patient_col] : record.episode_id;
  if (record.episode_id.empty()) return fail("episode_id", "empty episode id");
  if (record.patient_id.empty()) return fail("patient_id", "empty patient id");
  if (map.target_col) {
    const std::string& cell = cells[*map.target_col];
    if (cell == "0") {
      record.outcome = 0;
    } else if (cell == "1") {
      record.outcome = 1;
    } else if (!cell.empty()) {
      return fail(schema.target_name(), "outcome must be 0, 1 or empty, got '" +
                                            cell + "'");
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!map.feature_of_column[c]) continue;
    const std::size_t j = *map.feature_of_column[c];
    const FeatureSpec& spec = schema.feature(j);
    const std::string& cell = cells[c];
    if (cell.empty()) continue;
    if (spec.kind == FeatureKind::kCategorical) {
      record.values[j] = cell;
    } else if (auto number = parse_number(cell)) {
      record.values[j] = *number;
    } else {
      return fail(spec.name, "cannot parse '" + cell + "' as " +
                                 std::string(to_string(spec.kind)));
    }
  }
  ValidationResult v = validate_record(record, schema);
  if (!v.ok()) {
    return fail(v.violations.front().feature, v.violations.front().message);
  }
  return std::nullopt;
}

CsvLoadResult parse_table(const CsvTable& table, const CohortSchema& schema,
                          bool strict) {
  CsvLoadResult result{Cohort{schema, {}}, {}};
  if (table.header.empty()) throw DataError("CSV input has no header row");
  HeaderMap map = map_header(table.header, schema);
  result.cohort.records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    PatientRecord record;
    auto error =
        parse_row(table.rows[i], i + 1, table.line_numbers[i], map, schema, record);
    if (error) {
      if (strict) throw DataError(error->describe());
      result.rejected.push_back(std::move(*error));
    } else {
      result.cohort.records.push_back(std::move(record));
    }
  }
  return result;
}

}  // namespace

Cohort parse_cohort_csv(std::string_view text, const CohortSchema& schema) {
  return parse_table(parse_csv(text), schema, true).cohort;
}

Cohort load_csv(const std::filesystem::path& path, const CohortSchema& schema) {
  try {
    return parse_table(read_csv_file(path), schema, true).cohort;
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

CsvLoadResult parse_cohort_csv_lenient(std::string_view text,
                                       const CohortSchema& schema) {
  return parse_table(parse_csv(text), schema, false);
}

CsvLoadResult load_csv_lenient(const std::filesystem::path& path,
                               const CohortSchema& schema) {
  try {
    return parse_table(read_csv_file(path), schema, false);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string to_csv(const Cohort& cohort) {
  const CohortSchema& schema = cohort.schema;
  const bool labeled = !cohort.records.empty() && cohort.has_labels();
  std::string out;
  out += kPatientIdColumn;
  out += ',';
  out += kEpisodeIdColumn;
  for (const FeatureSpec& f : schema.features()) {
    out += ',';
    out += csv_escape(f.name);
  }
  if (labeled) {
    out += ',';
    out += schema.target_name();
  }
  out += '\n';
  for (const PatientRecord& r : cohort.records) {
    out += csv_escape(r.patient_id);
    out += ',';
    out += csv_escape(r.episode_id);
    for (const FeatureValue& v : r.values) {
      out += ',';
      if (const auto* d = std::get_if<double>(&v)) {
        out += format_number(*d);
      } else if (const auto* s = std::get_if<std::string>(&v)) {
        out += csv_escape(*s);
      }
    }
    if (labeled) {
      out += ',';
      out += std::to_string(*r.outcome);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Cohort& cohort, const std::filesystem::path& path) {
  write_text_file_atomic(path, to_csv(cohort));
}

Cohort one_episode_per_patient(const Cohort& cohort, std::uint64_t seed) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::size_t>> episodes;
  for (std::size_t i = 0; i < cohort.records.size(); ++i) {
    const std::string& pid = cohort.records[i].patient_id;
    auto [it, inserted] = episodes.try_emplace(pid);
    if (inserted) order.push_back(pid);
    it->second.push_back(i);
  }
  Rng rng(derive_seed(seed, 0));
  Cohort out{cohort.schema, {}};
  out.records.reserve(order.size());
  for (const std::string& pid : order) {
    const auto& idx = episodes.at(pid);
    const std::size_t pick = idx.size() == 1 ? 0 : rng.uniform_int(idx.size());
    out.records.push_back(cohort.records[idx[pick]]);
  }
  return out;
}

Cohort subset(const Cohort& cohort, std::span<const std::size_t> rows) {
  Cohort out{cohort.schema, {}};
  out.records.reserve(rows.size());
  for (std::size_t r : rows) out.records.push_back(cohort.records.at(r));
  return out;
}

// --- Encoding ---------------------------------------------------------------

std::vector<std::string> ColumnLayout::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns);
  for (const ColumnBlock& b : blocks) {
    if (b.kind == FeatureKind::kCategorical) {
      for (const std::string& c : b.categories) names.push_back(b.feature + "=" + c);
    } else {
      names.push_back(b.feature);
    }
  }
  return names;
}

std::vector<std::size_t> ColumnLayout::block_of_columns() const {
  std::vector<std::size_t> out(columns);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t k = 0; k < blocks[b].width; ++k) {
      out[blocks[b].first + k] = b;
    }
  }
  return out;
}

std::size_t EncodedMatrix::missing_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

EncodedMatrix EncodedMatrix::select_rows(std::span<const std::size_t> rows) const {
  EncodedMatrix out;
  out.rows = rows.size();
  out.cols = cols;
  out.layout = layout;
  out.values.resize(out.rows * cols);
  out.mask.resize(out.rows * cols);
  if (labels) out.labels.emplace();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    std::copy_n(values.begin() + r * cols, cols, out.values.begin() + i * cols);
    std::copy_n(mask.begin() + r * cols, cols, out.mask.begin() + i * cols);
    if (labels) out.labels->push_back((*labels)[r]);
  }
  return out;
}

Encoder::Encoder(ColumnLayout layout, std::vector<std::size_t> schema_indices)
    : layout_(std::move(layout)), schema_indices_(std::move(schema_indices)) {
  if (schema_indices_.size() != layout_.blocks.size()) {
    throw LayoutError("encoder block count does not match schema indices");
  }
}

EncodedMatrix Encoder::encode(const Cohort& cohort) const {
  return encode(cohort.records, cohort.schema);
}

EncodedMatrix Encoder::encode(std::span<const PatientRecord> records,
                              const CohortSchema& schema) const {
  for (std::size_t b = 0; b < layout_.blocks.size(); ++b) {
    const std::size_t j = schema_indices_[b];
    if (j >= schema.size() || schema.feature(j).name != layout_.blocks[b].feature) {
      throw LayoutError("encoder feature '" + layout_.blocks[b].feature +
                        "' is not at the expected schema position");
    }
  }
  EncodedMatrix m;
  m.rows = records.size();
  m.cols = layout_.columns;
  m.layout = layout_;
  m.values.assign(m.rows * m.cols, 0.0);
  m.mask.assign(m.rows * m.cols, 0);
  bool labeled = !records.empty();
  for (std::size_t r = 0; r < records.size(); ++r) {
    const PatientRecord& rec = records[r];
    if (!rec.outcome) labeled = false;
    for (std::size_t b = 0; b < layout_.blocks.size(); ++b) {
      const ColumnBlock& block = layout_.blocks[b];
      const FeatureValue& v = rec.values.at(schema_indices_[b]);
      const std::size_t base = r * m.cols + block.first;
      if (is_missing(v)) {
        std::fill_n(m.mask.begin() + base, block.width, 1);
        continue;
      }
      if (block.kind == FeatureKind::kCategorical) {
        const auto* s = std::get_if<std::string>(&v);
        if (s == nullptr) {
          throw DataError("episode " + rec.episode_id + ": feature " +
                          block.feature + " is not categorical");
        }
        auto it = std::lower_bound(block.categories.begin(),
                                   block.categories.end(), *s);
        if (it != block.categories.end() && *it == *s) {
          m.values[base + (it - block.categories.begin())] = 1.0;
        }
      } else {
        const auto* d = std::get_if<double>(&v);
        if (d == nullptr) {
          throw DataError("episode " + rec.episode_id + ": feature " +
                          block.feature + " is not numeric");
        }
        m.values[base] = *d;
      }
    }
  }
  if (labeled) {
    m.labels.emplace();
    m.labels->reserve(records.size());
    for (const PatientRecord& rec : records) m.labels->push_back(*rec.outcome);
  }
  return m;
}

Encoder fit_encoder(const Cohort& cohort) {
  std::vector<std::size_t> all(cohort.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return fit_encoder(cohort, all);
}

Encoder fit_encoder(const Cohort& cohort, std::span<const std::size_t> rows,
                    std::span<const std::string> features) {
  if (rows.empty()) throw DataError("cannot fit an encoder on an empty cohort");
  const CohortSchema& schema = cohort.schema;
  std::vector<bool> wanted(schema.size(), features.empty());
  for (const std::string& name : features) wanted[schema.require_index(name)] = true;

  ColumnLayout layout;
  std::vector<std::size_t> indices;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (!wanted[j]) continue;
    const FeatureSpec& spec = schema.feature(j);
    ColumnBlock block;
    block.feature = spec.name;
    block.kind = spec.kind;
    block.first = layout.columns;
    if (spec.kind == FeatureKind::kCategorical) {
      std::set<std::string> vocab;
      for (std::size_t r : rows) {
        if (const auto* s = std::get_if<std::string>(&cohort.records.at(r).values[j])) {
          vocab.insert(*s);
        }
      }
      block.categories.assign(vocab.begin(), vocab.end());
      block.width = block.categories.size();
    }
    layout.columns += block.width;
    layout.blocks.push_back(std::move(block));
    indices.push_back(j);
  }
  return Encoder(std::move(layout), std::move(indices));
}

EncodedMatrix encode(const Cohort& cohort, const Encoder& encoder) {
  return encoder.encode(cohort);
}

// --- Splitting --------------------------------------------------------------

SplitIndices stratified_split(std::span<const int> labels, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DataError("test fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw DataError("labels must be 0 or 1");
    }
    by_class[labels[i]].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw DataError("stratified split needs both classes present");
  }
  auto round_half_up = [](double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
  };
  const int minority = by_class[1].size() <= by_class[0].size() ? 1 : 0;
  const int majority = 1 - minority;
  std::size_t n_test[2];
  n_test[minority] =
      round_half_up(static_cast<double>(by_class[minority].size()) * test_fraction);
  const std::size_t total =
      round_half_up(static_cast<double>(labels.size()) * test_fraction);
  n_test[majority] = total >= n_test[minority] ? total - n_test[minority] : 0;
  n_test[majority] = std::min(n_test[majority], by_class[majority].size());

  Rng rng(derive_seed(seed, 0));
  SplitIndices split;
  split.seed = seed;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t>& idx = by_class[cls];
    // Partial Fisher-Yates: the first n_test[cls] slots become the test rows.
    for (std::size_t i = 0; i < n_test[cls]; ++i) {
      const std::size_t j = i + rng.uniform_int(idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    split.test.insert(split.test.end(), idx.begin(), idx.begin() + n_test[cls]);
    split.train.insert(split.train.end(), idx.begin() + n_test[cls], idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace arx
