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

#include "arx/baselines.h"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>

#include "arx/csv.h"
#include "arx/error.h"
#include "arx/tree.h"

namespace arx {

std::string_view to_string(ProfundOp op) {
  switch (op) {
    case ProfundOp::kLess:
      return "<";
    case ProfundOp::kLessEqual:
      return "<=";
    case ProfundOp::kGreater:
      return ">";
    case ProfundOp::kGreaterEqual:
      return ">=";
    case ProfundOp::kEqual:
      return "==";
    case ProfundOp::kFlag:
      return "flag";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<ProfundOp> parse_op(std::string_view s) {
  for (ProfundOp op : {ProfundOp::kLess, ProfundOp::kLessEqual, ProfundOp::kGreater,
                       ProfundOp::kGreaterEqual, ProfundOp::kEqual, ProfundOp::kFlag}) {
    if (s == to_string(op)) return op;
  }
  return std::nullopt;
}

}  // namespace

int ProfundTable::max_points() const {
  int total = 0;
  for (const ProfundItem& item : items) total += item.points;
  return total;
}

ProfundTable parse_profund_table(std::string_view text) {
  ProfundTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto fail = [&](const std::string& msg) {
      return ConfigError("PROFUND table line " + std::to_string(line_no) + ": " + msg);
    };
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = stripped.find(',', start);
      fields.push_back(trim(std::string_view(stripped).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw fail("expected 5 fields (name, feature, op, cutpoint, points), found " +
                 std::to_string(fields.size()));
    }
    ProfundItem item;
    item.name = fields[0];
    item.feature = fields[1];
    if (item.name.empty()) throw fail("empty item name");
    if (item.feature.empty()) throw fail("empty feature");
    auto op = parse_op(fields[2]);
    if (!op) throw fail("unknown operator '" + fields[2] + "'");
    item.op = *op;
    item.cutpoint = fields[3];
    if (item.op != ProfundOp::kFlag && item.cutpoint.empty()) {
      throw fail("operator " + fields[2] + " needs a cutpoint");
    }
    if (item.op != ProfundOp::kFlag && item.op != ProfundOp::kEqual &&
        !parse_number(item.cutpoint)) {
      throw fail("cutpoint '" + item.cutpoint + "' is not a number");
    }
    auto points = parse_number(fields[4]);
    if (!points || *points != static_cast<int>(*points)) {
      throw fail("points must be an integer, got '" + fields[4] + "'");
    }
    if (*points < 0) throw fail("points must be non-negative");
    item.points = static_cast<int>(*points);
    table.items.push_back(std::move(item));
  }
  return table;
}

const ProfundTable& default_profund_table() {
  static const ProfundTable table = parse_profund_table(
      "age_85_or_older, Age, >=, 85, 3\n"
      "active_neoplasia, Malignancy, flag, , 6\n"
      "dementia, Dementia, flag, , 3\n"
      "heart_failure, CongestiveHeartFailure, flag, , 3\n"
      "delirium, Delirium, flag, , 3\n"
      "hemoglobin_below_10, Hemoglobin, <, 10, 3\n"
      "barthel_below_60, Barthel, <, 60, 4\n"
      "four_or_more_admissions, PrevAdmissions, >=, 4, 3\n");
  return table;
}

ProfundTable load_profund_table(const std::filesystem::path& path) {
  try {
    return parse_profund_table(read_text_file(path));
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

std::string to_text(const ProfundTable& table) {
  std::string out = "# name, feature, op, cutpoint, points\n";
  for (const ProfundItem& item : table.items) {
    out += item.name + ", " + item.feature + ", " + std::string(to_string(item.op)) +
           ", " + item.cutpoint + ", " + std::to_string(item.points) + "\n";
  }
  return out;
}

void check_profund_table(const ProfundTable& table, const CohortSchema& schema) {
  for (const ProfundItem& item : table.items) {
    auto idx = schema.index_of(item.feature);
    if (!idx) {
      throw ConfigError("PROFUND item '" + item.name +
                        "' references unknown feature " + item.feature);
    }
    const FeatureKind kind = schema.feature(*idx).kind;
    if (item.op == ProfundOp::kFlag && kind != FeatureKind::kBoolean) {
      throw ConfigError("PROFUND item '" + item.name + "': flag needs a boolean feature");
    }
    if (kind == FeatureKind::kCategorical && item.op != ProfundOp::kEqual) {
      throw ConfigError("PROFUND item '" + item.name +
                        "': categorical features only support ==");
    }
  }
}

bool profund_item_satisfied(const ProfundItem& item, const PatientRecord& record,
                            const CohortSchema& schema) {
  auto idx = schema.index_of(item.feature);
  if (!idx) {
    throw ConfigError("PROFUND item '" + item.name +
                      "' references unknown feature " + item.feature);
  }
  const FeatureValue& value = record.values.at(*idx);
  if (is_missing(value)) return false;
  if (const auto* text = std::get_if<std::string>(&value)) {
    return item.op == ProfundOp::kEqual && *text == item.cutpoint;
  }
  const double x = std::get<double>(value);
  if (item.op == ProfundOp::kFlag) return x == 1.0;
  const auto cut = parse_number(item.cutpoint);
  if (!cut) return false;
  switch (item.op) {
    case ProfundOp::kLess:
      return x < *cut;
    case ProfundOp::kLessEqual:
      return x <= *cut;
    case ProfundOp::kGreater:
      return x > *cut;
    case ProfundOp::kGreaterEqual:
      return x >= *cut;
    case ProfundOp::kEqual:
      return x == *cut;
    case ProfundOp::kFlag:
      break;
  }
  return false;
}

int profund_score(const PatientRecord& record, const ProfundTable& table,
                  const CohortSchema& schema) {
  int score = 0;
  for (const ProfundItem& item : table.items) {
    if (profund_item_satisfied(item, record, schema)) score += item.points;
  }
  return score;
}

BuurmanModel fit_buurman(const EncodedMatrix& m, std::span<const double> targets) {
  require_imputed(m, "fit_buurman");
  if (m.cols != kBuurmanFeatures.size()) {
    throw LayoutError("fit_buurman: expected 4 columns, got " + std::to_string(m.cols));
  }
  if (targets.size() != m.rows) {
    throw LayoutError("fit_buurman: target count does not match rows");
  }
  if (m.rows < 5) throw FitError("fit_buurman: needs at least 5 rows");
  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  if (*lo == *hi) throw FitError("fit_buurman: targets are constant");

  const Eigen::Index n = static_cast<Eigen::Index>(m.rows);
  Eigen::MatrixXd design(n, 5);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    design(r, 0) = 1.0;
    for (Eigen::Index c = 0; c < 4; ++c) {
      design(r, c + 1) = m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
    y(r) = targets[static_cast<std::size_t>(r)];
  }
  const auto column_name = [&](Eigen::Index c) {
    if (c == 0) return std::string("intercept");
    const auto names = m.layout.column_names();
    const auto i = static_cast<std::size_t>(c - 1);
    return i < names.size() ? names[i] : "column " + std::to_string(i);
  };
  for (Eigen::Index c = 1; c < 5; ++c) {
    if ((design.col(c).array() == design(0, c)).all()) {
      throw FitError("fit_buurman: rank-deficient design, feature " + column_name(c) +
                     " is constant");
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 5) {
    const Eigen::Index degenerate = qr.colsPermutation().indices()(4);
    throw FitError("fit_buurman: rank-deficient design, feature " +
                   column_name(degenerate) + " is collinear with the others");
  }
  const Eigen::VectorXd beta = qr.solve(y);

  BuurmanModel model;
  model.intercept = beta(0);
  for (std::size_t c = 0; c < 4; ++c) {
    model.coefficients[c] = beta(static_cast<Eigen::Index>(c + 1));
  }
  model.layout = m.layout;
  model.fitted = true;
  return model;
}

BuurmanModel fit_buurman(const EncodedMatrix& m, std::span<const int> labels) {
  std::vector<double> targets(labels.begin(), labels.end());
  return fit_buurman(m, targets);
}

std::vector<double> buurman_predict(const BuurmanModel& model,
                                    const EncodedMatrix& m) {
  if (!model.fitted) throw LayoutError("buurman_predict: model is not fitted");
  if (!(m.layout == model.layout)) {
    throw LayoutError("buurman_predict: matrix layout differs from training");
  }
  require_imputed(m, "buurman_predict");
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double s = model.intercept;
    for (std::size_t c = 0; c < 4; ++c) s += model.coefficients[c] * m.at(r, c);
    out[r] = s;
  }
  return out;
}

}  // namespace arx
