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

#include "arx/persist.h"

#include <zlib.h>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <ctime>

#include "arx/csv.h"
#include "arx/error.h"
#include "json.hpp"

namespace arx {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kChecksumPrefix = "\"checksum\":\"crc32:";
constexpr std::size_t kChecksumDigits = 8;

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08" PRIx32, v);
  return buf;
}

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large inputs in chunks.
  while (!bytes.empty()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size(), 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
                static_cast<uInt>(chunk));
    bytes.remove_prefix(chunk);
  }
  return static_cast<std::uint32_t>(crc);
}

// Position of the first checksum digit, or npos.
std::size_t checksum_digits_at(std::string_view text) {
  const std::size_t at = text.find(kChecksumPrefix);
  if (at == std::string_view::npos) return at;
  const std::size_t digits = at + kChecksumPrefix.size();
  if (digits + kChecksumDigits > text.size()) return std::string_view::npos;
  return digits;
}

std::string compute_seal(std::string_view text, std::size_t digits) {
  std::string zeroed(text);
  zeroed.replace(digits, kChecksumDigits, kChecksumDigits, '0');
  return hex32(crc32_of(zeroed));
}

std::string seal(std::string text) {
  const std::size_t digits = checksum_digits_at(text);
  if (digits == std::string::npos) throw FormatError("container has no checksum field");
  text.replace(digits, kChecksumDigits, compute_seal(text, digits));
  return text;
}

void verify_checksum(std::string_view text) {
  const std::size_t digits = checksum_digits_at(text);
  if (digits == std::string_view::npos) {
    throw ChecksumError("checksum field missing or damaged");
  }
  const std::string stored(text.substr(digits, kChecksumDigits));
  const std::string actual = compute_seal(text, digits);
  if (stored != actual) {
    throw ChecksumError("checksum mismatch: stored crc32:" + stored + ", computed crc32:" +
                        actual);
  }
}

// An empty created_utc is written as null.
std::string container(std::string_view kind, const std::string& created_utc,
                      const ordered_json& payload) {
  ordered_json top;
  top["format_version"] = kFormatVersion;
  top["kind"] = kind;
  top["created_utc"] = created_utc.empty() ? ordered_json(nullptr) : ordered_json(created_utc);
  top["checksum"] = "crc32:" + std::string(kChecksumDigits, '0');
  top["payload"] = payload;
  return seal(top.dump() + "\n");
}

// Checksum, then structure, then version.
ordered_json open_container(std::string_view text) {
  verify_checksum(text);
  ordered_json top;
  try {
    top = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw FormatError(std::string("malformed container: ") + e.what());
  }
  if (!top.is_object() || !top.contains("format_version") ||
      !top["format_version"].is_number_integer()) {
    throw FormatError("container has no integer format_version");
  }
  const int version = top["format_version"].get<int>();
  if (version != kFormatVersion) throw VersionMismatchError(version, kFormatVersion);
  for (const char* key : {"kind", "created_utc", "checksum", "payload"}) {
    if (!top.contains(key)) throw FormatError(std::string("container has no ") + key);
  }
  return top;
}

std::string string_or_empty(const ordered_json& j) {
  return j.is_null() ? std::string() : j.get<std::string>();
}

// --- Building blocks ---------------------------------------------------------

ordered_json to_j(const CohortSchema& schema) {
  ordered_json features = ordered_json::array();
  for (const FeatureSpec& f : schema.features()) {
    features.push_back({{"name", f.name},
                        {"kind", to_string(f.kind)},
                        {"units", f.units},
                        {"missing_allowed", f.missing_allowed},
                        {"label", f.label}});
  }
  return {{"target", schema.target_name()}, {"features", features}};
}

FeatureKind kind_from_j(const ordered_json& j) {
  const auto kind = parse_feature_kind(j.get<std::string>());
  if (!kind) throw FormatError("unknown feature kind " + j.get<std::string>());
  return *kind;
}

CohortSchema schema_from_j(const ordered_json& j) {
  std::vector<FeatureSpec> features;
  for (const auto& f : j.at("features")) {
    FeatureSpec spec;
    spec.name = f.at("name").get<std::string>();
    spec.kind = kind_from_j(f.at("kind"));
    spec.units = f.at("units").get<std::string>();
    spec.missing_allowed = f.at("missing_allowed").get<bool>();
    spec.label = f.at("label").get<std::string>();
    features.push_back(std::move(spec));
  }
  return CohortSchema(std::move(features), j.at("target").get<std::string>());
}

ordered_json to_j(const ColumnLayout& layout) {
  ordered_json blocks = ordered_json::array();
  for (const ColumnBlock& b : layout.blocks) {
    blocks.push_back({{"feature", b.feature},
                      {"kind", to_string(b.kind)},
                      {"first", b.first},
                      {"width", b.width},
                      {"categories", b.categories}});
  }
  return {{"columns", layout.columns}, {"blocks", blocks}};
}

ColumnLayout layout_from_j(const ordered_json& j) {
  ColumnLayout layout;
  layout.columns = j.at("columns").get<std::size_t>();
  for (const auto& b : j.at("blocks")) {
    ColumnBlock block;
    block.feature = b.at("feature").get<std::string>();
    block.kind = kind_from_j(b.at("kind"));
    block.first = b.at("first").get<std::size_t>();
    block.width = b.at("width").get<std::size_t>();
    block.categories = b.at("categories").get<std::vector<std::string>>();
    layout.blocks.push_back(std::move(block));
  }
  return layout;
}

ordered_json to_j(const Tree& tree) {
  ordered_json feature = ordered_json::array(), threshold = ordered_json::array(),
               left = ordered_json::array(), right = ordered_json::array(),
               value = ordered_json::array(), weight = ordered_json::array(),
               gain = ordered_json::array();
  for (const TreeNode& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    weight.push_back(n.weight);
    gain.push_back(n.gain);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"value", value},         {"weight", weight},
          {"gain", gain}};
}

Tree tree_from_j(const ordered_json& j, std::size_t columns) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const auto weight = j.at("weight").get<std::vector<double>>();
  const auto gain = j.at("gain").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n ||
      value.size() != n || weight.size() != n || gain.size() != n) {
    throw FormatError("tree node arrays differ in length");
  }
  Tree tree;
  tree.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tree.nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i], weight[i], gain[i]};
  }
  check_tree_structure(tree, columns);
  return tree;
}

ordered_json to_j(const BoostingParams& p) {
  return {{"n_trees", p.n_trees},
          {"learning_rate", p.learning_rate},
          {"max_depth", p.max_depth},
          {"min_samples_leaf", p.min_samples_leaf}};
}

BoostingParams boosting_from_j(const ordered_json& j) {
  BoostingParams p;
  p.n_trees = j.at("n_trees").get<int>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  return p;
}

// Unlimited depth and "all features" are written as null.
ordered_json depth_to_j(int depth) {
  return depth == kUnlimitedDepth ? ordered_json(nullptr) : ordered_json(depth);
}
int depth_from_j(const ordered_json& j) {
  return j.is_null() ? kUnlimitedDepth : j.get<int>();
}

ordered_json to_j(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", depth_to_j(p.max_depth)},
          {"min_samples_leaf", p.min_samples_leaf},
          {"n_candidate_features", p.n_candidate_features == kAllFeatures
                                       ? ordered_json(nullptr)
                                       : ordered_json(p.n_candidate_features)},
          {"bootstrap", p.bootstrap}};
}

ForestParams forest_from_j(const ordered_json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<int>();
  p.max_depth = depth_from_j(j.at("max_depth"));
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  const auto& k = j.at("n_candidate_features");
  p.n_candidate_features = k.is_null() ? kAllFeatures : k.get<std::size_t>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  return p;
}

ordered_json to_j(const ProfundTable& table) {
  ordered_json items = ordered_json::array();
  for (const ProfundItem& item : table.items) {
    items.push_back({{"name", item.name},
                     {"feature", item.feature},
                     {"op", to_string(item.op)},
                     {"cutpoint", item.cutpoint},
                     {"points", item.points}});
  }
  return items;
}

ProfundTable profund_from_j(const ordered_json& j) {
  // Reuse the text parser so operator spelling stays in one place.
  std::string text;
  for (const auto& item : j) {
    text += item.at("name").get<std::string>() + ", " + item.at("feature").get<std::string>() +
            ", " + item.at("op").get<std::string>() + ", " +
            item.at("cutpoint").get<std::string>() + ", " +
            std::to_string(item.at("points").get<int>()) + "\n";
  }
  try {
    return parse_profund_table(text);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("stored PROFUND table: ") + e.what());
  }
}

ordered_json to_j(const ModelSpec& spec) {
  ordered_json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case ModelKind::kGradientBoosting:
      j["boosting"] = to_j(spec.boosting);
      break;
    case ModelKind::kRandomForest:
      j["forest"] = to_j(spec.forest);
      break;
    case ModelKind::kKnn:
      j["k"] = spec.knn_k;
      break;
    case ModelKind::kBuurman:
      break;
    case ModelKind::kProfund:
      j["profund"] = to_j(spec.profund);
      break;
  }
  return j;
}

ModelKind model_kind_from_j(const ordered_json& j) {
  const auto kind = parse_model_kind(j.get<std::string>());
  if (!kind) throw FormatError("unknown model kind " + j.get<std::string>());
  return *kind;
}

ModelSpec spec_from_j(const ordered_json& j) {
  ModelSpec spec;
  spec.kind = model_kind_from_j(j.at("kind"));
  if (j.contains("boosting")) spec.boosting = boosting_from_j(j["boosting"]);
  if (j.contains("forest")) spec.forest = forest_from_j(j["forest"]);
  if (j.contains("k")) spec.knn_k = j["k"].get<std::size_t>();
  if (j.contains("profund")) spec.profund = profund_from_j(j["profund"]);
  return spec;
}

ordered_json to_j(const Imputer& imputer) {
  return {{"column_fill", imputer.column_fill}, {"block_mode", imputer.block_mode}};
}

Imputer imputer_from_j(const ordered_json& j, const ColumnLayout& layout) {
  Imputer imputer;
  imputer.layout = layout;
  imputer.column_fill = j.at("column_fill").get<std::vector<double>>();
  imputer.block_mode = j.at("block_mode").get<std::vector<std::string>>();
  imputer.fitted = true;
  if (imputer.column_fill.size() != layout.columns ||
      imputer.block_mode.size() != layout.blocks.size()) {
    throw FormatError("imputer state does not match the column layout");
  }
  return imputer;
}

ordered_json to_j(const Standardizer& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"sd_floor", s.sd_floor}};
}

Standardizer standardizer_from_j(const ordered_json& j, const ColumnLayout& layout) {
  Standardizer s;
  s.layout = layout;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.sd = j.at("sd").get<std::vector<double>>();
  s.sd_floor = j.at("sd_floor").get<double>();
  s.fitted = true;
  if (s.mean.size() != layout.columns || s.sd.size() != layout.columns) {
    throw FormatError("standardizer state does not match the column layout");
  }
  return s;
}

ordered_json trees_to_j(const std::vector<Tree>& trees) {
  ordered_json out = ordered_json::array();
  for (const Tree& t : trees) out.push_back(to_j(t));
  return out;
}

std::vector<Tree> trees_from_j(const ordered_json& j, std::size_t columns) {
  std::vector<Tree> trees;
  for (const auto& t : j) trees.push_back(tree_from_j(t, columns));
  return trees;
}

ordered_json learner_to_j(const Pipeline& p) {
  return std::visit(
      [&](const auto& m) -> ordered_json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GradientBoostedEnsemble>) {
          return {{"init_score", m.init_score},
                  {"learning_rate", m.learning_rate},
                  {"seed", m.seed},
                  {"training_loss", m.training_loss},
                  {"trees", trees_to_j(m.trees)}};
        } else if constexpr (std::is_same_v<T, RandomForestEnsemble>) {
          return {{"n_candidate_features", m.n_candidate_features},
                  {"seed", m.seed},
                  {"trees", trees_to_j(m.trees)}};
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          return {{"k", m.k},
                  {"rows", m.train.rows},
                  {"cols", m.train.cols},
                  {"values", m.train.values},
                  {"labels", m.labels}};
        } else if constexpr (std::is_same_v<T, BuurmanModel>) {
          return {{"intercept", m.intercept}, {"coefficients", m.coefficients}};
        } else {
          return {{"items", to_j(m)}};
        }
      },
      p.model);
}

void learner_from_j(const ordered_json& j, Pipeline& p) {
  const ColumnLayout& layout = p.encoder.layout();
  switch (p.spec.kind) {
    case ModelKind::kGradientBoosting: {
      GradientBoostedEnsemble m;
      m.init_score = j.at("init_score").get<double>();
      m.learning_rate = j.at("learning_rate").get<double>();
      m.seed = j.at("seed").get<std::uint64_t>();
      m.training_loss = j.at("training_loss").get<std::vector<double>>();
      m.trees = trees_from_j(j.at("trees"), layout.columns);
      m.layout = layout;
      m.params = p.spec.boosting;
      p.model = std::move(m);
      break;
    }
    case ModelKind::kRandomForest: {
      RandomForestEnsemble m;
      m.n_candidate_features = j.at("n_candidate_features").get<std::size_t>();
      m.seed = j.at("seed").get<std::uint64_t>();
      m.trees = trees_from_j(j.at("trees"), layout.columns);
      m.layout = layout;
      m.params = p.spec.forest;
      p.model = std::move(m);
      break;
    }
    case ModelKind::kKnn: {
      KnnModel m;
      m.k = j.at("k").get<std::size_t>();
      m.train.rows = j.at("rows").get<std::size_t>();
      m.train.cols = j.at("cols").get<std::size_t>();
      m.train.values = j.at("values").get<std::vector<double>>();
      m.train.mask.assign(m.train.values.size(), 0);
      m.train.layout = layout;
      m.labels = j.at("labels").get<std::vector<int>>();
      if (m.train.cols != layout.columns ||
          m.train.values.size() != m.train.rows * m.train.cols ||
          m.labels.size() != m.train.rows || m.k == 0 || m.k > m.train.rows) {
        throw FormatError("stored neighbour matrix is inconsistent");
      }
      p.model = std::move(m);
      break;
    }
    case ModelKind::kBuurman: {
      BuurmanModel m;
      m.intercept = j.at("intercept").get<double>();
      m.coefficients = j.at("coefficients").get<std::array<double, 4>>();
      m.layout = layout;
      m.fitted = true;
      p.model = std::move(m);
      break;
    }
    case ModelKind::kProfund:
      p.model = profund_from_j(j.at("items"));
      break;
  }
}

ordered_json to_j(const EvalConfig& cfg) {
  return {{"repetitions", cfg.repetitions},
          {"test_fraction", cfg.test_fraction},
          {"seed", cfg.seed},
          {"model", to_j(cfg.model)},
          {"threshold_mode", to_string(cfg.threshold_mode)},
          {"fixed_threshold", cfg.fixed_threshold}};
}

EvalConfig eval_config_from_j(const ordered_json& j) {
  EvalConfig cfg;
  cfg.repetitions = j.at("repetitions").get<int>();
  cfg.test_fraction = j.at("test_fraction").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.model = spec_from_j(j.at("model"));
  const auto mode = parse_threshold_mode(j.at("threshold_mode").get<std::string>());
  if (!mode) throw FormatError("unknown threshold mode");
  cfg.threshold_mode = *mode;
  cfg.fixed_threshold = j.at("fixed_threshold").get<double>();
  return cfg;
}

ordered_json to_j(const EvaluationReport& r, bool include_timings) {
  ordered_json j;
  j["model"] = r.model;
  j["threshold"] = r.threshold;
  j["config"] = to_j(r.config);
  ordered_json metrics = ordered_json::array();
  for (const MetricSummary& m : r.metrics) {
    metrics.push_back({{"metric", m.metric},
                       {"mean", m.mean},
                       {"ci_low", m.ci_low},
                       {"ci_high", m.ci_high},
                       {"values", m.values}});
  }
  j["metrics"] = metrics;
  j["thresholds"] = r.thresholds;
  if (r.importance) {
    ordered_json imp = ordered_json::array();
    for (const FeatureImportance& f : *r.importance) {
      imp.push_back({{"feature", f.feature}, {"importance", f.importance}});
    }
    j["importance"] = imp;
  }
  if (include_timings) j["seconds_per_repetition"] = r.seconds_per_repetition;
  return j;
}

EvaluationReport report_from_j(const ordered_json& j) {
  EvaluationReport r;
  r.model = j.at("model").get<std::string>();
  r.threshold = j.at("threshold").get<double>();
  r.config = eval_config_from_j(j.at("config"));
  for (const auto& m : j.at("metrics")) {
    MetricSummary s;
    s.metric = m.at("metric").get<std::string>();
    s.mean = m.at("mean").get<double>();
    s.ci_low = m.at("ci_low").get<double>();
    s.ci_high = m.at("ci_high").get<double>();
    s.values = m.at("values").get<std::vector<double>>();
    r.metrics.push_back(std::move(s));
  }
  r.thresholds = j.at("thresholds").get<std::vector<double>>();
  if (j.contains("importance")) {
    std::vector<FeatureImportance> imp;
    for (const auto& f : j["importance"]) {
      imp.push_back({f.at("feature").get<std::string>(), f.at("importance").get<double>()});
    }
    r.importance = std::move(imp);
  }
  if (j.contains("seconds_per_repetition")) {
    r.seconds_per_repetition = j["seconds_per_repetition"].get<std::vector<double>>();
  }
  return r;
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string cohort_fingerprint(const Cohort& cohort) {
  return hex32(crc32_of(to_csv(cohort)));
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0' && v >= 0) now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ModelBundle make_bundle(Pipeline pipeline, const Cohort& training_cohort) {
  ModelBundle b;
  b.metadata.seed = pipeline.seed;
  b.metadata.cohort_fingerprint = cohort_fingerprint(training_cohort);
  b.metadata.created_utc = utc_timestamp();
  b.pipeline = std::move(pipeline);
  return b;
}

std::string serialize_model(const ModelBundle& bundle) {
  const Pipeline& p = bundle.pipeline;
  ordered_json payload;
  payload["spec"] = to_j(p.spec);
  payload["threshold"] = p.threshold;
  payload["schema"] = to_j(p.schema);
  payload["encoder"] = {{"layout", to_j(p.encoder.layout())},
                        {"schema_indices", p.encoder.schema_indices()}};
  payload["imputer"] = to_j(p.imputer);
  if (p.standardizer) payload["standardizer"] = to_j(*p.standardizer);
  payload["learner"] = learner_to_j(p);
  payload["training"] = {{"seed", bundle.metadata.seed},
                         {"cohort_fingerprint", bundle.metadata.cohort_fingerprint}};
  return container(to_string(p.kind()), bundle.metadata.created_utc, payload);
}

ModelBundle parse_model(std::string_view text) {
  const ordered_json top = open_container(text);
  return guarded("model bundle", [&] {
    const ordered_json& j = top.at("payload");
    ModelBundle b;
    b.metadata.format_version = top.at("format_version").get<int>();
    b.metadata.created_utc = string_or_empty(top.at("created_utc"));
    b.metadata.seed = j.at("training").at("seed").get<std::uint64_t>();
    b.metadata.cohort_fingerprint =
        j.at("training").at("cohort_fingerprint").get<std::string>();

    Pipeline& p = b.pipeline;
    p.spec = spec_from_j(j.at("spec"));
    if (to_string(p.spec.kind) != top.at("kind").get<std::string>()) {
      throw FormatError("header kind disagrees with the payload");
    }
    p.seed = b.metadata.seed;
    p.threshold = j.at("threshold").get<double>();
    p.schema = schema_from_j(j.at("schema"));
    const ColumnLayout layout = layout_from_j(j.at("encoder").at("layout"));
    auto indices = j.at("encoder").at("schema_indices").get<std::vector<std::size_t>>();
    if (indices.size() != layout.blocks.size()) {
      throw FormatError("encoder schema indices do not match the layout");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] >= p.schema.size() ||
          p.schema.feature(indices[i]).name != layout.blocks[i].feature) {
        throw FormatError("encoder block " + layout.blocks[i].feature +
                          " does not match the schema");
      }
    }
    p.encoder = Encoder(layout, std::move(indices));
    p.imputer = imputer_from_j(j.at("imputer"), layout);
    if (j.contains("standardizer")) {
      p.standardizer = standardizer_from_j(j["standardizer"], layout);
    }
    learner_from_j(j.at("learner"), p);
    return b;
  });
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  write_text_file_atomic(path, serialize_model(bundle));
}

ModelBundle load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path));
}

FileHeader parse_header(std::string_view text) {
  const ordered_json top = open_container(text);
  return guarded("container header", [&] {
    FileHeader h;
    h.format_version = top.at("format_version").get<int>();
    h.kind = top.at("kind").get<std::string>();
    h.created_utc = string_or_empty(top.at("created_utc"));
    h.checksum = top.at("checksum").get<std::string>();
    return h;
  });
}

FileHeader peek_header(const std::filesystem::path& path) {
  return parse_header(read_text_file(path));
}

std::string serialize_reports(std::span<const EvaluationReport> reports,
                              bool include_timings) {
  ordered_json list = ordered_json::array();
  for (const EvaluationReport& r : reports) list.push_back(to_j(r, include_timings));
  ordered_json payload;
  payload["reports"] = list;
  return container(kReportKind, include_timings ? utc_timestamp() : std::string(), payload);
}

std::vector<EvaluationReport> parse_reports(std::string_view text) {
  const ordered_json top = open_container(text);
  return guarded("evaluation report", [&] {
    if (top.at("kind").get<std::string>() != kReportKind) {
      throw FormatError("not an evaluation report (kind " +
                        top.at("kind").get<std::string>() + ")");
    }
    std::vector<EvaluationReport> reports;
    for (const auto& r : top.at("payload").at("reports")) reports.push_back(report_from_j(r));
    return reports;
  });
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path,
                 bool include_timings) {
  save_reports(std::span<const EvaluationReport>(&report, 1), path, include_timings);
}

void save_reports(std::span<const EvaluationReport> reports,
                  const std::filesystem::path& path, bool include_timings) {
  write_text_file_atomic(path, serialize_reports(reports, include_timings));
}

EvaluationReport load_report(const std::filesystem::path& path) {
  auto reports = load_reports(path);
  if (reports.size() != 1) {
    throw FormatError(path.string() + " holds " + std::to_string(reports.size()) +
                      " reports, expected 1");
  }
  return std::move(reports.front());
}

std::vector<EvaluationReport> load_reports(const std::filesystem::path& path) {
  return parse_reports(read_text_file(path));
}

std::string reseal(std::string_view text) { return seal(std::string(text)); }

}  // namespace arx
