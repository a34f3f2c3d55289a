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

#include <gtest/gtest.h>

#include <fstream>

#include "arx/error.h"
#include "arx/persist.h"
#include "arx/synth.h"
#include "support.h"

namespace arx {
namespace {

const Cohort& cohort() {
  static const Cohort c = [] {
    GeneratorConfig cfg = default_generator_config();
    cfg.n = 800;
    cfg.pilot_size = 4000;
    cfg.seed = 12;
    return generate_cohort(cfg).first;
  }();
  return c;
}

ModelBundle bundle_of(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  spec.boosting.n_trees = 15;
  spec.forest.n_trees = 8;
  Pipeline p = fit_pipeline(cohort(), testing::iota_rows(600), spec, 5);
  p.threshold = 0.125;
  return make_bundle(std::move(p), cohort());
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class PersistKindTest : public ::testing::TestWithParam<std::string> {};

TEST_P(PersistKindTest, RoundTripIsExact) {
  const ModelBundle original = bundle_of(*parse_model_kind(GetParam()));
  const std::string text = serialize_model(original);
  const ModelBundle loaded = parse_model(text);
  EXPECT_EQ(serialize_model(loaded), text);
  EXPECT_EQ(loaded.pipeline.threshold, 0.125);
  EXPECT_EQ(loaded.metadata.seed, 5u);
  EXPECT_EQ(loaded.metadata.cohort_fingerprint, cohort_fingerprint(cohort()));
  EXPECT_EQ(loaded.pipeline.score(cohort()), original.pipeline.score(cohort()));
  EXPECT_EQ(parse_header(text).kind, GetParam());
}

INSTANTIATE_TEST_SUITE_P(AllKinds, PersistKindTest,
                         ::testing::Values("gbc", "rf", "knn", "buurman", "profund"));

TEST(PersistTest, FileRoundTripAndHeader) {
  testing::TempDir dir;
  const auto path = dir.path() / "model.json";
  const ModelBundle b = bundle_of(ModelKind::kBuurman);
  save_model(b, path);
  const std::string text = read_file(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.back(), '\n');
  const FileHeader h = peek_header(path);
  EXPECT_EQ(h.format_version, kFormatVersion);
  EXPECT_EQ(h.kind, "buurman");
  EXPECT_EQ(h.checksum.rfind("crc32:", 0), 0u);
  EXPECT_EQ(h.checksum.size(), 14u);
  EXPECT_EQ(serialize_model(load_model(path)), serialize_model(b));
}

TEST(PersistTest, FutureVersionIsRejected) {
  std::string text = serialize_model(bundle_of(ModelKind::kProfund));
  const std::string key = "\"format_version\":1";
  const std::size_t at = text.find(key);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, key.size(), "\"format_version\":99");
  text = reseal(text);
  try {
    parse_model(text);
    FAIL() << "expected VersionMismatchError";
  } catch (const VersionMismatchError& e) {
    EXPECT_EQ(e.found(), 99);
    EXPECT_EQ(e.expected(), kFormatVersion);
  }
}

TEST(PersistTest, TruncationIsDetected) {
  const std::string text = serialize_model(bundle_of(ModelKind::kGradientBoosting));
  EXPECT_THROW(parse_model(text.substr(0, text.size() / 2)), ChecksumError);
  EXPECT_THROW(parse_model(text.substr(0, 10)), ChecksumError);
  EXPECT_THROW(parse_model(""), ChecksumError);
}

TEST(PersistTest, EveryBitFlipIsDetected) {
  const std::string text = serialize_model(bundle_of(ModelKind::kRandomForest));
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::string damaged = text;
    const std::size_t pos = rng.uniform_int(damaged.size());
    damaged[pos] = static_cast<char>(damaged[pos] ^ (1 << rng.uniform_int(8)));
    EXPECT_THROW(parse_model(damaged), ChecksumError) << "offset " << pos;
  }
}

TEST(PersistTest, ResealedGarbageIsAFormatError) {
  const std::string text = serialize_model(bundle_of(ModelKind::kKnn));
  std::string damaged = text;
  damaged.replace(damaged.find("\"payload\""), 9, "\"payloaX\"");
  EXPECT_THROW(parse_model(reseal(damaged)), FormatError);
}

EvaluationReport make_report(ModelKind kind) {
  EvalConfig cfg;
  cfg.repetitions = 3;
  cfg.seed = 6;
  cfg.model.kind = kind;
  cfg.model.boosting.n_trees = 10;
  return run_repeated_holdout(cohort(), cfg);
}

TEST(PersistTest, ReportRoundTrip) {
  const std::vector<EvaluationReport> reports = {make_report(ModelKind::kGradientBoosting),
                                                 make_report(ModelKind::kKnn)};
  const std::string text = serialize_reports(reports);
  EXPECT_EQ(parse_header(text).kind, kReportKind);
  EXPECT_EQ(parse_header(text).created_utc, "");
  const auto loaded = parse_reports(text);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(serialize_reports(loaded), text);
  EXPECT_TRUE(loaded[0].importance.has_value());
  EXPECT_FALSE(loaded[1].importance.has_value());
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(loaded[r].model, reports[r].model);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      const MetricSummary& s = loaded[r].metrics[m];
      EXPECT_EQ(s.values, reports[r].metrics[m].values);
      const MetricSummary again = summarize_metric(s.metric, s.values);
      EXPECT_NEAR(again.mean, s.mean, 1e-12);
      EXPECT_NEAR(again.ci_low, s.ci_low, 1e-12);
      EXPECT_NEAR(again.ci_high, s.ci_high, 1e-12);
    }
  }
}

TEST(PersistTest, ReportFiles) {
  testing::TempDir dir;
  const EvaluationReport r = make_report(ModelKind::kBuurman);
  save_report(r, dir.path() / "one.json");
  EXPECT_EQ(load_report(dir.path() / "one.json").model, "buurman");
  const std::vector<EvaluationReport> two = {r, r};
  save_reports(two, dir.path() / "two.json");
  EXPECT_EQ(load_reports(dir.path() / "two.json").size(), 2u);
  EXPECT_THROW(load_report(dir.path() / "two.json"), FormatError);
  save_model(bundle_of(ModelKind::kBuurman), dir.path() / "model.json");
  EXPECT_THROW(load_reports(dir.path() / "model.json"), FormatError);
  EXPECT_THROW(load_model(dir.path() / "one.json"), FormatError);
}

TEST(PersistTest, TimingsAreOptIn) {
  const EvaluationReport r = make_report(ModelKind::kBuurman);
  const std::vector<EvaluationReport> one = {r};
  EXPECT_EQ(serialize_reports(one).find("seconds"), std::string::npos);
  EXPECT_NE(serialize_reports(one, true).find("seconds"), std::string::npos);
  EXPECT_NE(parse_header(serialize_reports(one, true)).created_utc, "");
}

TEST(PersistTest, SourceDateEpochFixesTheTimestamp) {
  ::setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(utc_timestamp(), "1970-01-01T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
}

}  // namespace
}  // namespace arx
