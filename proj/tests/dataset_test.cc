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
#include <set>

#include "arx/csv.h"
#include "arx/dataset.h"
#include "arx/error.h"
#include "support.h"

namespace arx {
namespace {

using testing::full_record;

Cohort cohort_of(std::vector<PatientRecord> records) {
  return Cohort{default_schema(), std::move(records)};
}

std::string csv_with_rows(const std::vector<PatientRecord>& records) {
  return to_csv(cohort_of(records));
}

TEST(LoadCsvTest, EmptyAlbuminCellIsMissing) {
  std::vector<PatientRecord> rows = {full_record("1"),
                                     full_record("2", {{"Albumin", std::monostate{}}}),
                                     full_record("3")};
  testing::TempDir dir;
  std::ofstream(dir / "c.csv") << csv_with_rows(rows);
  const Cohort c = load_csv(dir / "c.csv", default_schema());
  ASSERT_EQ(c.size(), 3u);
  const std::size_t albumin = default_schema().require_index("Albumin");
  int missing = 0;
  for (const auto& r : c.records) missing += is_missing(r.values[albumin]);
  EXPECT_EQ(missing, 1);
}

TEST(LoadCsvTest, HeaderOnlyGivesEmptyCohort) {
  const std::string header = csv_with_rows({});
  EXPECT_EQ(parse_cohort_csv(header, default_schema()).size(), 0u);
}

TEST(LoadCsvTest, BadCellCitesRowAndColumn) {
  CsvTable t = parse_csv(csv_with_rows({full_record("1"), full_record("2")}));
  const auto age = std::find(t.header.begin(), t.header.end(), "Age") - t.header.begin();
  t.rows[1][age] = "sixty";
  std::string text;
  for (const auto* row : {&t.header, &t.rows[0], &t.rows[1]}) {
    for (std::size_t i = 0; i < row->size(); ++i) text += (i ? "," : "") + (*row)[i];
    text += "\n";
  }
  try {
    parse_cohort_csv(text, default_schema());
    FAIL() << "expected a DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("Age"), std::string::npos) << msg;
  }
}

TEST(LoadCsvTest, HeaderProblemsThrow) {
  std::string text = csv_with_rows({full_record("1")});
  std::string unknown = text;
  unknown.replace(unknown.find("Urea"), 4, "Uric");
  EXPECT_THROW(parse_cohort_csv(unknown, default_schema()), DataError);
  std::string dup = text;
  dup.replace(dup.find("Sodium"), 6, "Urea");
  EXPECT_THROW(parse_cohort_csv(dup, default_schema()), DataError);
  EXPECT_THROW(parse_cohort_csv("", default_schema()), DataError);
}

TEST(LoadCsvTest, LenientCollectsBadRows) {
  PatientRecord bad = full_record("2", {{"Dementia", 3.0}});
  const CsvLoadResult r =
      parse_cohort_csv_lenient(csv_with_rows({full_record("1"), bad, full_record("3")}),
                               default_schema());
  EXPECT_EQ(r.cohort.size(), 2u);
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0].row, 2u);
  EXPECT_EQ(r.rejected[0].column, "Dementia");
  EXPECT_EQ(r.rejected[0].episode_id, "2");
}

TEST(LoadCsvTest, LabelsRoundTrip) {
  std::vector<PatientRecord> rows = {full_record("1"), full_record("2")};
  rows[0].outcome = 1;
  rows[1].outcome = 0;
  const Cohort c = parse_cohort_csv(csv_with_rows(rows), default_schema());
  EXPECT_EQ(c.labels(), (std::vector<int>{1, 0}));
  EXPECT_EQ(to_csv(c), csv_with_rows(rows));
}

TEST(OneEpisodeTest, KeepsOnePerPatient) {
  std::vector<PatientRecord> rows;
  for (int i = 0; i < 3; ++i) {
    rows.push_back(full_record("a" + std::to_string(i)));
    rows.back().patient_id = "A";
  }
  rows.push_back(full_record("b0"));
  rows.back().patient_id = "B";
  const Cohort c = cohort_of(rows);
  EXPECT_EQ(one_episode_per_patient(c, 1).size(), 2u);
  EXPECT_EQ(one_episode_per_patient(c, 9).records[0].episode_id,
            one_episode_per_patient(c, 9).records[0].episode_id);

  std::map<std::string, int> picks;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ++picks[one_episode_per_patient(c, seed).records[0].episode_id];
  }
  for (const auto& [id, n] : picks) EXPECT_NEAR(n / 1000.0, 1.0 / 3.0, 0.05) << id;
}

TEST(OneEpisodeTest, DistinctPatientsAreKept) {
  std::vector<PatientRecord> rows = {full_record("1"), full_record("2"), full_record("3")};
  const Cohort out = one_episode_per_patient(cohort_of(rows), 4);
  ASSERT_EQ(out.size(), 3u);
  std::set<std::string> ids;
  for (const auto& r : out.records) ids.insert(r.episode_id);
  EXPECT_EQ(ids, (std::set<std::string>{"1", "2", "3"}));
}

TEST(EncoderTest, OneHotVocabularyAndUnseenCategory) {
  std::vector<PatientRecord> rows = {full_record("1", {{"Service", std::string("MED")}}),
                                     full_record("2", {{"Service", std::string("ONC")}}),
                                     full_record("3", {{"Service", std::string("SUR")}})};
  const Encoder enc = fit_encoder(cohort_of(rows));
  const ColumnBlock* service = nullptr;
  for (const auto& b : enc.layout().blocks) {
    if (b.feature == "Service") service = &b;
  }
  ASSERT_NE(service, nullptr);
  EXPECT_EQ(service->width, 3u);
  EXPECT_EQ(service->categories, (std::vector<std::string>{"MED", "ONC", "SUR"}));

  const EncodedMatrix m =
      enc.encode(cohort_of({full_record("4", {{"Service", std::string("ICU")}})}));
  for (std::size_t c = service->first; c < service->first + service->width; ++c) {
    EXPECT_EQ(m.at(0, c), 0.0);
    EXPECT_FALSE(m.is_missing(0, c));
  }
}

TEST(EncoderTest, SexBlockAndMissingUrea) {
  std::vector<PatientRecord> rows = {full_record("1", {{"Sex", std::string("female")}}),
                                     full_record("2", {{"Sex", std::string("male")}})};
  const Encoder enc = fit_encoder(cohort_of(rows));
  const EncodedMatrix m = enc.encode(
      cohort_of({full_record("3", {{"Sex", std::string("male")}, {"Urea", std::monostate{}}})}));
  const auto& blocks = enc.layout().blocks;
  for (const auto& b : blocks) {
    if (b.feature == "Sex") {
      EXPECT_EQ(m.at(0, b.first), 0.0);
      EXPECT_EQ(m.at(0, b.first + 1), 1.0);
    }
    if (b.feature == "Urea") {
      EXPECT_TRUE(m.is_missing(0, b.first));
    }
  }
  EXPECT_EQ(m.missing_count(), 1u);
}

TEST(EncoderTest, NumericOnlySchemaKeepsValues) {
  CohortSchema s({{"x", FeatureKind::kReal}, {"n", FeatureKind::kInteger},
                  {"b", FeatureKind::kBoolean}},
                 "y");
  Cohort c{s, {}};
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    PatientRecord r;
    r.episode_id = std::to_string(i);
    r.patient_id = r.episode_id;
    r.values = {rng.normal(), static_cast<double>(rng.uniform_int(9)),
                static_cast<double>(rng.uniform_int(2))};
    c.records.push_back(r);
  }
  const EncodedMatrix m = encode(c, fit_encoder(c));
  EXPECT_EQ(m.cols, 3u);
  for (std::size_t r = 0; r < 20; ++r) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(m.at(r, j), std::get<double>(c.records[r].values[j]));
    }
  }
}

TEST(EncoderTest, FitOnRowsIgnoresOtherRows) {
  std::vector<PatientRecord> rows = {full_record("1", {{"Service", std::string("MED")}}),
                                     full_record("2", {{"Service", std::string("ONC")}})};
  const std::vector<std::size_t> train = {0};
  const Encoder enc = fit_encoder(cohort_of(rows), train);
  for (const auto& b : enc.layout().blocks) {
    if (b.feature == "Service") {
      EXPECT_EQ(b.categories, std::vector<std::string>{"MED"});
    }
  }
}

TEST(StratifiedSplitTest, CountsFollowTheRoundingRule) {
  std::vector<int> labels(1000, 0);
  for (int i = 0; i < 124; ++i) labels[i * 8] = 1;
  const SplitIndices s = stratified_split(labels, 0.2, 3);
  int pos = 0;
  for (auto i : s.test) pos += labels[i];
  EXPECT_EQ(pos, 25);
  EXPECT_EQ(s.test.size() - pos, 175u);
  EXPECT_EQ(s.train.size() + s.test.size(), 1000u);
  EXPECT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
}

TEST(StratifiedSplitTest, SmallBalancedCase) {
  const std::vector<int> labels = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
  const SplitIndices s = stratified_split(labels, 0.2, 8);
  ASSERT_EQ(s.test.size(), 2u);
  EXPECT_EQ(labels[s.test[0]] + labels[s.test[1]], 1);
}

TEST(StratifiedSplitTest, DeterministicAndDisjoint) {
  Rng rng(2);
  std::vector<int> labels(500);
  for (int& y : labels) y = rng.bernoulli(0.3);
  const SplitIndices a = stratified_split(labels, 0.25, 77);
  const SplitIndices b = stratified_split(labels, 0.25, 77);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train, b.train);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  for (auto i : a.test) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 500u);
  EXPECT_NE(stratified_split(labels, 0.25, 78).test, a.test);
}

TEST(StratifiedSplitTest, RejectsBadInput) {
  EXPECT_THROW(stratified_split(std::vector<int>{1, 1, 1}, 0.2, 1), DataError);
  EXPECT_THROW(stratified_split(std::vector<int>{1, 0, 1}, 1.0, 1), DataError);
  EXPECT_THROW(stratified_split(std::vector<int>{1, 0, 1}, 0.0, 1), DataError);
}

}  // namespace
}  // namespace arx
