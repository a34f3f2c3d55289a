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

#include "arx/synth.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "arx/csv.h"
#include "arx/error.h"
#include "arx/metrics.h"
#include "arx/parallel.h"
#include "arx/random.h"
#include "json.hpp"

namespace arx {

namespace {

constexpr std::uint64_t kPilotStream = 0x9110;
constexpr std::uint64_t kPatientStream = 0x9A71;
constexpr int kMaxRejections = 1000;

// --- Default configuration --------------------------------------------------

NumericFeatureConfig num(std::string name, double mean, double sd, double lower,
                         double upper, double missing_rate, double weight) {
  return {std::move(name), mean, sd, lower, upper, missing_rate, weight};
}

}  // namespace

GeneratorConfig default_generator_config() {
  GeneratorConfig cfg;
  // Missing rates are missing counts over 65279 episodes.
  const double episodes = 65279.0;
  cfg.numeric = {
      num("Age", 61.327, 18.375, 18, 110, 0.0, 1.14),
      num("PrevStays", 6.119, 9.502, 0, 200, 0.0, 0.36),
      num("Barthel", 67.268, 37.919, 0, 100, 56214 / episodes, -0.36),
      num("PrevAdmissions", 0.300, 0.789, 0, 50, 0.0, 0.18),
      num("PrevEmergencyRoom", 0.935, 1.691, 0, 100, 0.0, 0.18),
      num("Charlson", 4.233, 3.238, 0, 37, 0.0, 0.48),
      num("Albumin", 2.955, 0.677, 0.5, 6.5, 46857 / episodes, -0.54),
      num("Creatinine", 0.505, 1.063, 0.05, 20, 16920 / episodes, 0.66),
      num("Hemoglobin", 11.703, 2.228, 3, 22, 14434 / episodes, -0.42),
      num("Leucocytes", 9.457, 7.389, 0, 150, 14434 / episodes, 0.9),
      num("PCR", 63.083, 84.481, 0, 600, 30285 / episodes, 0.78),
      num("Sodium", 139.672, 4.354, 110, 170, 17183 / episodes, -0.3),
      num("Urea", 46.255, 34.628, 2, 400, 18459 / episodes, 1.74),
  };
  cfg.boolean = {
      {"UrgentAdmission", 0.5697, 0.24},
      {"AcuteMyocardialInfarction", 0.0309, 0.06},
      {"CongestiveHeartFailure", 0.0614, 0.18},
      {"PeripheralVascularDisease", 0.0488, 0.06},
      {"CerebrovascularDisease", 0.0676, 0.06},
      {"Dementia", 0.0150, 0.12},
      {"ChronicPulmonaryDisease", 0.1003, 0.12},
      {"RheumaticDisease", 0.0160, 0.036},
      {"PepticUlcerDisease", 0.0157, 0.036},
      {"MildLiverDisease", 0.0577, 0.06},
      {"DiabetesWithoutComplications", 0.1319, 0.06},
      {"DiabetesWithComplications", 0.0127, 0.036},
      {"HemiplegiaParaplegia", 0.0128, 0.036},
      {"RenalDisease", 0.0746, 0.12},
      {"Malignancy", 0.1820, 0.24},
      {"ModerateSevereLiverDisease", 0.0149, 0.096},
      {"Metastasis", 0.0327, 0.3},
      {"AIDS", 0.0057, 0.02},
      {"Delirium", 0.0012, 0.024},
  };
  cfg.categorical = {
      {"Sex", {{"female", 0.4814, 0.0}, {"male", 0.5186, 1.0}}, 0.12},
      {"AdmissionDestination",
       {{"HOME_HOSPITALIZATION", 0.05, 0.8},
        {"ICU", 0.05, 1.0},
        {"SHORT_STAY", 0.10, -0.5},
        {"WARD", 0.80, 0.0}},
       0.42},
      {"Service",
       {{"CAR", 0.10, 0.3},
        {"CGD", 0.14, -0.6},
        {"DIG", 0.09, 0.4},
        {"HEM", 0.04, 1.5},
        {"MIR", 0.20, 1.0},
        {"NEF", 0.03, 0.7},
        {"NML", 0.07, 0.8},
        {"NRL", 0.06, 0.3},
        {"ONC", 0.06, 2.0},
        {"ORL", 0.04, -1.0},
        {"TRA", 0.10, -0.8},
        {"URO", 0.07, -0.7}},
       1.44},
      {"AdmissionCause",
       {{"MEDICAL", 0.60, 0.3},
        {"OTHER", 0.05, 0.0},
        {"SURGICAL", 0.25, -0.5},
        {"TRAUMA", 0.10, -0.3}},
       0.24},
  };
  return cfg;
}

namespace {

// Resolved generation plan for one schema feature.
struct FeaturePlan {
  FeatureKind kind = FeatureKind::kReal;
  const NumericFeatureConfig* numeric = nullptr;
  const BooleanFeatureConfig* boolean = nullptr;
  const CategoricalFeatureConfig* categorical = nullptr;
  std::vector<double> cumulative;  // categorical
  std::vector<double> z_effect;    // categorical, standardized effects
  double weight = 0.0;
};

std::vector<FeaturePlan> make_plan(const GeneratorConfig& cfg,
                                   const CohortSchema& schema) {
  validate(cfg, schema);
  std::vector<FeaturePlan> plan(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) plan[j].kind = schema.feature(j).kind;
  for (const auto& f : cfg.numeric) {
    FeaturePlan& p = plan[schema.require_index(f.name)];
    p.numeric = &f;
    p.weight = f.weight;
  }
  for (const auto& f : cfg.boolean) {
    FeaturePlan& p = plan[schema.require_index(f.name)];
    p.boolean = &f;
    p.weight = f.weight;
  }
  for (const auto& f : cfg.categorical) {
    FeaturePlan& p = plan[schema.require_index(f.name)];
    p.categorical = &f;
    p.weight = f.weight;
    double acc = 0.0, mean = 0.0;
    for (const auto& level : f.levels) {
      acc += level.probability;
      p.cumulative.push_back(acc);
      mean += level.probability * level.effect;
    }
    double var = 0.0;
    for (const auto& level : f.levels) {
      var += level.probability * (level.effect - mean) * (level.effect - mean);
    }
    const double sd = std::sqrt(var);
    for (const auto& level : f.levels) {
      p.z_effect.push_back(sd > 0.0 ? (level.effect - mean) / sd : 0.0);
    }
  }
  return plan;
}

double draw_numeric(const NumericFeatureConfig& f, bool integer, Rng& rng) {
  if (f.sd == 0.0) {
    const double v = integer ? std::round(f.mean) : f.mean;
    return std::min(std::max(v, f.lower), f.upper);
  }
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    double v = f.mean + f.sd * rng.normal();
    if (integer) v = std::round(v);
    if (v >= f.lower && v <= f.upper) return v;
  }
  const double v = std::min(std::max(f.mean, f.lower), f.upper);
  return integer ? std::round(v) : v;
}

// Draws every feature of one row and returns the linear risk.
double draw_row(const std::vector<FeaturePlan>& plan, Rng& rng,
                std::vector<FeatureValue>* values) {
  double risk = 0.0;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const FeaturePlan& p = plan[j];
    double z = 0.0;
    if (p.numeric) {
      const NumericFeatureConfig& f = *p.numeric;
      const double x = draw_numeric(f, p.kind == FeatureKind::kInteger, rng);
      z = f.sd > 0.0 ? (x - f.mean) / f.sd : 0.0;
      if (values) (*values)[j] = x;
    } else if (p.boolean) {
      const double rate = p.boolean->positive_rate;
      const double b = rng.bernoulli(rate) ? 1.0 : 0.0;
      const double sd = std::sqrt(rate * (1.0 - rate));
      z = sd > 0.0 ? (b - rate) / sd : 0.0;
      if (values) (*values)[j] = b;
    } else if (p.categorical) {
      const double u = rng.uniform();
      std::size_t k = 0;
      while (k + 1 < p.cumulative.size() && u >= p.cumulative[k]) ++k;
      z = p.z_effect[k];
      if (values) (*values)[j] = p.categorical->levels[k].name;
    }
    risk += p.weight * z;
  }
  return risk;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double calibrate_on(const std::vector<double>& risks, double prevalence) {
  auto mean_prob = [&](double b) {
    double s = 0.0;
    for (double r : risks) s += logistic(b + r);
    return s / static_cast<double>(risks.size());
  };
  double lo = -50.0, hi = 50.0, mid = 0.0, achieved = 0.0;
  for (int step = 0; step < 100; ++step) {
    mid = lo + (hi - lo) / 2.0;
    achieved = mean_prob(mid);
    if (achieved == prevalence || hi - lo < 1e-12) break;
    if (achieved < prevalence) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::abs(achieved - prevalence) > 0.002) {
    throw ConfigError("intercept calibration did not converge (achieved prevalence " +
                      std::to_string(achieved) + ")");
  }
  return mid;
}

std::vector<double> pilot_risks(const GeneratorConfig& cfg,
                                const std::vector<FeaturePlan>& plan) {
  std::vector<double> risks(cfg.pilot_size);
  const std::uint64_t pilot_seed = derive_seed(cfg.seed, kPilotStream);
  parallel_for(risks.size(), [&](std::size_t i) {
    Rng rng(derive_seed(pilot_seed, i));
    risks[i] = draw_row(plan, rng, nullptr);
  });
  return risks;
}

}  // namespace

void validate(const GeneratorConfig& cfg, const CohortSchema& schema) {
  if (cfg.n < 1) throw ConfigError("generator: n must be >= 1");
  if (!(cfg.prevalence > 0.0 && cfg.prevalence < 1.0)) {
    throw ConfigError("generator: prevalence must lie in (0, 1)");
  }
  if (cfg.pilot_size < 1) throw ConfigError("generator: pilot_size must be >= 1");
  if (cfg.episodes_per_patient.empty()) {
    throw ConfigError("generator: episodes_per_patient must not be empty");
  }
  double episodes_total = 0.0;
  for (double p : cfg.episodes_per_patient) {
    if (p < 0.0) throw ConfigError("generator: negative episodes_per_patient probability");
    episodes_total += p;
  }
  if (std::abs(episodes_total - 1.0) > 1e-6) {
    throw ConfigError("generator: episodes_per_patient probabilities sum to " +
                      std::to_string(episodes_total) + ", expected 1");
  }
  std::vector<int> configured(schema.size(), 0);
  auto claim = [&](const std::string& name, FeatureKind kind) -> const FeatureSpec& {
    auto idx = schema.index_of(name);
    if (!idx) throw ConfigError("generator: unknown feature " + name);
    const FeatureSpec& spec = schema.feature(*idx);
    const bool ok = kind == FeatureKind::kReal ? is_numeric(spec.kind) : spec.kind == kind;
    if (!ok) {
      throw ConfigError("generator: feature " + name + " is " +
                        std::string(to_string(spec.kind)) + " in the schema");
    }
    if (++configured[*idx] > 1) {
      throw ConfigError("generator: feature " + name + " configured twice");
    }
    return spec;
  };
  for (const auto& f : cfg.numeric) {
    const FeatureSpec& spec = claim(f.name, FeatureKind::kReal);
    if (!(f.sd >= 0.0) || !std::isfinite(f.mean)) {
      throw ConfigError("generator: feature " + f.name + " needs a finite mean and sd >= 0");
    }
    if (!(f.lower <= f.upper)) {
      throw ConfigError("generator: feature " + f.name + " has lower > upper");
    }
    if (!(f.missing_rate >= 0.0 && f.missing_rate < 1.0)) {
      throw ConfigError("generator: feature " + f.name + " missing_rate must lie in [0, 1)");
    }
    if (f.missing_rate > 0.0 && !spec.missing_allowed) {
      throw ConfigError("generator: feature " + f.name + " may not be missing");
    }
  }
  for (const auto& f : cfg.boolean) {
    claim(f.name, FeatureKind::kBoolean);
    if (!(f.positive_rate >= 0.0 && f.positive_rate <= 1.0)) {
      throw ConfigError("generator: feature " + f.name + " positive_rate must lie in [0, 1]");
    }
  }
  for (const auto& f : cfg.categorical) {
    claim(f.name, FeatureKind::kCategorical);
    if (f.levels.empty()) throw ConfigError("generator: feature " + f.name + " has no levels");
    double total = 0.0;
    std::map<std::string, int> names;
    for (const auto& level : f.levels) {
      if (level.probability < 0.0) {
        throw ConfigError("generator: feature " + f.name + " has a negative probability");
      }
      if (level.name.empty() || ++names[level.name] > 1) {
        throw ConfigError("generator: feature " + f.name + " has an empty or repeated level");
      }
      total += level.probability;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      throw ConfigError("generator: feature " + f.name + " probabilities sum to " +
                        std::to_string(total) + ", expected 1");
    }
  }
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (configured[j] == 0) {
      throw ConfigError("generator: feature " + schema.feature(j).name + " is not configured");
    }
  }
}

double calibrate_intercept(const GeneratorConfig& cfg, const CohortSchema& schema) {
  const std::vector<FeaturePlan> plan = make_plan(cfg, schema);
  return calibrate_on(pilot_risks(cfg, plan), cfg.prevalence);
}

std::pair<Cohort, GroundTruth> generate_cohort(const GeneratorConfig& cfg,
                                               const CohortSchema& schema) {
  const std::vector<FeaturePlan> plan = make_plan(cfg, schema);
  GroundTruth truth;
  truth.intercept = calibrate_on(pilot_risks(cfg, plan), cfg.prevalence);

  Cohort cohort{schema, {}};
  cohort.records.resize(cfg.n);
  truth.linear_risk.resize(cfg.n);
  truth.true_risk.resize(cfg.n);
  truth.outcome.resize(cfg.n);

  parallel_for(cfg.n, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    PatientRecord& rec = cohort.records[i];
    rec.values.assign(schema.size(), std::monostate{});
    const double risk = draw_row(plan, rng, &rec.values);
    const double p = logistic(truth.intercept + risk);
    const int y = rng.bernoulli(p) ? 1 : 0;
    // Missingness after the outcome draw, from the row's own stream.
    for (std::size_t j = 0; j < plan.size(); ++j) {
      if (plan[j].numeric && plan[j].numeric->missing_rate > 0.0 &&
          rng.bernoulli(plan[j].numeric->missing_rate)) {
        rec.values[j] = std::monostate{};
      }
    }
    rec.outcome = y;
    char id[32];
    std::snprintf(id, sizeof(id), "E%07zu", i + 1);
    rec.episode_id = id;
    truth.linear_risk[i] = risk;
    truth.true_risk[i] = p;
    truth.outcome[i] = y;
  });

  // Patient ids: consecutive rows are grouped into patients of 1, 2, ...
  // episodes drawn from episodes_per_patient.
  Rng patient_rng(derive_seed(cfg.seed, kPatientStream));
  std::size_t patient = 0, remaining = 0;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    if (remaining == 0) {
      ++patient;
      const double u = patient_rng.uniform();
      double acc = 0.0;
      remaining = cfg.episodes_per_patient.size();
      for (std::size_t k = 0; k < cfg.episodes_per_patient.size(); ++k) {
        acc += cfg.episodes_per_patient[k];
        if (u < acc) {
          remaining = k + 1;
          break;
        }
      }
    }
    char id[32];
    std::snprintf(id, sizeof(id), "P%07zu", patient);
    cohort.records[i].patient_id = id;
    --remaining;
  }
  return {std::move(cohort), std::move(truth)};
}

double bayes_auc(const GroundTruth& truth, std::span<const int> outcomes) {
  return roc_auc(truth.true_risk, outcomes);
}

double bayes_auc(const GroundTruth& truth) { return bayes_auc(truth, truth.outcome); }

std::string ground_truth_csv(const Cohort& cohort, const GroundTruth& truth) {
  std::string out = "episode_id,true_risk,outcome\n";
  for (std::size_t i = 0; i < cohort.records.size(); ++i) {
    out += csv_escape(cohort.records[i].episode_id);
    out += ',';
    out += format_number(truth.true_risk[i]);
    out += ',';
    out += std::to_string(truth.outcome[i]);
    out += '\n';
  }
  return out;
}

// --- JSON -------------------------------------------------------------------

namespace {

using nlohmann::ordered_json;

template <typename T>
T get_or(const ordered_json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

}  // namespace

std::string to_json(const GeneratorConfig& cfg) {
  ordered_json j;
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["prevalence"] = cfg.prevalence;
  j["pilot_size"] = cfg.pilot_size;
  j["episodes_per_patient"] = cfg.episodes_per_patient;
  j["numeric"] = ordered_json::array();
  for (const auto& f : cfg.numeric) {
    j["numeric"].push_back({{"name", f.name},
                            {"mean", f.mean},
                            {"sd", f.sd},
                            {"lower", f.lower},
                            {"upper", f.upper},
                            {"missing_rate", f.missing_rate},
                            {"weight", f.weight}});
  }
  j["boolean"] = ordered_json::array();
  for (const auto& f : cfg.boolean) {
    j["boolean"].push_back(
        {{"name", f.name}, {"positive_rate", f.positive_rate}, {"weight", f.weight}});
  }
  j["categorical"] = ordered_json::array();
  for (const auto& f : cfg.categorical) {
    ordered_json levels = ordered_json::array();
    for (const auto& level : f.levels) {
      levels.push_back({{"name", level.name},
                        {"probability", level.probability},
                        {"effect", level.effect}});
    }
    j["categorical"].push_back({{"name", f.name}, {"weight", f.weight}, {"levels", levels}});
  }
  return j.dump(2) + "\n";
}

GeneratorConfig parse_generator_config(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  GeneratorConfig cfg;
  try {
    cfg.n = get_or<std::size_t>(j, "n", cfg.n);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.prevalence = get_or<double>(j, "prevalence", cfg.prevalence);
    cfg.pilot_size = get_or<std::size_t>(j, "pilot_size", cfg.pilot_size);
    cfg.episodes_per_patient =
        get_or<std::vector<double>>(j, "episodes_per_patient", cfg.episodes_per_patient);
    for (const auto& f : j.value("numeric", ordered_json::array())) {
      NumericFeatureConfig c;
      c.name = f.at("name").get<std::string>();
      c.mean = f.at("mean").get<double>();
      c.sd = f.at("sd").get<double>();
      c.lower = get_or<double>(f, "lower", c.lower);
      c.upper = get_or<double>(f, "upper", c.upper);
      c.missing_rate = get_or<double>(f, "missing_rate", 0.0);
      c.weight = get_or<double>(f, "weight", 0.0);
      cfg.numeric.push_back(std::move(c));
    }
    for (const auto& f : j.value("boolean", ordered_json::array())) {
      BooleanFeatureConfig c;
      c.name = f.at("name").get<std::string>();
      c.positive_rate = f.at("positive_rate").get<double>();
      c.weight = get_or<double>(f, "weight", 0.0);
      cfg.boolean.push_back(std::move(c));
    }
    for (const auto& f : j.value("categorical", ordered_json::array())) {
      CategoricalFeatureConfig c;
      c.name = f.at("name").get<std::string>();
      c.weight = get_or<double>(f, "weight", 0.0);
      for (const auto& level : f.at("levels")) {
        c.levels.push_back({level.at("name").get<std::string>(),
                            level.at("probability").get<double>(),
                            get_or<double>(level, "effect", 0.0)});
      }
      cfg.categorical.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  return cfg;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_generator_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace arx
