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

#include "arx/commands.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "arx/csv.h"
#include "arx/error.h"
#include "arx/options.h"
#include "arx/parallel.h"
#include "arx/persist.h"
#include "arx/scorer.h"
#include "arx/synth.h"

namespace arx::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> config;
  std::optional<fs::path> out;
  bool quiet = false;
  unsigned threads = 0;
};

fs::path require_out(const GlobalOptions& g, const char* command) {
  if (!g.out) throw UsageError(std::string(command) + ": --out is required");
  return *g.out;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

Cohort load_training_cohort(const fs::path& data, bool keep_all_episodes,
                            std::uint64_t seed) {
  Cohort cohort = load_csv(data, default_schema());
  if (!cohort.has_labels()) {
    throw DataError(data.string() + ": every row needs an exitus_1y label");
  }
  return keep_all_episodes ? cohort : one_episode_per_patient(cohort, seed);
}

// --- synth ---------------------------------------------------------------------

struct SynthOptions {
  std::optional<std::size_t> n;
  std::optional<fs::path> truth;
};

fs::path default_truth_path(const fs::path& out) {
  fs::path p = out;
  std::string stem = out.filename().string();
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") {
    stem.resize(stem.size() - 4);
  }
  return p.replace_filename(stem + ".truth.csv");
}

int cmd_synth(const GlobalOptions& g, const SynthOptions& o) {
  const fs::path out = require_out(g, "synth");
  GeneratorConfig cfg = g.config ? load_generator_config(*g.config) : default_generator_config();
  if (g.seed) cfg.seed = *g.seed;
  if (o.n) cfg.n = *o.n;
  auto [cohort, truth] = generate_cohort(cfg);
  const fs::path truth_path = o.truth ? *o.truth : default_truth_path(out);
  write_csv(cohort, out);
  write_text_file_atomic(truth_path, ground_truth_csv(cohort, truth));
  if (!g.quiet) {
    double positives = 0.0;
    for (int y : truth.outcome) positives += y;
    std::cout << "wrote " << cohort.size() << " episodes to " << out.string()
              << " (prevalence " << fixed3(positives / static_cast<double>(cohort.size()))
              << ", Bayes AUC " << fixed3(bayes_auc(truth)) << ")\n"
              << "ground truth: " << truth_path.string() << "\n";
  }
  return kOk;
}

// --- train / baseline-fit --------------------------------------------------------

struct TrainOptions {
  fs::path data;
  std::string model = "gbc";
  std::optional<double> threshold;
  std::optional<fs::path> table;  // baseline-fit only
  bool keep_all_episodes = false;
};

int fit_and_save(const GlobalOptions& g, const TrainOptions& o, ModelKind kind,
                 const char* command) {
  const fs::path out = require_out(g, command);
  const std::uint64_t seed = g.seed.value_or(0);
  ModelSpec spec;
  spec.kind = kind;
  if (g.config) spec = load_model_spec(*g.config, kind);
  if (o.table) spec.profund = load_profund_table(*o.table);
  if (o.threshold && !std::isfinite(*o.threshold)) {
    throw UsageError(std::string(command) + ": --threshold must be finite");
  }
  const Cohort cohort = load_training_cohort(o.data, o.keep_all_episodes, seed);
  ModelBundle bundle = make_bundle(train_pipeline(cohort, spec, seed, o.threshold), cohort);
  save_model(bundle, out);
  if (!g.quiet) {
    std::cout << "trained " << to_string(kind) << " on " << cohort.size()
              << " episodes, threshold " << format_number(bundle.pipeline.threshold)
              << " -> " << out.string() << "\n";
  }
  return kOk;
}

int cmd_train(const GlobalOptions& g, const TrainOptions& o) {
  return fit_and_save(g, o, require_model_kind(o.model), "train");
}

int cmd_baseline_fit(const GlobalOptions& g, const TrainOptions& o) {
  const ModelKind kind = require_model_kind(o.model);
  if (kind != ModelKind::kBuurman && kind != ModelKind::kProfund) {
    throw UsageError("baseline-fit: --model must be buurman or profund");
  }
  return fit_and_save(g, o, kind, "baseline-fit");
}

// --- evaluate --------------------------------------------------------------------

struct EvaluateOptions {
  fs::path data;
  std::optional<std::string> models;
  std::optional<int> repetitions;
  std::optional<double> test_fraction;
  std::optional<std::string> threshold_mode;
  std::optional<double> threshold;
  bool keep_all_episodes = false;
  bool timings = false;
};

int cmd_evaluate(const GlobalOptions& g, const EvaluateOptions& o) {
  EvaluateSettings s = g.config ? load_evaluate_settings(*g.config) : EvaluateSettings{};
  EvalConfig& base = s.base;
  if (g.seed) base.seed = *g.seed;
  if (o.models) s.models = parse_model_list(*o.models);
  if (o.repetitions) base.repetitions = *o.repetitions;
  if (o.test_fraction) base.test_fraction = *o.test_fraction;
  if (o.threshold_mode) {
    const auto mode = parse_threshold_mode(*o.threshold_mode);
    if (!mode) {
      throw UsageError("evaluate: --threshold-mode must be fixed, calibration or "
                       "per-repetition");
    }
    base.threshold_mode = *mode;
  }
  if (o.threshold) {
    base.threshold_mode = ThresholdMode::kFixed;
    base.fixed_threshold = *o.threshold;
  }
  try {
    validate(base);
  } catch (const ConfigError& e) {
    throw UsageError(std::string("evaluate: ") + e.what());
  }
  const Cohort cohort = load_training_cohort(o.data, o.keep_all_episodes, base.seed);
  std::vector<EvaluationReport> reports;
  for (ModelKind kind : s.models) {
    EvalConfig cfg = base;
    cfg.model.kind = kind;
    reports.push_back(run_repeated_holdout(cohort, cfg));
  }
  if (g.out) save_reports(reports, *g.out, o.timings);
  if (!g.quiet) {
    std::cout << evaluation_table(reports);
    if (g.out) std::cout << "report: " << g.out->string() << "\n";
  }
  return kOk;
}

// --- score -----------------------------------------------------------------------

struct ScoreOptions {
  fs::path model;
  fs::path input;
  bool watch = false;
  double interval_seconds = 86400.0;
  std::size_t max_cycles = 0;
};

int cmd_score(const GlobalOptions& g, const ScoreOptions& o) {
  if (!(o.interval_seconds >= 0.0)) throw UsageError("score: --interval must be >= 0");
  ScorerOptions s;
  s.bundle = o.model;
  s.input = o.input;
  s.log = require_out(g, "score");
  s.watch = o.watch;
  s.interval = std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(o.interval_seconds * 1000.0)));
  s.max_cycles = o.max_cycles;
  s.quiet = g.quiet;
  run_scorer(s);
  return kOk;
}

// --- importance ------------------------------------------------------------------

struct ImportanceOptions {
  fs::path model;
};

int cmd_importance(const GlobalOptions& g, const ImportanceOptions& o) {
  const ModelBundle bundle = load_model(o.model);
  if (!bundle.pipeline.supports_importance()) {
    throw DataError("model kind " + std::string(to_string(bundle.pipeline.kind())) +
                    " has no split-based importance (supported: gbc, rf)");
  }
  const std::vector<ImportanceRow> rows = round_importance(importance_report(bundle.pipeline));
  if (g.out) {
    std::string csv = "feature,label,percent\n";
    for (const ImportanceRow& r : rows) {
      char pct[32];
      std::snprintf(pct, sizeof(pct), "%.2f", r.percent);
      csv += csv_escape(r.feature) + "," + csv_escape(r.label) + "," + pct + "\n";
    }
    write_text_file_atomic(*g.out, csv);
  }
  if (!g.quiet) std::cout << importance_table(rows);
  return kOk;
}

int guarded_run(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    std::cerr << "arx: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "arx: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "arx: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "arx: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace

std::string format_estimate(const MetricSummary& m) {
  return fixed3(m.mean) + " [" + fixed3(m.ci_low) + ", " + fixed3(m.ci_high) + "]";
}

std::string evaluation_table(std::span<const EvaluationReport> reports) {
  const char* headers[] = {"Accuracy", "AUC ROC", "Specificity", "Sensitivity", "BER"};
  char line[512];
  std::string out;
  std::snprintf(line, sizeof(line), "%-9s %-10s", "Model", "Threshold");
  out += line;
  for (const char* h : headers) {
    std::snprintf(line, sizeof(line), " %-22s", h);
    out += line;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  out += "\n";
  for (const EvaluationReport& r : reports) {
    std::string row;
    std::snprintf(line, sizeof(line), "%-9s %-10s", r.model.c_str(), fixed3(r.threshold).c_str());
    row += line;
    for (std::string_view name : kMetricNames) {
      std::snprintf(line, sizeof(line), " %-22s", format_estimate(r.metric(name)).c_str());
      row += line;
    }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row + "\n";
  }
  return out;
}

std::vector<ImportanceRow> round_importance(std::vector<ImportanceRow> rows) {
  if (rows.empty()) return rows;
  double total = 0.0;
  for (const ImportanceRow& r : rows) total += r.percent;
  if (total <= 0.0) return rows;
  // Work in hundredths of a percent.
  std::vector<long long> cents(rows.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  long long assigned = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double exact = rows[i].percent / total * 10000.0;
    cents[i] = static_cast<long long>(std::floor(exact));
    assigned += cents[i];
    remainders.emplace_back(exact - static_cast<double>(cents[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (long long k = 0; k < 10000 - assigned && k < static_cast<long long>(rows.size()); ++k) {
    ++cents[remainders[static_cast<std::size_t>(k)].second];
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].percent = static_cast<double>(cents[i]) / 100.0;
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ImportanceRow& a, const ImportanceRow& b) {
    return a.percent > b.percent;
  });
  return rows;
}

std::string importance_table(std::span<const ImportanceRow> rows) {
  std::size_t width = 7;
  for (const ImportanceRow& r : rows) width = std::max(width, r.label.size());
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-*s  %10s\n", static_cast<int>(width), "Feature",
                "Importance");
  out += line;
  for (const ImportanceRow& r : rows) {
    std::snprintf(line, sizeof(line), "%-*s  %10.2f\n", static_cast<int>(width),
                  r.label.c_str(), r.percent);
    out += line;
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"arx: one-year mortality risk models for hospital admissions"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--config", g.config, "Configuration file for the subcommand");
  app.add_option("--out", g.out, "Output path");
  app.add_flag("--quiet", g.quiet, "Suppress console output");
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled cohort");
  synth_cmd->add_option("--n", synth.n, "Number of episodes");
  synth_cmd->add_option("--truth", synth.truth, "Ground-truth CSV path");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Fit a model and write a bundle");
  train_cmd->add_option("--data", train.data, "Labeled cohort CSV")->required();
  train_cmd->add_option("--model", train.model, "gbc, rf, knn, buurman or profund");
  train_cmd->add_option("--threshold", train.threshold, "Fixed decision threshold");
  train_cmd->add_flag("--keep-all-episodes", train.keep_all_episodes,
                      "Skip the one-episode-per-patient filter");

  TrainOptions baseline;
  baseline.model = "buurman";
  auto* baseline_cmd =
      app.add_subcommand("baseline-fit", "Fit a clinical baseline index and write a bundle");
  baseline_cmd->add_option("--data", baseline.data, "Labeled cohort CSV")->required();
  baseline_cmd->add_option("--model", baseline.model, "buurman or profund");
  baseline_cmd->add_option("--table", baseline.table, "PROFUND item table");
  baseline_cmd->add_option("--threshold", baseline.threshold, "Fixed decision threshold");
  baseline_cmd->add_flag("--keep-all-episodes", baseline.keep_all_episodes,
                         "Skip the one-episode-per-patient filter");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Repeated stratified hold-out evaluation");
  eval_cmd->add_option("--data", eval.data, "Labeled cohort CSV")->required();
  eval_cmd->add_option("--models", eval.models, "Comma-separated model kinds");
  eval_cmd->add_option("--repetitions", eval.repetitions, "Hold-out repetitions");
  eval_cmd->add_option("--test-fraction", eval.test_fraction, "Test share of each split");
  eval_cmd->add_option("--threshold-mode", eval.threshold_mode,
                       "fixed, calibration or per-repetition");
  eval_cmd->add_option("--threshold", eval.threshold, "Fixed threshold (implies fixed mode)");
  eval_cmd->add_flag("--keep-all-episodes", eval.keep_all_episodes,
                     "Skip the one-episode-per-patient filter");
  eval_cmd->add_flag("--timings", eval.timings, "Store per-repetition timings in the report");

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score admitted patients into a log");
  score_cmd->add_option("--model", score.model, "Model bundle")->required();
  score_cmd->add_option("--input", score.input, "CSV file or directory of CSV files")
      ->required();
  score_cmd->add_flag("--watch", score.watch, "Re-scan the input periodically");
  score_cmd->add_option("--interval", score.interval_seconds, "Seconds between scans");
  score_cmd->add_option("--max-cycles", score.max_cycles, "Stop after this many scans");

  ImportanceOptions importance;
  auto* importance_cmd =
      app.add_subcommand("importance", "Print a bundle's feature importance table");
  importance_cmd->add_option("--model", importance.model, "Model bundle")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  set_max_threads(g.threads);
  return guarded_run([&] {
    if (*synth_cmd) return cmd_synth(g, synth);
    if (*train_cmd) return cmd_train(g, train);
    if (*baseline_cmd) return cmd_baseline_fit(g, baseline);
    if (*eval_cmd) return cmd_evaluate(g, eval);
    if (*score_cmd) return cmd_score(g, score);
    return cmd_importance(g, importance);
  });
}

}  // namespace arx::cli
