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

#include "arx/scorer.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include "arx/csv.h"
#include "arx/dataset.h"
#include "arx/error.h"
#include "json.hpp"

namespace arx::cli {

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) {
      throw DataError("cannot open lock file " + path.string() + ": " + std::strerror(errno));
    }
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw DataError("another scorer holds " + path.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

// One write(2) on an O_APPEND descriptor, then fsync.
void append_all(const std::filesystem::path& path, const std::string& text) {
  if (text.empty()) return;
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw DataError("cannot open " + path.string() + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < text.size()) {
    const ssize_t n = ::write(fd, text.data() + done, text.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw DataError("cannot append to " + path.string() + ": " + std::strerror(err));
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::filesystem::path> input_files(const std::filesystem::path& input) {
  if (!std::filesystem::is_directory(input)) {
    if (!std::filesystem::exists(input)) throw DataError("input not found: " + input.string());
    return {input};
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string rfc3339(std::chrono::system_clock::time_point t) {
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const std::size_t n = std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof(buf) - n, ".%03dZ", static_cast<int>(ms % 1000));
  return buf;
}

class Scorer {
 public:
  explicit Scorer(const ScorerOptions& options)
      : options_(options),
        header_(peek_header(options.bundle)),
        bundle_(load_model(options.bundle)) {
    model_id_ = header_.kind + "/v" + std::to_string(header_.format_version) + "/" +
                header_.checksum;
    for (std::string& id : read_lines(seen_sidecar(options.log))) seen_.insert(std::move(id));
    for (const std::string& line : read_lines(errors_sidecar(options.log))) {
      try {
        const auto j = nlohmann::json::parse(line);
        reported_.insert(error_key(j.at("source").get<std::string>(),
                                   j.at("raw").get<std::string>()));
      } catch (const nlohmann::json::exception&) {
        // A damaged sidecar line only means the error may be reported again.
      }
    }
  }

  CycleStats cycle() {
    CycleStats stats;
    std::vector<PatientRecord> fresh;
    std::string error_lines;
    const std::string now = timestamp();
    std::set<std::string> batch_ids;
    for (const auto& file : input_files(options_.input)) {
      CsvLoadResult loaded = load_csv_lenient(file, bundle_.pipeline.schema);
      for (const RowError& e : loaded.rejected) {
        ++stats.rejected;
        const std::string key = error_key(file.string(), e.raw);
        if (!reported_.insert(key).second) continue;
        error_lines += error_json(now, file.string(), e) + "\n";
      }
      for (PatientRecord& r : loaded.cohort.records) {
        if (seen_.count(r.episode_id) || !batch_ids.insert(r.episode_id).second) {
          ++stats.already_seen;
          continue;
        }
        fresh.push_back(std::move(r));
      }
    }

    std::string log_lines, seen_lines;
    const std::vector<double> scores = score_all(fresh, now, error_lines, stats);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      if (scores[i] < 0.0) continue;
      log_lines += log_json(now, fresh[i], scores[i]) + "\n";
      seen_lines += fresh[i].episode_id + "\n";
      seen_.insert(fresh[i].episode_id);
      ++stats.scored;
    }
    append_all(options_.log, log_lines);
    append_all(seen_sidecar(options_.log), seen_lines);
    append_all(errors_sidecar(options_.log), error_lines);
    return stats;
  }

 private:
  static std::string error_key(const std::string& source, const std::string& raw) {
    return source + '\x1f' + raw;
  }

  // Scores the batch at once; when that fails, row by row so one bad row
  // cannot sink the rest. Failed rows get a negative score.
  std::vector<double> score_all(const std::vector<PatientRecord>& records,
                                const std::string& now, std::string& error_lines,
                                CycleStats& stats) {
    if (records.empty()) return {};
    try {
      return bundle_.pipeline.score(records);
    } catch (const Error&) {
    }
    std::vector<double> out(records.size(), -1.0);
    for (std::size_t i = 0; i < records.size(); ++i) {
      try {
        out[i] = bundle_.pipeline.score(std::span(&records[i], 1)).front();
      } catch (const Error& e) {
        ++stats.rejected;
        RowError err;
        err.message = e.what();
        err.episode_id = records[i].episode_id;
        error_lines += error_json(now, options_.input.string(), err) + "\n";
      }
    }
    return out;
  }

  std::string timestamp() {
    auto t = std::chrono::system_clock::now();
    if (t < last_) t = last_;
    last_ = t;
    return rfc3339(t);
  }

  std::string log_json(const std::string& now, const PatientRecord& r, double score) const {
    nlohmann::ordered_json j;
    j["timestamp"] = now;
    j["patient_id"] = r.patient_id;
    j["episode_id"] = r.episode_id;
    j["score"] = score;
    j["label"] = score >= bundle_.pipeline.threshold ? 1 : 0;
    j["threshold"] = bundle_.pipeline.threshold;
    j["model"] = model_id_;
    return j.dump();
  }

  static std::string error_json(const std::string& now, const std::string& source,
                                const RowError& e) {
    nlohmann::ordered_json j;
    j["timestamp"] = now;
    j["source"] = source;
    j["row"] = e.row;
    j["line"] = e.line;
    j["column"] = e.column;
    j["episode_id"] = e.episode_id;
    j["message"] = e.message;
    j["raw"] = e.raw;
    return j.dump();
  }

  const ScorerOptions& options_;
  FileHeader header_;
  ModelBundle bundle_;
  std::string model_id_;
  std::set<std::string> seen_;
  std::set<std::string> reported_;
  std::chrono::system_clock::time_point last_{};
};

void report(const ScorerOptions& options, const CycleStats& s) {
  if (options.quiet) return;
  std::cerr << "scored " << s.scored << ", already logged " << s.already_seen
            << ", rejected " << s.rejected << "\n";
}

}  // namespace

std::filesystem::path seen_sidecar(const std::filesystem::path& log) {
  return log.string() + ".seen";
}
std::filesystem::path errors_sidecar(const std::filesystem::path& log) {
  return log.string() + ".errors";
}
std::filesystem::path lock_sidecar(const std::filesystem::path& log) {
  return log.string() + ".lock";
}

CycleStats run_scorer(const ScorerOptions& options) {
  FileLock lock(lock_sidecar(options.log));
  Scorer scorer(options);
  CycleStats total;
  if (!options.watch) {
    total = scorer.cycle();
    report(options, total);
    return total;
  }
  g_stop.store(false);
  auto old_int = std::signal(SIGINT, on_signal);
  auto old_term = std::signal(SIGTERM, on_signal);
  for (std::size_t cycle = 0; !g_stop.load(); ++cycle) {
    const CycleStats s = scorer.cycle();
    report(options, s);
    total.scored += s.scored;
    total.already_seen += s.already_seen;
    total.rejected += s.rejected;
    if (options.max_cycles != 0 && cycle + 1 >= options.max_cycles) break;
    const auto wake = std::chrono::steady_clock::now() + options.interval;
    while (!g_stop.load() && std::chrono::steady_clock::now() < wake) {
      std::this_thread::sleep_for(std::min<std::chrono::steady_clock::duration>(
          std::chrono::milliseconds(200), wake - std::chrono::steady_clock::now()));
    }
  }
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  return total;
}

}  // namespace arx::cli
