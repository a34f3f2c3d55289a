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

#ifndef ARX_TESTS_SUPPORT_H_
#define ARX_TESTS_SUPPORT_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arx/dataset.h"
#include "arx/random.h"
#include "arx/schema.h"

namespace arx::testing {

// A fully observed record of the default schema with plausible values.
inline PatientRecord full_record(const std::string& episode_id,
                                 std::map<std::string, FeatureValue> overrides = {}) {
  const CohortSchema& s = default_schema();
  PatientRecord r;
  r.patient_id = "P" + episode_id;
  r.episode_id = episode_id;
  r.values.resize(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const FeatureSpec& f = s.feature(j);
    switch (f.kind) {
      case FeatureKind::kCategorical:
        r.values[j] = std::string(f.name == "Sex" ? "female" : "A");
        break;
      case FeatureKind::kBoolean:
        r.values[j] = 0.0;
        break;
      default:
        r.values[j] = 1.0;
    }
  }
  for (auto& [name, value] : overrides) r.values[s.require_index(name)] = value;
  return r;
}

// Matrix of real columns f0, f1, ... with no missing cells.
inline EncodedMatrix numeric_matrix(std::size_t rows, std::size_t cols,
                                    std::vector<double> values) {
  EncodedMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.values = std::move(values);
  m.mask.assign(rows * cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    ColumnBlock b;
    b.feature = "f" + std::to_string(c);
    b.kind = FeatureKind::kReal;
    b.first = c;
    b.width = 1;
    m.layout.blocks.push_back(b);
  }
  m.layout.columns = cols;
  return m;
}

inline EncodedMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                   int distinct = 0) {
  std::vector<double> v(rows * cols);
  for (double& x : v) {
    x = distinct > 0 ? static_cast<double>(rng.uniform_int(distinct)) : rng.normal();
  }
  return numeric_matrix(rows, cols, std::move(v));
}

inline std::vector<std::size_t> iota_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

// Labels from a noisy linear rule; both classes are always present.
inline std::vector<int> noisy_labels(const EncodedMatrix& m, Rng& rng) {
  std::vector<int> y(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) s += (c % 2 ? -1.0 : 1.0) * m.at(r, c);
    y[r] = s + 0.7 * rng.normal() > 0.0 ? 1 : 0;
  }
  y[0] = 0;
  y[m.rows - 1] = 1;
  return y;
}

// --- Independent oracles -------------------------------------------------------

// Pairwise Mann-Whitney statistic: P(s+ > s-) + P(s+ == s-) / 2.
inline double mann_whitney_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double concordant = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) {
        concordant += 1.0;
      } else if (s[i] == s[j]) {
        concordant += 0.5;
      }
    }
  }
  return concordant / pairs;
}

inline double ber_at(const std::vector<double>& s, const std::vector<int>& y, double t) {
  double tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool pred = s[i] >= t;
    if (y[i] == 1) {
      (pred ? tp : fn) += 1;
    } else {
      (pred ? fp : tn) += 1;
    }
  }
  return 1.0 - (tp / (tp + fn) + tn / (tn + fp)) / 2.0;
}

// Minimum BER over every distinct partition "score >= t": each observed score
// as t, plus a t above the maximum.
inline double exhaustive_min_ber(const std::vector<double>& s, const std::vector<int>& y) {
  double best = ber_at(s, y, std::numeric_limits<double>::infinity());
  for (double t : s) best = std::min(best, ber_at(s, y, t));
  return best;
}

inline std::vector<std::size_t> brute_force_neighbors(const EncodedMatrix& train,
                                                      const std::vector<double>& q,
                                                      std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t r = 0; r < train.rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < train.cols; ++c) {
      const double diff = train.at(r, c) - q[c];
      s += diff * diff;
    }
    d.emplace_back(s, r);
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(d[i].second);
  return out;
}

inline double sort_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Solves (X'X) b = X'y by Gauss-Jordan elimination with partial pivoting.
// X includes the intercept column.
inline std::vector<double> normal_equations_ols(const std::vector<std::vector<double>>& x,
                                                const std::vector<double>& y) {
  const std::size_t p = x.front().size();
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += x[r][i] * x[r][j];
      a[i][p] += x[r][i] * y[r];
    }
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t j = col; j <= p; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<double> b(p);
  for (std::size_t i = 0; i < p; ++i) b[i] = a[i][p] / a[i][i];
  return b;
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("arx_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace arx::testing

#endif  // ARX_TESTS_SUPPORT_H_
