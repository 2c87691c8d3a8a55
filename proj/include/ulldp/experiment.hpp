// Copyright 2026 The ulldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ULLDP_EXPERIMENT_HPP_
#define ULLDP_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ulldp/estimators.hpp"

namespace ulldp {

enum class Algo {
  auto_dispatch,
  high_privacy,
  small_m,
  medium_m,
  large_m,
  one_sample_hr,
  all_sample_hr,
};

std::string algo_name(Algo algo);
Algo algo_from_name(const std::string& name);

struct DistSpec {
  enum class Kind { uniform, two_point, explicit_vector };
  Kind kind = Kind::uniform;
  double p = 0.5;               // two_point parameter
  std::vector<double> probs;    // explicit_vector entries

  Distribution realize(int k) const;
  std::string describe() const;
};

// A run grid: every combination of (algo, m, epsilon, seed) becomes one cell.
struct ExperimentConfig {
  int k = 2;
  std::vector<std::int64_t> m_list;
  std::int64_t n = 0;
  std::vector<double> eps_list;
  DistSpec dist;
  std::vector<Algo> algos{Algo::auto_dispatch};
  ConstantsPreset constants = ConstantsPreset::experiment;
  CoinVariant variant = CoinVariant::interactive;
  std::vector<std::uint64_t> seeds;  // empty means the single default seed 0

  void validate() const;
};

struct ReportDiagnostics {
  std::int64_t coin_runs = 0;
  std::int64_t degenerate_localizations = 0;
  std::int64_t case_fallbacks = 0;
  std::int64_t conditional_fallbacks = 0;
  std::int64_t localization_total = 0;
  std::int64_t localization_hits = 0;
};

struct EstimateReport {
  Algo algo = Algo::auto_dispatch;
  std::string regime;
  int k = 0;
  std::int64_t m = 0;
  std::int64_t n = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double tv_error = 0.0;
  double runtime_ms = 0.0;
  bool user_level_private = true;
  std::vector<double> estimate;
  ReportDiagnostics diag;
};

// One grid cell. Sample streams are keyed by (seed, user) only, so different
// algorithms and different m see the same users' underlying samples; channel
// streams are additionally keyed by (algo, m, epsilon).
EstimateReport run_cell(const ExperimentConfig& cfg, Algo algo, std::int64_t m,
                        double epsilon, std::uint64_t seed);

// Runs the whole grid, cells ordered by (algo name, m, epsilon, seed).
// jobs > 1 runs cells concurrently; results are identical to the serial run.
std::vector<EstimateReport> run(const ExperimentConfig& cfg, int jobs = 1);

// CSV schema: algo,regime,k,m,n,epsilon,seed,tv_error,runtime_ms with rows
// sorted by (algo, m, epsilon, seed), LF line endings, '.' decimal separator.
// with_runtime=false zeroes the runtime column so two identical runs produce
// bit-identical bytes.
void write_csv(const std::vector<EstimateReport>& reports, std::ostream& out,
               bool with_runtime = true);
std::string csv_string(const std::vector<EstimateReport>& reports,
                       bool with_runtime = true);

// JSON array mirroring the CSV fields plus the privacy flag and diagnostics.
std::string json_string(const std::vector<EstimateReport>& reports,
                        bool with_runtime = true);

// Flat key = value configuration format. Unknown keys, bad values, and
// malformed lines raise std::invalid_argument with origin:line context.
ExperimentConfig parse_config(std::istream& in, const std::string& origin);
ExperimentConfig load_config_file(const std::string& path);

ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace ulldp

#endif  // ULLDP_EXPERIMENT_HPP_
