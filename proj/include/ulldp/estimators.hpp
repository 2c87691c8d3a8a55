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

#ifndef ULLDP_ESTIMATORS_HPP_
#define ULLDP_ESTIMATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ulldp/coin.hpp"
#include "ulldp/distribution.hpp"
#include "ulldp/rng.hpp"
#include "ulldp/user_source.hpp"

namespace ulldp {

// Contiguous equal-size blocks of the alphabet, size ceil(k / blocks) with a
// possibly short last block. Blocks that would be empty are dropped.
struct BlockPartition {
  int k = 0;
  int block_size = 0;
  std::vector<std::pair<int, int>> ranges;  // [lo, hi) per block

  static BlockPartition build(int k, std::int64_t blocks);

  int block_count() const { return static_cast<int>(ranges.size()); }
  int block_of(int symbol) const { return symbol / block_size; }
  int size_of(int block) const {
    return ranges[static_cast<std::size_t>(block)].second -
           ranges[static_cast<std::size_t>(block)].first;
  }
};

// Index (within the block) of the first sample landing in [lo, hi); the
// block size is returned when no sample lands there, playing the role of the
// null symbol. Requires the sample order, i.e. a nonempty sequence.
int first_occurrence_local(const UserData& user, int lo, int hi);

struct EstimatorConfig {
  ConstantsPreset constants = ConstantsPreset::experiment;
  CoinVariant variant = CoinVariant::interactive;
};

// Aggregated run diagnostics. Localization intervals are recorded only for
// the top-level subset-reduction rows (where the caller can check them
// against the true subset masses); nested block-stage runs only bump the
// counters.
struct Diagnostics {
  std::int64_t coin_runs = 0;
  std::int64_t degenerate_localizations = 0;
  std::int64_t case_small = 0;
  std::int64_t case_boundary = 0;
  std::int64_t case_midpoint = 0;
  std::int64_t case_fallbacks = 0;
  std::int64_t conditional_fallbacks = 0;

  struct LocalizationRecord {
    int row = -1;  // Hadamard row (0-based)
    double lo = 0.0;
    double hi = 1.0;
  };
  std::vector<LocalizationRecord> localizations;

  void absorb(const CoinDiagnostics& cd, int row, bool record);

  // Folds a nested stage's counters in, dropping its localization records
  // (their rows refer to a different alphabet).
  void merge_counters(const Diagnostics& nested);
};

enum class Regime { high_privacy, small_m, medium_m, large_m };

std::string regime_name(Regime regime);

// Regime selection as a total function of (k, m, eps). The small/medium
// boundary is m <= k / e^{eps/2}, the boundary the block algorithm's
// analysis actually uses.
Regime dispatch_regime(int k, std::int64_t m, double eps);

// eps <= 1. Subset reduction: users are split across the K Hadamard rows,
// each group runs the coin estimator on its subset count, and the inverse
// transform of the estimated subset masses is projected onto the simplex.
// k = 2 delegates to the coin estimator directly.
Distribution estimate_high_privacy(const UserSource& users, double eps,
                                   const EstimatorConfig& cfg, Rng rng,
                                   Diagnostics* diag = nullptr);

// eps > 1, m >= k. Budget is split into floor(eps) unit parts; each user
// sends one unit-budget coin message for each of floor(eps) distinct rows.
// Excess budget above floor(eps) is left unused.
Distribution estimate_large_m(const UserSource& users, double eps,
                              const EstimatorConfig& cfg, Rng rng,
                              Diagnostics* diag = nullptr);

// Per-stage intermediates of the block pipelines, for diagnostics and for
// checking the error decomposition against ground truth.
struct BlockStageInternals {
  std::vector<double> block_estimate;              // p_B estimate (1.0 for one block)
  std::vector<std::vector<double>> conditional_tp;  // decoded per-block laws, null last
};

// eps > 1, m <= k. Every user spends eps0 = 0.5 on a block-distribution
// stage and eps - eps0 on a Hadamard-response message about the first sample
// it saw in its assigned block (or the null symbol).
Distribution estimate_small_m(const UserSource& users, double eps,
                              const EstimatorConfig& cfg, Rng rng,
                              Diagnostics* diag = nullptr,
                              BlockStageInternals* internals = nullptr);

// t' = floor(eps / (2 ln(k/m))): how many blocks each user covers in the
// medium-m conditional stage (capped at m; m when the ratio degenerates).
std::int64_t medium_blocks_per_user(int k, std::int64_t m, double eps);

// eps > 1, k/e^{eps/2} < m <= k. The block stage runs at eps/2 through the
// m >= k pipeline; the conditional stage splits the remaining eps/2 over
// min(m, t') blocks per user.
Distribution estimate_medium_m(const UserSource& users, double eps,
                               const EstimatorConfig& cfg, Rng rng,
                               Diagnostics* diag = nullptr);

struct EstimateResult {
  Distribution estimate;
  Regime regime;
  Diagnostics diag;
};

EstimateResult estimate(const UserSource& users, double eps, const EstimatorConfig& cfg,
                        Rng rng);

}  // namespace ulldp

#endif  // ULLDP_ESTIMATORS_HPP_
