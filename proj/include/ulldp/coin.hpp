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

#ifndef ULLDP_COIN_HPP_
#define ULLDP_COIN_HPP_

#include <cstdint>
#include <functional>

#include "ulldp/partition.hpp"
#include "ulldp/rng.hpp"
#include "ulldp/user_source.hpp"

namespace ulldp {

// Interval/window constants. The theory preset is the one the analysis is
// carried out with; the experiment preset is the much smaller pair used for
// the numerical studies and is the library default.
enum class ConstantsPreset { theory, experiment };

struct CoinConstants {
  double c_i;
  double c_r;
};

CoinConstants coin_constants(ConstantsPreset preset);

enum class CoinVariant { interactive, noninteractive };

// How the interactive broadcast threshold is picked from the localization
// messages. cell_midpoint is the bare midpoint of the winning cell;
// weighted_midpoint refines it to the debiased mass-weighted midpoint of the
// cells around the winner (clamped to the confidence interval), which uses
// the same round-one messages and costs no extra budget but keeps the
// threshold near p when the winning cell is off-center.
enum class ThresholdRule { cell_midpoint, weighted_midpoint };

struct CoinConfig {
  std::int64_t m = 0;
  double epsilon = 0.0;
  ConstantsPreset preset = ConstantsPreset::experiment;
  CoinVariant variant = CoinVariant::interactive;
  ThresholdRule threshold = ThresholdRule::weighted_midpoint;
};

// Count accessor: user index -> number of ones Z_u in [0, m].
using CountFn = std::function<std::int64_t(std::size_t)>;

struct LocalizationResult {
  int i_hat = 0;  // 1-based winning cell; 0 when the partition is degenerate
  double lo = 0.0;
  double hi = 1.0;
  bool degenerate = false;
  double threshold = 0.0;  // broadcast threshold t for the refinement round
};

struct CoinDiagnostics {
  LocalizationResult localization;
  bool ran_localization = false;
  int refinement_case = -1;  // RefinementCase::Kind value; -1 for interactive
  bool case_fallback = false;
};

// How the n users of one coin run are split. Interactive uses S1/S2 halves;
// the non-interactive theory protocol uses |S1| = n/2 with three refinement
// groups of n/6, and the experiment protocol uses thirds with no fourth
// group. Remainder users always join S1.
struct CoinGroupSizes {
  std::size_t s1 = 0, s2 = 0, s3 = 0, s4 = 0;
};

CoinGroupSizes coin_group_sizes(std::size_t n, const CoinConfig& cfg);

// Smallest index attaining the maximum.
int argmax_smallest(const std::vector<double>& values);

// Server side of the localization stage: given per-cell privatized column
// sums, pick the winning cell and widen by one cell on each side.
LocalizationResult localize_from_sums(const IntervalPartition& cells,
                                      const std::vector<double>& column_sums);

// Full localization stage over n1 users: each sends its one-hot cell
// indicator through per-coordinate eps/2 flips. User u draws from
// group_rng.derive(u).
LocalizationResult localize(std::size_t n1, const CountFn& z_of, const CoinConfig& cfg,
                            const IntervalPartition& cells, Rng group_rng);

// Interactive refinement: users send the flipped indicator of Z/m > t with
// t the midpoint of the winning cell, and the server inverts the exact
// binomial tail over the confidence interval.
double refine_interactive(const IntervalPartition& cells, const LocalizationResult& loc,
                          std::size_t n2, const CountFn& z_of, const CoinConfig& cfg,
                          Rng group_rng);

// Debiased means of the three non-interactive refinement groups. y4 is NaN
// for the three-group protocol.
struct RefinementMeans {
  double y2 = 0.0;
  double y3 = 0.0;
  double y4 = 0.0;
  bool has_y4 = false;
};

// Server side of the non-interactive refinement: select the case for the
// confidence interval and invert the matching event probability at the
// corresponding group's debiased mean.
double refine_noninteractive(const LocalizationResult& loc, const RefinementMeans& means,
                             const IntervalPartition& refinement,
                             const MidpointPartition& midpoints,
                             const RefinementFunctions& functions, bool allow_small,
                             CoinDiagnostics* diag);

// End-to-end estimate of p from n users' counts Z_u ~ Binomial(m, p) under
// eps-LDP per user. Result is clamped to [0, 1].
double estimate_binomial_p(std::size_t n, const CountFn& z_of, const CoinConfig& cfg,
                           Rng rng, CoinDiagnostics* diag = nullptr);

// k = 2 convenience wrapper: estimates the probability of symbol 0.
double estimate_coin(const UserSource& users, const CoinConfig& cfg, Rng rng,
                     CoinDiagnostics* diag = nullptr);

}  // namespace ulldp

#endif  // ULLDP_COIN_HPP_
