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

#include "ulldp/estimators.hpp"

#include <cmath>
#include <memory>

#include "ulldp/channels.hpp"
#include "ulldp/errors.hpp"
#include "ulldp/hadamard.hpp"

namespace ulldp {

namespace {
constexpr double kBlockStageBudget = 0.5;  // eps_0 of the block algorithm
}

BlockPartition BlockPartition::build(int k, std::int64_t blocks) {
  if (k < 1) throw std::invalid_argument("BlockPartition: k must be positive");
  if (blocks < 1) throw std::invalid_argument("BlockPartition: need at least one block");
  if (blocks > k) {
    throw std::invalid_argument("BlockPartition: more blocks than symbols");
  }
  BlockPartition part;
  part.k = k;
  part.block_size = static_cast<int>((k + blocks - 1) / blocks);
  for (int lo = 0; lo < k; lo += part.block_size) {
    part.ranges.emplace_back(lo, std::min(lo + part.block_size, k));
  }
  return part;
}

int first_occurrence_local(const UserData& user, int lo, int hi) {
  if (user.sequence.empty()) {
    throw std::invalid_argument("first_occurrence_local: sample order unavailable");
  }
  for (auto s : user.sequence) {
    const int x = static_cast<int>(s);
    if (x >= lo && x < hi) return x - lo;
  }
  return hi - lo;
}

void Diagnostics::absorb(const CoinDiagnostics& cd, int row, bool record) {
  ++coin_runs;
  if (cd.localization.degenerate) ++degenerate_localizations;
  switch (cd.refinement_case) {
    case static_cast<int>(RefinementCase::Kind::small_p):
      ++case_small;
      break;
    case static_cast<int>(RefinementCase::Kind::on_boundary):
      ++case_boundary;
      break;
    case static_cast<int>(RefinementCase::Kind::on_midpoint):
      ++case_midpoint;
      break;
    default:
      break;
  }
  if (cd.case_fallback) ++case_fallbacks;
  if (record && !cd.localization.degenerate) {
    localizations.push_back({row, cd.localization.lo, cd.localization.hi});
  }
}

void Diagnostics::merge_counters(const Diagnostics& nested) {
  coin_runs += nested.coin_runs;
  degenerate_localizations += nested.degenerate_localizations;
  case_small += nested.case_small;
  case_boundary += nested.case_boundary;
  case_midpoint += nested.case_midpoint;
  case_fallbacks += nested.case_fallbacks;
  conditional_fallbacks += nested.conditional_fallbacks;
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::high_privacy:
      return "high_privacy";
    case Regime::small_m:
      return "small_m";
    case Regime::medium_m:
      return "medium_m";
    case Regime::large_m:
      return "large_m";
  }
  return "unknown";
}

Regime dispatch_regime(int k, std::int64_t m, double eps) {
  if (eps <= 1.0) return Regime::high_privacy;
  if (m >= k) return Regime::large_m;
  if (static_cast<double>(m) <= static_cast<double>(k) / std::exp(eps / 2.0)) {
    return Regime::small_m;
  }
  return Regime::medium_m;
}

namespace {

// Streams one coin run for a derived count sequence.
double run_coin(std::size_t n, const CountFn& z_of, const CoinConfig& cfg, Rng rng,
                Diagnostics* diag, int row, bool record) {
  CoinDiagnostics cd;
  const double p = estimate_binomial_p(n, z_of, cfg, rng, diag != nullptr ? &cd : nullptr);
  if (diag != nullptr) diag->absorb(cd, row, record);
  return p;
}

std::int64_t row_count(const UserData& user, int row) {
  return user.count_in([row](int x) { return hadamard_plus(row, x); });
}

// Estimates the subset masses p(T_row) for all K rows, one user group per
// row in round-robin order, and returns the inverse-transformed vector
// truncated to k entries (not yet projected).
std::vector<double> subset_reduction(const UserSource& users, double eps,
                                     const EstimatorConfig& cfg, Rng rng,
                                     Diagnostics* diag, bool record) {
  const int k = users.alphabet_size();
  const int K = hadamard_order(k);
  const std::size_t n = users.size();
  if (n < static_cast<std::size_t>(K)) {
    throw std::invalid_argument("subset reduction: need at least one user per row");
  }
  CoinConfig coin_cfg;
  coin_cfg.m = users.samples_per_user();
  coin_cfg.epsilon = eps;
  coin_cfg.preset = cfg.constants;
  coin_cfg.variant = cfg.variant;

  std::vector<double> p_t(static_cast<std::size_t>(K), 0.0);
  UserData scratch;
  for (int row = 0; row < K; ++row) {
    const std::size_t group_n = n / static_cast<std::size_t>(K) +
                                (static_cast<std::size_t>(row) < n % static_cast<std::size_t>(K) ? 1 : 0);
    const auto z_of = [&, row](std::size_t v) -> std::int64_t {
      const std::size_t u = static_cast<std::size_t>(row) + v * static_cast<std::size_t>(K);
      users.fetch(u, scratch);
      return row_count(scratch, row);
    };
    p_t[static_cast<std::size_t>(row)] =
        run_coin(group_n, z_of, coin_cfg, rng.derive(static_cast<std::uint64_t>(row)),
                 diag, row, record);
  }
  std::vector<double> raw = invert_subset_probabilities(p_t);
  raw.resize(static_cast<std::size_t>(k));
  return raw;
}

}  // namespace

Distribution estimate_high_privacy(const UserSource& users, double eps,
                                   const EstimatorConfig& cfg, Rng rng,
                                   Diagnostics* diag) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("estimate_high_privacy: requires 0 < eps <= 1");
  }
  const int k = users.alphabet_size();
  if (k == 2) {
    CoinConfig coin_cfg;
    coin_cfg.m = users.samples_per_user();
    coin_cfg.epsilon = eps;
    coin_cfg.preset = cfg.constants;
    coin_cfg.variant = cfg.variant;
    CoinDiagnostics cd;
    const double p =
        estimate_coin(users, coin_cfg, rng.derive(0), diag != nullptr ? &cd : nullptr);
    if (diag != nullptr) diag->absorb(cd, -1, true);
    return Distribution::two_point(p);
  }
  const std::vector<double> raw = subset_reduction(users, eps, cfg, rng, diag, true);
  return project_to_simplex(raw);
}

Distribution estimate_large_m(const UserSource& users, double eps,
                              const EstimatorConfig& cfg, Rng rng, Diagnostics* diag) {
  if (!(eps >= 1.0)) {
    throw std::invalid_argument("estimate_large_m: requires eps >= 1");
  }
  const int k = users.alphabet_size();
  const int K = hadamard_order(k);
  const std::size_t n = users.size();
  const int parts = std::min<int>(static_cast<int>(std::floor(eps)), K);
  // Virtual slot t covers (user t / parts, row t mod K); each user owns the
  // `parts` consecutive slots starting at u * parts, hence `parts` distinct
  // rows, each message carrying a unit budget.
  if (n * static_cast<std::size_t>(parts) < static_cast<std::size_t>(K)) {
    throw std::invalid_argument("estimate_large_m: need n * floor(eps) >= K");
  }
  CoinConfig coin_cfg;
  coin_cfg.m = users.samples_per_user();
  coin_cfg.epsilon = 1.0;
  coin_cfg.preset = cfg.constants;
  coin_cfg.variant = cfg.variant;

  const std::size_t total_slots = n * static_cast<std::size_t>(parts);
  std::vector<double> p_t(static_cast<std::size_t>(K), 0.0);
  UserData scratch;
  for (int row = 0; row < K; ++row) {
    const std::size_t group_n =
        (total_slots - static_cast<std::size_t>(row) + static_cast<std::size_t>(K) - 1) /
        static_cast<std::size_t>(K);
    const auto z_of = [&, row](std::size_t v) -> std::int64_t {
      const std::size_t slot =
          static_cast<std::size_t>(row) + v * static_cast<std::size_t>(K);
      const std::size_t u = slot / static_cast<std::size_t>(parts);
      users.fetch(u, scratch);
      return row_count(scratch, row);
    };
    p_t[static_cast<std::size_t>(row)] =
        run_coin(group_n, z_of, coin_cfg, rng.derive(static_cast<std::uint64_t>(row)),
                 diag, row, true);
  }
  std::vector<double> raw = invert_subset_probabilities(p_t);
  raw.resize(static_cast<std::size_t>(k));
  return project_to_simplex(raw);
}

namespace {

// Alphabet reduction of a user stream to per-block counts.
class BlockCountSource final : public UserSource {
 public:
  BlockCountSource(const UserSource& inner, const BlockPartition& blocks)
      : inner_(inner), blocks_(blocks) {}

  std::size_t size() const override { return inner_.size(); }
  std::int64_t samples_per_user() const override { return inner_.samples_per_user(); }
  int alphabet_size() const override { return blocks_.block_count(); }

  void fetch(std::size_t u, UserData& out) const override {
    inner_.fetch(u, scratch_);
    out.m = scratch_.m;
    out.sequence.clear();
    out.counts.assign(static_cast<std::size_t>(blocks_.block_count()), 0);
    if (!scratch_.sequence.empty()) {
      for (auto s : scratch_.sequence) {
        ++out.counts[static_cast<std::size_t>(blocks_.block_of(static_cast<int>(s)))];
      }
    } else {
      for (std::size_t x = 0; x < scratch_.counts.size(); ++x) {
        out.counts[static_cast<std::size_t>(blocks_.block_of(static_cast<int>(x)))] +=
            scratch_.counts[x];
      }
    }
  }

 private:
  const UserSource& inner_;
  const BlockPartition& blocks_;
  mutable UserData scratch_;  // estimators stream users from one thread
};

Distribution estimate_block_distribution(const UserSource& block_users, double budget,
                                         const EstimatorConfig& cfg, Rng rng,
                                         Diagnostics* diag) {
  if (budget <= 1.0) {
    return estimate_high_privacy(block_users, budget, cfg, rng, diag);
  }
  return estimate_large_m(block_users, budget, cfg, rng, diag);
}

// Shared tail of the small-m / medium-m pipelines: per-block conditional
// estimates from null-augmented Hadamard-response tallies, recombined with
// the block-stage estimate.
Distribution recombine_conditionals(const BlockPartition& blocks,
                                    const Distribution& block_dist,
                                    const std::vector<std::vector<std::int64_t>>& tallies,
                                    const std::vector<std::int64_t>& message_counts,
                                    double conditional_eps, Diagnostics* diag,
                                    BlockStageInternals* internals) {
  const int nb = blocks.block_count();
  std::vector<double> raw(static_cast<std::size_t>(blocks.k), 0.0);
  if (internals != nullptr) {
    internals->block_estimate.assign(static_cast<std::size_t>(nb), 1.0);
    internals->conditional_tp.assign(static_cast<std::size_t>(nb), {});
  }
  for (int j = 0; j < nb; ++j) {
    const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
    const int s = hi - lo;
    const double block_mass = nb == 1 ? 1.0 : block_dist[j];
    if (internals != nullptr && nb > 1) {
      internals->block_estimate[static_cast<std::size_t>(j)] = block_mass;
    }
    if (message_counts[static_cast<std::size_t>(j)] == 0) {
      for (int x = 0; x < s; ++x) {
        raw[static_cast<std::size_t>(lo + x)] = block_mass / static_cast<double>(s);
      }
      continue;
    }
    const HadamardResponseChannel channel(s, /*with_null=*/true, conditional_eps);
    const std::vector<double> tp = channel.decode(
        tallies[static_cast<std::size_t>(j)], message_counts[static_cast<std::size_t>(j)]);
    if (internals != nullptr) internals->conditional_tp[static_cast<std::size_t>(j)] = tp;
    const double denom = 1.0 - tp[static_cast<std::size_t>(s)];
    if (denom > 0.0) {
      for (int x = 0; x < s; ++x) {
        raw[static_cast<std::size_t>(lo + x)] =
            block_mass * tp[static_cast<std::size_t>(x)] / denom;
      }
    } else {
      if (diag != nullptr) ++diag->conditional_fallbacks;
      for (int x = 0; x < s; ++x) {
        raw[static_cast<std::size_t>(lo + x)] = block_mass / static_cast<double>(s);
      }
    }
  }
  return project_to_simplex(raw);
}

}  // namespace

Distribution estimate_small_m(const UserSource& users, double eps,
                              const EstimatorConfig& cfg, Rng rng, Diagnostics* diag,
                              BlockStageInternals* internals) {
  const int k = users.alphabet_size();
  const std::int64_t m = users.samples_per_user();
  if (m > k) {
    throw std::invalid_argument("estimate_small_m: requires m <= k");
  }
  if (!(eps > kBlockStageBudget)) {
    throw std::invalid_argument("estimate_small_m: requires eps > 0.5");
  }
  const BlockPartition blocks = BlockPartition::build(k, m);
  const int nb = blocks.block_count();
  const std::size_t n = users.size();

  // Stage 1: block distribution at eps0. A single block needs no estimate.
  Distribution block_dist = Distribution::uniform(2);
  if (nb > 1) {
    const BlockCountSource block_users(users, blocks);
    Diagnostics nested;
    block_dist = estimate_high_privacy(block_users, kBlockStageBudget, cfg, rng.derive(0),
                                       diag != nullptr ? &nested : nullptr);
    if (diag != nullptr) diag->merge_counters(nested);
  }

  // Stage 2: group j sends the first symbol observed in B_j (or null) through
  // Hadamard response at the remaining budget.
  const double conditional_eps = eps - kBlockStageBudget;
  std::vector<HadamardResponseChannel> channels;
  channels.reserve(static_cast<std::size_t>(nb));
  for (int j = 0; j < nb; ++j) {
    channels.emplace_back(blocks.size_of(j), /*with_null=*/true, conditional_eps);
  }
  std::vector<std::vector<std::int64_t>> tallies(static_cast<std::size_t>(nb));
  for (int j = 0; j < nb; ++j) {
    tallies[static_cast<std::size_t>(j)].assign(
        static_cast<std::size_t>(channels[static_cast<std::size_t>(j)].K()), 0);
  }
  std::vector<std::int64_t> message_counts(static_cast<std::size_t>(nb), 0);
  Rng stage2 = rng.derive(1);
  UserData scratch;
  for (std::size_t u = 0; u < n; ++u) {
    const int j = static_cast<int>(u % static_cast<std::size_t>(nb));
    users.fetch(u, scratch);
    const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
    const int local = first_occurrence_local(scratch, lo, hi);
    Rng stream = stage2.derive(u);
    const int y = channels[static_cast<std::size_t>(j)].encode(local, stream);
    ++tallies[static_cast<std::size_t>(j)][static_cast<std::size_t>(y)];
    ++message_counts[static_cast<std::size_t>(j)];
  }
  return recombine_conditionals(blocks, block_dist, tallies, message_counts,
                                conditional_eps, diag, internals);
}

std::int64_t medium_blocks_per_user(int k, std::int64_t m, double eps) {
  const double log_ratio = std::log(static_cast<double>(k) / static_cast<double>(m));
  if (!(log_ratio > 0.0)) return m;
  return static_cast<std::int64_t>(std::floor(eps / (2.0 * log_ratio)));
}

Distribution estimate_medium_m(const UserSource& users, double eps,
                               const EstimatorConfig& cfg, Rng rng, Diagnostics* diag) {
  const int k = users.alphabet_size();
  const std::int64_t m = users.samples_per_user();
  if (m > k) {
    throw std::invalid_argument("estimate_medium_m: requires m <= k");
  }
  if (!(eps > 1.0)) {
    throw std::invalid_argument("estimate_medium_m: requires eps > 1");
  }
  const std::int64_t t_prime = medium_blocks_per_user(k, m, eps);
  if (t_prime < 1) {
    return estimate_small_m(users, eps, cfg, rng, diag);
  }
  const BlockPartition blocks = BlockPartition::build(k, m);
  const int nb = blocks.block_count();
  const std::size_t n = users.size();

  // Stage 1: block distribution at eps/2 through the m >= k pipeline.
  Distribution block_dist = Distribution::uniform(2);
  if (nb > 1) {
    const BlockCountSource block_users(users, blocks);
    Diagnostics nested;
    block_dist = estimate_block_distribution(block_users, eps / 2.0, cfg, rng.derive(0),
                                             diag != nullptr ? &nested : nullptr);
    if (diag != nullptr) diag->merge_counters(nested);
  }

  // Stage 2: each user covers b distinct blocks round-robin, one message per
  // block at budget (eps/2) / b.
  const std::int64_t b = std::min<std::int64_t>(nb, t_prime);
  const double conditional_eps = (eps / 2.0) / static_cast<double>(b);
  std::vector<HadamardResponseChannel> channels;
  channels.reserve(static_cast<std::size_t>(nb));
  for (int j = 0; j < nb; ++j) {
    channels.emplace_back(blocks.size_of(j), /*with_null=*/true, conditional_eps);
  }
  std::vector<std::vector<std::int64_t>> tallies(static_cast<std::size_t>(nb));
  for (int j = 0; j < nb; ++j) {
    tallies[static_cast<std::size_t>(j)].assign(
        static_cast<std::size_t>(channels[static_cast<std::size_t>(j)].K()), 0);
  }
  std::vector<std::int64_t> message_counts(static_cast<std::size_t>(nb), 0);
  Rng stage2 = rng.derive(1);
  UserData scratch;
  for (std::size_t u = 0; u < n; ++u) {
    users.fetch(u, scratch);
    Rng user_stream = stage2.derive(u);
    for (std::int64_t slot = 0; slot < b; ++slot) {
      const int j = static_cast<int>((u + static_cast<std::size_t>(slot)) %
                                     static_cast<std::size_t>(nb));
      const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
      const int local = first_occurrence_local(scratch, lo, hi);
      Rng stream = user_stream.derive(static_cast<std::uint64_t>(slot));
      const int y = channels[static_cast<std::size_t>(j)].encode(local, stream);
      ++tallies[static_cast<std::size_t>(j)][static_cast<std::size_t>(y)];
      ++message_counts[static_cast<std::size_t>(j)];
    }
  }
  return recombine_conditionals(blocks, block_dist, tallies, message_counts,
                                conditional_eps, diag, nullptr);
}

EstimateResult estimate(const UserSource& users, double eps, const EstimatorConfig& cfg,
                        Rng rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("estimate: epsilon must be positive");
  const Regime regime =
      dispatch_regime(users.alphabet_size(), users.samples_per_user(), eps);
  EstimateResult result{Distribution::uniform(2), regime, {}};
  switch (regime) {
    case Regime::high_privacy:
      result.estimate = estimate_high_privacy(users, eps, cfg, rng, &result.diag);
      break;
    case Regime::small_m:
      result.estimate = estimate_small_m(users, eps, cfg, rng, &result.diag);
      break;
    case Regime::medium_m:
      result.estimate = estimate_medium_m(users, eps, cfg, rng, &result.diag);
      break;
    case Regime::large_m:
      result.estimate = estimate_large_m(users, eps, cfg, rng, &result.diag);
      break;
  }
  return result;
}

}  // namespace ulldp
