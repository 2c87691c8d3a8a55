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

#include "ulldp/coin.hpp"

#include <algorithm>
#include <cmath>

#include "ulldp/binomial.hpp"
#include "ulldp/channels.hpp"

namespace ulldp {

CoinConstants coin_constants(ConstantsPreset preset) {
  switch (preset) {
    case ConstantsPreset::theory:
      return {10.0, 100.0 * 10.0 * 10.0};
    case ConstantsPreset::experiment:
      return {0.6, 2.1};
  }
  throw std::invalid_argument("coin_constants: unknown preset");
}

CoinGroupSizes coin_group_sizes(std::size_t n, const CoinConfig& cfg) {
  CoinGroupSizes g;
  if (cfg.variant == CoinVariant::interactive) {
    if (n < 2) throw std::invalid_argument("coin: interactive variant needs n >= 2");
    g.s2 = n / 2;
    g.s1 = n - g.s2;
    return g;
  }
  if (n < 4) throw std::invalid_argument("coin: non-interactive variant needs n >= 4");
  if (cfg.preset == ConstantsPreset::theory) {
    g.s2 = g.s3 = g.s4 = std::max<std::size_t>(1, n / 6);
    g.s1 = n - g.s2 - g.s3 - g.s4;
  } else {
    g.s2 = g.s3 = std::max<std::size_t>(1, n / 3);
    g.s1 = n - g.s2 - g.s3;
  }
  return g;
}

int argmax_smallest(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

LocalizationResult localize_from_sums(const IntervalPartition& cells,
                                      const std::vector<double>& column_sums) {
  LocalizationResult loc;
  const int i_hat = argmax_smallest(column_sums) + 1;
  loc.i_hat = i_hat;
  const int lo_cell = std::max(1, i_hat - 1);
  const int hi_cell = std::min(cells.cell_count(), i_hat + 1);
  loc.lo = cells.cell_lo(lo_cell);
  loc.hi = cells.cell_hi(hi_cell);
  loc.threshold = cells.cell_mid(i_hat);
  return loc;
}

namespace {

// Debiased mass-weighted midpoint of the cells within two of the winner,
// clamped to the confidence interval. Negative debiased weights are clipped;
// a fully clipped window falls back to the winning cell's midpoint.
double weighted_threshold(const IntervalPartition& cells,
                          const std::vector<double>& column_sums, std::size_t n1,
                          int i_hat, double lo, double hi, const FlipChannel& channel) {
  const int first = std::max(1, i_hat - 2);
  const int last = std::min(cells.cell_count(), i_hat + 2);
  double mass = 0.0;
  double moment = 0.0;
  for (int i = first; i <= last; ++i) {
    const double mean = column_sums[static_cast<std::size_t>(i - 1)] /
                        static_cast<double>(n1);
    const double weight = std::max(0.0, channel.debias(mean));
    mass += weight;
    moment += weight * cells.cell_mid(i);
  }
  if (mass <= 0.0) return cells.cell_mid(i_hat);
  return std::clamp(moment / mass, lo, hi);
}

}  // namespace

LocalizationResult localize(std::size_t n1, const CountFn& z_of, const CoinConfig& cfg,
                            const IntervalPartition& cells, Rng group_rng) {
  if (n1 == 0) throw std::invalid_argument("localize: empty user group");
  if (cells.degenerate) {
    LocalizationResult loc;
    loc.degenerate = true;
    loc.threshold = 0.5 / static_cast<double>(cfg.m);
    return loc;
  }
  const int d = cells.cell_count();
  const FlipChannel channel = FlipChannel::for_budget(cfg.epsilon / 2.0);
  std::vector<double> sums(static_cast<std::size_t>(d), 0.0);
  std::vector<std::uint8_t> message(static_cast<std::size_t>(d));
  const double md = static_cast<double>(cfg.m);
  for (std::size_t u = 0; u < n1; ++u) {
    Rng stream = group_rng.derive(u);
    const double x = static_cast<double>(z_of(u)) / md;
    const int hot = cells.locate(x) - 1;
    flip_onehot_into(hot, d, channel, stream, message.data());
    for (int i = 0; i < d; ++i) sums[static_cast<std::size_t>(i)] += message[static_cast<std::size_t>(i)];
  }
  LocalizationResult loc = localize_from_sums(cells, sums);
  if (cfg.threshold == ThresholdRule::weighted_midpoint) {
    loc.threshold =
        weighted_threshold(cells, sums, n1, loc.i_hat, loc.lo, loc.hi, channel);
  }
  return loc;
}

namespace {

// Mean of privatized indicator bits over one refinement group.
double flipped_bit_mean(std::size_t n, const std::function<int(std::size_t)>& bit_of,
                        const FlipChannel& channel, Rng group_rng) {
  double sum = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    Rng stream = group_rng.derive(u);
    sum += channel.flip(bit_of(u), stream);
  }
  return sum / static_cast<double>(n);
}

}  // namespace

double refine_interactive(const IntervalPartition& cells, const LocalizationResult& loc,
                          std::size_t n2, const CountFn& z_of, const CoinConfig& cfg,
                          Rng group_rng) {
  if (n2 == 0) throw std::invalid_argument("refine_interactive: empty user group");
  const double t = loc.degenerate  ? 0.5 / static_cast<double>(cfg.m)
                   : loc.threshold > 0.0 ? loc.threshold
                                         : cells.cell_mid(loc.i_hat);
  const FlipChannel channel = FlipChannel::for_budget(cfg.epsilon);
  const double md = static_cast<double>(cfg.m);
  const double mean = flipped_bit_mean(
      n2,
      [&](std::size_t u) { return static_cast<double>(z_of(u)) / md > t ? 1 : 0; },
      channel, group_rng);
  const double target = channel.debias(mean);
  const std::int64_t m = cfg.m;
  const auto tail = [m, t](double p) { return binomial_tail(m, p, t); };
  const double p_hat = invert_monotone(tail, loc.lo, loc.hi, target);
  return std::clamp(p_hat, 0.0, 1.0);
}

double refine_noninteractive(const LocalizationResult& loc, const RefinementMeans& means,
                             const IntervalPartition& refinement,
                             const MidpointPartition& midpoints,
                             const RefinementFunctions& functions, bool allow_small,
                             CoinDiagnostics* diag) {
  const RefinementCase sel =
      select_case(loc.lo, loc.hi, refinement, midpoints, allow_small);
  if (diag != nullptr) {
    diag->refinement_case = static_cast<int>(sel.kind);
    diag->case_fallback = !sel.by_containment;
  }
  double target = 0.0;
  std::function<double(double)> f;
  switch (sel.kind) {
    case RefinementCase::Kind::small_p:
      target = means.y4;
      f = [&functions](double p) { return functions.r4(p); };
      break;
    case RefinementCase::Kind::on_boundary:
      target = means.y2;
      f = [&functions](double p) { return functions.r2(p); };
      break;
    case RefinementCase::Kind::on_midpoint:
      target = means.y3;
      f = [&functions](double p) { return functions.r3(p); };
      break;
  }
  double lo = sel.lo;
  double hi = sel.hi;
  if (!sel.by_containment) {
    // Fallback windows carry no monotonicity guarantee; invert on the
    // monotone run around the anchor.
    std::tie(lo, hi) = monotone_span(f, lo, hi, sel.anchor);
  }
  const double p_hat = invert_monotone(f, lo, hi, target);
  return std::clamp(p_hat, 0.0, 1.0);
}

double estimate_binomial_p(std::size_t n, const CountFn& z_of, const CoinConfig& cfg,
                           Rng rng, CoinDiagnostics* diag) {
  if (cfg.m <= 0) throw std::invalid_argument("estimate_binomial_p: m must be positive");
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("estimate_binomial_p: epsilon must be positive");
  }
  const CoinGroupSizes g = coin_group_sizes(n, cfg);
  const CoinConstants constants = coin_constants(cfg.preset);
  const IntervalPartition cells =
      build_partition(cfg.m, constants.c_i, PartitionKind::localization);

  LocalizationResult loc;
  if (cells.degenerate) {
    loc.degenerate = true;
  } else {
    loc = localize(g.s1, z_of, cfg, cells, rng.derive(0));
  }
  if (diag != nullptr) {
    diag->localization = loc;
    diag->ran_localization = !cells.degenerate;
  }

  if (cfg.variant == CoinVariant::interactive) {
    const auto z2 = [&](std::size_t u) { return z_of(g.s1 + u); };
    return refine_interactive(cells, loc, g.s2, z2, cfg, rng.derive(1));
  }

  const IntervalPartition refinement =
      build_partition(cfg.m, constants.c_r, PartitionKind::refinement);
  const MidpointPartition midpoints = build_midpoints(refinement);
  const RefinementFunctions functions(cfg.m, refinement, midpoints);
  const FlipChannel channel = FlipChannel::for_budget(cfg.epsilon);
  const double md = static_cast<double>(cfg.m);

  RefinementMeans means;
  {
    const std::size_t base = g.s1;
    means.y2 = channel.debias(flipped_bit_mean(
        g.s2,
        [&](std::size_t u) {
          const double x = static_cast<double>(z_of(base + u)) / md;
          return refinement.locate(x) % 2 == 0 ? 1 : 0;
        },
        channel, rng.derive(1)));
  }
  {
    const std::size_t base = g.s1 + g.s2;
    means.y3 = channel.debias(flipped_bit_mean(
        g.s3,
        [&](std::size_t u) {
          const double x = static_cast<double>(z_of(base + u)) / md;
          return midpoints.locate(x) % 2 == 0 ? 1 : 0;
        },
        channel, rng.derive(2)));
  }
  if (g.s4 > 0) {
    const std::size_t base = g.s1 + g.s2 + g.s3;
    means.has_y4 = true;
    means.y4 = channel.debias(flipped_bit_mean(
        g.s4, [&](std::size_t u) { return z_of(base + u) >= 1 ? 1 : 0; }, channel,
        rng.derive(3)));
  }

  return refine_noninteractive(loc, means, refinement, midpoints, functions,
                               /*allow_small=*/means.has_y4, diag);
}

double estimate_coin(const UserSource& users, const CoinConfig& cfg, Rng rng,
                     CoinDiagnostics* diag) {
  if (users.alphabet_size() != 2) {
    throw std::invalid_argument("estimate_coin: alphabet size must be 2");
  }
  UserData scratch;
  const auto z_of = [&users, &scratch](std::size_t u) -> std::int64_t {
    users.fetch(u, scratch);
    return scratch.counts.empty() ? scratch.count_in([](int x) { return x == 0; })
                                  : static_cast<std::int64_t>(scratch.counts[0]);
  };
  return estimate_binomial_p(users.size(), z_of, cfg, rng, diag);
}

}  // namespace ulldp
