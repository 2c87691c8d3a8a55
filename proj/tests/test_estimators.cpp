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

#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "ulldp/estimators.hpp"
#include "ulldp/hadamard.hpp"
#include "ulldp/rng.hpp"

using namespace ulldp;

namespace {

Distribution random_distribution(int k, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (auto& x : v) {
    x = rng.next_unit() + 0.02;
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return project_to_simplex(v);
}

double l2_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("estimators");

TEST_CASE("hadamard order and sets") {
  CHECK(hadamard_order(2) == 2);
  CHECK(hadamard_order(3) == 4);
  CHECK(hadamard_order(4) == 4);
  CHECK(hadamard_order(5) == 8);
  CHECK(hadamard_order(32) == 32);
  CHECK(hadamard_order(1000) == 1024);

  const auto sets2 = hadamard_sets(2);
  CHECK(sets2[0] == std::vector<int>{0, 1});
  CHECK(sets2[1] == std::vector<int>{0});

  const auto sets4 = hadamard_sets(4);
  CHECK(sets4[0].size() == 4);
  for (int i = 1; i < 4; ++i) CHECK(sets4[static_cast<std::size_t>(i)].size() == 2);
}

TEST_CASE("subset probabilities match direct set sums and invert") {
  Rng rng(4);
  for (int k : {2, 4, 5, 8, 13, 16}) {
    const Distribution p = random_distribution(k, rng);
    const int K = hadamard_order(k);
    const std::vector<double> p_t = subset_probabilities(p.probs(), K);
    // Independent route: per-row mass by direct summation.
    const auto sets = hadamard_sets(k);
    for (int row = 0; row < K; ++row) {
      double mass = 0.0;
      for (int x : sets[static_cast<std::size_t>(row)]) mass += p[x];
      CHECK(std::abs(p_t[static_cast<std::size_t>(row)] - mass) <= 1e-12);
    }
    const std::vector<double> back = invert_subset_probabilities(p_t);
    for (int x = 0; x < k; ++x) CHECK(std::abs(back[static_cast<std::size_t>(x)] - p[x]) <= 1e-12);
    for (int x = k; x < K; ++x) CHECK(std::abs(back[static_cast<std::size_t>(x)]) <= 1e-12);
  }
}

TEST_CASE("subset map scales squared distances by K/4") {
  Rng rng(9);
  for (int k : {2, 4, 8, 16}) {
    const Distribution p = random_distribution(k, rng);
    const Distribution q = random_distribution(k, rng);
    const int K = hadamard_order(k);
    const auto pt = subset_probabilities(p.probs(), K);
    const auto qt = subset_probabilities(q.probs(), K);
    const double ratio = l2_sq(pt, qt) / l2_sq(p.probs(), q.probs());
    CHECK(std::abs(ratio - K / 4.0) <= 1e-10);
  }
}

TEST_CASE("block partition shapes") {
  const BlockPartition b = BlockPartition::build(10, 4);
  CHECK(b.block_size == 3);
  CHECK(b.block_count() == 4);
  CHECK(b.ranges.back() == std::pair<int, int>{9, 10});
  CHECK(b.block_of(0) == 0);
  CHECK(b.block_of(9) == 3);

  // Requesting more blocks than symbols is rejected; empty blocks are
  // dropped when ceil sizing leaves a trailing gap.
  CHECK_THROWS_AS(BlockPartition::build(10, 12), std::invalid_argument);
  const BlockPartition c = BlockPartition::build(10, 6);
  CHECK(c.block_size == 2);
  CHECK(c.block_count() == 5);
}

TEST_CASE("first occurrence law matches exhaustive enumeration") {
  Rng rng(31);
  for (int k : {4, 6}) {
    for (std::int64_t m : {1, 2, 3, 4}) {
      if (m > k) continue;
      const Distribution p = random_distribution(k, rng);
      const BlockPartition blocks = BlockPartition::build(k, m);
      for (int j = 0; j < blocks.block_count(); ++j) {
        const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
        const int s = hi - lo;
        // Law of the first-occurrence reduction over all k^m ordered
        // sequences, weighted by their probability.
        std::vector<double> law(static_cast<std::size_t>(s) + 1, 0.0);
        std::vector<std::uint32_t> seq(static_cast<std::size_t>(m), 0);
        const std::int64_t total = static_cast<std::int64_t>(std::pow(k, m));
        for (std::int64_t code = 0; code < total; ++code) {
          std::int64_t c = code;
          double weight = 1.0;
          for (std::int64_t i = 0; i < m; ++i) {
            seq[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % k);
            weight *= p[static_cast<int>(seq[static_cast<std::size_t>(i)])];
            c /= k;
          }
          UserData user;
          user.sequence = seq;
          user.m = m;
          law[static_cast<std::size_t>(first_occurrence_local(user, lo, hi))] += weight;
        }
        // Null mass (1 - p(B_j))^m, and the conditional identity.
        double block_mass = 0.0;
        for (int x = lo; x < hi; ++x) block_mass += p[x];
        const double null_mass = std::pow(1.0 - block_mass, static_cast<double>(m));
        CHECK(std::abs(law[static_cast<std::size_t>(s)] - null_mass) <= 1e-12);
        for (int x = 0; x < s; ++x) {
          const double conditional = block_mass > 0.0 ? p[lo + x] / block_mass : 0.0;
          CHECK(std::abs(law[static_cast<std::size_t>(x)] -
                         conditional * (1.0 - null_mass)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("first occurrence requires the sample order") {
  UserData user;
  user.m = 3;
  user.counts = {1, 2};
  CHECK_THROWS_AS(first_occurrence_local(user, 0, 1), std::invalid_argument);
  user.sequence = {1, 0, 1};
  CHECK(first_occurrence_local(user, 0, 1) == 0);
  CHECK(first_occurrence_local(user, 1, 2) == 0);
}

TEST_CASE("regime dispatch") {
  CHECK(dispatch_regime(2, 100, 0.9) == Regime::high_privacy);
  CHECK(dispatch_regime(2, 100, 1.0) == Regime::high_privacy);
  CHECK(dispatch_regime(1000, 20, 3.0) == Regime::small_m);   // 20 <= 1000/e^1.5
  CHECK(dispatch_regime(200, 256, 2.0) == Regime::large_m);   // m >= k
  CHECK(dispatch_regime(500, 128, 4.0) == Regime::medium_m);  // between
}

TEST_CASE("medium blocks per user") {
  CHECK(medium_blocks_per_user(500, 128, 4.0) == 1);
  CHECK(medium_blocks_per_user(500, 400, 4.0) == 8);
  CHECK(medium_blocks_per_user(500, 500, 4.0) == 500);  // ln(k/m) degenerates
}

TEST_CASE("high privacy estimator recovers skewed distributions") {
  Rng data_rng(41);
  const Distribution truth({0.55, 0.2, 0.15, 0.1});
  const SimulatedUserSource users(truth, 64, 4096, data_rng);
  EstimatorConfig cfg;
  Diagnostics diag;
  const Distribution est = estimate_high_privacy(users, 0.9, cfg, Rng(7), &diag);
  CHECK(tv_distance(est, truth) < 0.05);
  CHECK(diag.coin_runs == 4);
  CHECK(diag.localizations.size() == 4);
}

TEST_CASE("high privacy delegates to the coin estimator at k = 2") {
  const Distribution truth = Distribution::two_point(0.73);
  const SimulatedUserSource users(truth, 128, 4000, Rng(3));
  EstimatorConfig cfg;
  const Distribution est = estimate_high_privacy(users, 0.9, cfg, Rng(11));
  CHECK(est.size() == 2);
  CHECK(std::abs(est[0] - 0.73) < 0.03);
  CHECK_THROWS_AS(estimate_high_privacy(users, 1.5, cfg, Rng(11)), std::invalid_argument);
}

TEST_CASE("high privacy error shrinks with m") {
  EstimatorConfig cfg;
  const Distribution truth = Distribution::uniform(8);
  std::map<std::int64_t, double> err;
  for (std::int64_t m : {32, 128, 512}) {
    double total = 0.0;
    const int runs = 5;
    for (int seed = 0; seed < runs; ++seed) {
      const SimulatedUserSource users(truth, m, 16000,
                                      Rng(static_cast<std::uint64_t>(seed)));
      total += tv_distance(
          estimate_high_privacy(users, 0.9, cfg,
                                Rng(static_cast<std::uint64_t>(seed)).derive(2)),
          truth);
    }
    err[m] = total / runs;
  }
  CHECK(err[128] < err[32]);
  CHECK(err[512] < err[128]);
}

TEST_CASE("large m with a single part matches the high privacy path bitwise") {
  const Distribution truth({0.4, 0.3, 0.2, 0.1});
  const SimulatedUserSource users(truth, 16, 512, Rng(5));
  EstimatorConfig cfg;
  const Distribution a = estimate_large_m(users, 1.0, cfg, Rng(17));
  const Distribution b = estimate_high_privacy(users, 1.0, cfg, Rng(17));
  for (int x = 0; x < 4; ++x) CHECK(a[x] == b[x]);
}

TEST_CASE("large m needs enough users per row") {
  const Distribution truth = Distribution::uniform(16);
  const SimulatedUserSource users(truth, 16, 4, Rng(5));
  EstimatorConfig cfg;
  CHECK_THROWS_AS(estimate_large_m(users, 2.0, cfg, Rng(1)), std::invalid_argument);
  CHECK_THROWS_AS(estimate_large_m(users, 0.5, cfg, Rng(1)), std::invalid_argument);
}

TEST_CASE("large m improves with the budget") {
  const Distribution truth = Distribution::uniform(16);
  EstimatorConfig cfg;
  double err1 = 0.0, err4 = 0.0;
  const int runs = 5;
  for (int seed = 0; seed < runs; ++seed) {
    const SimulatedUserSource users(truth, 32, 20000,
                                    Rng(static_cast<std::uint64_t>(seed)));
    const Rng rng = Rng(static_cast<std::uint64_t>(seed)).derive(3);
    err1 += tv_distance(estimate_large_m(users, 1.0, cfg, rng), truth);
    err4 += tv_distance(estimate_large_m(users, 4.0, cfg, rng.derive(1)), truth);
  }
  CHECK(err4 < err1);
}

TEST_CASE("small m pipeline sanity in the near-noiseless limit") {
  const Distribution truth({0.3, 0.25, 0.2, 0.1, 0.05, 0.04, 0.03, 0.03});
  const SimulatedUserSource users(truth, 2, 20000, Rng(13));
  EstimatorConfig cfg;
  Diagnostics diag;
  const Distribution est = estimate_small_m(users, 12.0, cfg, Rng(19), &diag);
  CHECK(tv_distance(est, truth) < 0.05);
  CHECK_THROWS_AS(estimate_small_m(users, 0.4, cfg, Rng(19)), std::invalid_argument);

  const SimulatedUserSource too_many(truth, 16, 128, Rng(13));
  CHECK_THROWS_AS(estimate_small_m(too_many, 3.0, cfg, Rng(19)), std::invalid_argument);
}

TEST_CASE("small m recombination is exact on true inputs") {
  // With the true block masses and true first-occurrence laws, the
  // recombination identity returns the true distribution.
  Rng rng(23);
  const int k = 12;
  const std::int64_t m = 4;
  const Distribution p = random_distribution(k, rng);
  const BlockPartition blocks = BlockPartition::build(k, m);
  std::vector<double> rebuilt(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < blocks.block_count(); ++j) {
    const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
    double block_mass = 0.0;
    for (int x = lo; x < hi; ++x) block_mass += p[x];
    const double null_mass = std::pow(1.0 - block_mass, static_cast<double>(m));
    for (int x = lo; x < hi; ++x) {
      const double tp = block_mass > 0.0
                            ? (p[x] / block_mass) * (1.0 - null_mass)
                            : 0.0;
      rebuilt[static_cast<std::size_t>(x)] =
          block_mass * (tp / (1.0 - null_mass));
    }
  }
  for (int x = 0; x < k; ++x) CHECK(std::abs(rebuilt[static_cast<std::size_t>(x)] - p[x]) <= 1e-12);
}

TEST_CASE("error decomposition against ground truth") {
  // Total error vs the block-stage error plus the weighted conditional
  // errors. The per-seed inequality can be broken by signed decode noise, so
  // the averaged form is checked along with a per-seed tally.
  const int k = 60;
  const std::int64_t m = 6;
  const Distribution truth = Distribution::uniform(k);
  EstimatorConfig cfg;
  const BlockPartition blocks = BlockPartition::build(k, m);
  const int runs = 20;
  double lhs_mean = 0.0;
  double rhs_mean = 0.0;
  int per_seed_ok = 0;
  for (int seed = 0; seed < runs; ++seed) {
    const SimulatedUserSource users(truth, m, 12000,
                                    Rng(static_cast<std::uint64_t>(seed)));
    BlockStageInternals internals;
    const Distribution est = estimate_small_m(
        users, 2.5, cfg, Rng(static_cast<std::uint64_t>(seed)).derive(5), nullptr,
        &internals);
    const double lhs = tv_distance(est, truth);
    // Block-stage TV against the true block masses.
    double block_tv = 0.0;
    std::vector<double> true_blocks(static_cast<std::size_t>(blocks.block_count()));
    for (int j = 0; j < blocks.block_count(); ++j) {
      const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
      double mass = 0.0;
      for (int x = lo; x < hi; ++x) mass += truth[x];
      true_blocks[static_cast<std::size_t>(j)] = mass;
      block_tv += std::abs(internals.block_estimate[static_cast<std::size_t>(j)] - mass);
    }
    block_tv *= 0.5;
    double conditional_sum = 0.0;
    for (int j = 0; j < blocks.block_count(); ++j) {
      const auto [lo, hi] = blocks.ranges[static_cast<std::size_t>(j)];
      const double mass = true_blocks[static_cast<std::size_t>(j)];
      const double null_mass = std::pow(1.0 - mass, static_cast<double>(m));
      const auto& tp_hat = internals.conditional_tp[static_cast<std::size_t>(j)];
      double tv = 0.0;
      for (int x = lo; x < hi; ++x) {
        const double tp_true = mass > 0.0 ? truth[x] / mass * (1.0 - null_mass) : 0.0;
        tv += std::abs(tp_hat[static_cast<std::size_t>(x - lo)] - tp_true);
      }
      tv += std::abs(tp_hat.back() - null_mass);
      tv *= 0.5;
      const double weight =
          mass / std::min(static_cast<double>(m) * mass, 1.0);
      conditional_sum += weight * tv;
    }
    const double rhs = block_tv + conditional_sum;
    lhs_mean += lhs;
    rhs_mean += rhs;
    if (lhs <= rhs + 1e-9) ++per_seed_ok;
  }
  CHECK(lhs_mean / runs <= rhs_mean / runs + 1e-9);
  CHECK(per_seed_ok >= runs * 9 / 10);
}

TEST_CASE("medium m runs and respects boundaries") {
  const Distribution truth = Distribution::uniform(64);
  const SimulatedUserSource users(truth, 32, 60000, Rng(29));
  EstimatorConfig cfg;
  Diagnostics diag;
  const Distribution est = estimate_medium_m(users, 3.0, cfg, Rng(31), &diag);
  CHECK(tv_distance(est, truth) < 0.15);

  // At the small/medium boundary both estimators run.
  const double eps = 2.0;
  const auto boundary_m = static_cast<std::int64_t>(
      std::floor(64.0 / std::exp(eps / 2.0)));
  const SimulatedUserSource boundary_users(truth, boundary_m, 20000, Rng(29));
  CHECK_NOTHROW(estimate_small_m(boundary_users, eps, cfg, Rng(1)));
  CHECK_NOTHROW(estimate_medium_m(boundary_users, eps, cfg, Rng(1)));

  // At m = k both medium and large run.
  const SimulatedUserSource square_users(truth, 64, 20000, Rng(29));
  CHECK_NOTHROW(estimate_medium_m(square_users, eps, cfg, Rng(1)));
  CHECK_NOTHROW(estimate_large_m(square_users, eps, cfg, Rng(1)));
}

TEST_CASE("estimate dispatches and reports the regime") {
  EstimatorConfig cfg;
  const Distribution truth = Distribution::uniform(8);
  const SimulatedUserSource users(truth, 16, 2048, Rng(37));
  const EstimateResult high = estimate(users, 0.9, cfg, Rng(1));
  CHECK(high.regime == Regime::high_privacy);
  CHECK(high.estimate.size() == 8);

  const EstimateResult large = estimate(users, 2.5, cfg, Rng(1));
  CHECK(large.regime == Regime::large_m);

  const SimulatedUserSource few(truth, 1, 2048, Rng(37));
  const EstimateResult small = estimate(few, 3.0, cfg, Rng(1));
  CHECK(small.regime == Regime::small_m);
}

TEST_CASE("every estimator outputs a valid distribution") {
  Rng rng(43);
  EstimatorConfig cfg;
  for (int trial = 0; trial < 6; ++trial) {
    const int k = 3 + static_cast<int>(rng.below(10));
    const Distribution truth = random_distribution(k, rng);
    const std::int64_t m = 1 + static_cast<std::int64_t>(rng.below(8));
    const double eps = 0.5 + 3.0 * rng.next_unit();
    const SimulatedUserSource users(truth, m, 1024, rng.derive(trial));
    const EstimateResult res = estimate(users, eps, cfg, rng.derive(100 + trial));
    double sum = 0.0;
    for (int x = 0; x < k; ++x) {
      CHECK(res.estimate[x] >= 0.0);
      sum += res.estimate[x];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_SUITE_END();
