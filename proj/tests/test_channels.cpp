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
#include <vector>

#include "doctest.h"
#include "ulldp/channels.hpp"
#include "ulldp/rng.hpp"
#include "ulldp/verify.hpp"

using namespace ulldp;

TEST_SUITE_BEGIN("channels");

TEST_CASE("flip channel parameters") {
  const FlipChannel ch = FlipChannel::for_budget(std::log(3.0));
  CHECK(ch.beta() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ch.gamma() == doctest::Approx(0.5).epsilon(1e-15));

  const FlipChannel noiseless = FlipChannel::for_budget(1e9);
  Rng rng(1);
  for (int b : {0, 1}) CHECK(noiseless.flip(b, rng) == b);
  CHECK_THROWS_AS(FlipChannel::for_budget(0.0), std::invalid_argument);
}

TEST_CASE("flip_bit concentrates at 1 - beta") {
  const FlipChannel ch = FlipChannel::for_budget(std::log(3.0));
  Rng rng(7);
  double sum = 0.0;
  const int trials = 1000000;
  for (int i = 0; i < trials; ++i) sum += ch.flip(1, rng);
  // 3 sigma of Bernoulli(0.75) over 1e6 trials is ~0.0013.
  CHECK(std::abs(sum / trials - 0.75) < 0.0013);
}

TEST_CASE("debias fixed points") {
  const FlipChannel ch = FlipChannel::for_budget(std::log(3.0));
  CHECK(ch.debias(ch.beta()) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ch.debias(1.0 - ch.beta()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ch.debias(0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("debias is unbiased over repeated runs") {
  const FlipChannel ch = FlipChannel::for_budget(0.9);
  Rng rng(11);
  const int reps = 200;
  const int n = 10000;
  double mean_of_means = 0.0;
  for (int r = 0; r < reps; ++r) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += ch.flip(1, rng);
    mean_of_means += ch.debias(sum / n);
  }
  mean_of_means /= reps;
  const double per_run_sd =
      std::sqrt(ch.beta() * (1.0 - ch.beta()) / n) / ch.gamma();
  CHECK(std::abs(mean_of_means - 1.0) <= 4.0 * per_run_sd / std::sqrt(reps));
}

TEST_CASE("flip_onehot validation and exact law") {
  const FlipChannel per_coord = FlipChannel::for_budget(std::log(3.0));  // eps/2 of 2 ln 3
  Rng rng(3);
  CHECK_THROWS_AS(flip_onehot({0, 0}, per_coord, rng), std::invalid_argument);
  CHECK_THROWS_AS(flip_onehot({1, 1}, per_coord, rng), std::invalid_argument);
  CHECK_THROWS_AS(flip_onehot({1, 2}, per_coord, rng), std::invalid_argument);
  CHECK(flip_onehot({0, 1, 0}, per_coord, rng).size() == 3);

  // d = 2 at total eps = 2 ln 3: the largest likelihood ratio between the two
  // one-hot inputs is exactly e^eps = 9.
  const OneHotFlipChannel table(2, per_coord);
  double worst = 0.0;
  for (int y = 0; y < 4; ++y) {
    const double r = table.prob(y, 0) / table.prob(y, 1);
    worst = std::max(worst, std::max(r, 1.0 / r));
  }
  CHECK(worst == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(max_log_ratio(table) == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));

  // The m = 1000 localization width (2r = 14 coordinates) is accepted.
  std::vector<std::uint8_t> wide(14, 0);
  wide[5] = 1;
  CHECK(flip_onehot(wide, per_coord, rng).size() == 14);
}

TEST_CASE("verify_ldp exact levels") {
  const double eta = 0.7;
  const FlipBitChannel bit(FlipChannel::for_budget(eta));
  CHECK(max_log_ratio(bit) == doctest::Approx(eta).epsilon(1e-12));

  for (int d : {2, 5, 14, 16}) {
    for (double eps : {0.9, 2.0}) {
      const OneHotFlipChannel onehot(d, FlipChannel::for_budget(eps / 2.0));
      CHECK(max_log_ratio(onehot) == doctest::Approx(eps).epsilon(1e-9));
      CHECK(satisfies_ldp(onehot, eps));
    }
  }

  CHECK(std::isinf(max_log_ratio(IdentityChannel(3))));
}

TEST_CASE("hadamard response conditional table") {
  SUBCASE("eps = 0 is uniform") {
    const HadamardResponseChannel ch(5, /*with_null=*/true, 0.0);
    for (int x = 0; x < ch.input_count(); ++x) {
      for (int y = 0; y < ch.K(); ++y) {
        CHECK(ch.message_prob(y, x) == doctest::Approx(1.0 / ch.K()).epsilon(1e-12));
      }
    }
  }
  SUBCASE("K = 2 reduces to randomized response on a bit") {
    const double eps = 1.3;
    const HadamardResponseChannel ch(1, /*with_null=*/true, eps);
    CHECK(ch.K() == 2);
    const double stay = std::exp(eps) / (std::exp(eps) + 1.0);
    CHECK(ch.message_prob(0, 0) == doctest::Approx(stay).epsilon(1e-12));
    CHECK(ch.message_prob(1, 0) == doctest::Approx(1.0 - stay).epsilon(1e-12));
    // The null symbol's law is uniform.
    CHECK(ch.message_prob(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("rows normalize and match the stated values") {
    const double eps = 0.8;
    const HadamardResponseChannel ch(6, /*with_null=*/false, eps);
    CHECK(ch.K() == 8);
    const double p_in = 2.0 * std::exp(eps) / (8.0 * (std::exp(eps) + 1.0));
    const double p_out = 2.0 / (8.0 * (std::exp(eps) + 1.0));
    for (int x = 0; x < 6; ++x) {
      double sum = 0.0;
      int in_set = 0;
      for (int y = 0; y < 8; ++y) {
        const double p = ch.message_prob(y, x);
        CHECK((p == doctest::Approx(p_in) || p == doctest::Approx(p_out)));
        if (p > p_out * 1.5) ++in_set;
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(in_set == 4);
    }
  }
}

TEST_CASE("hadamard response is exactly eps-LDP for K <= 16") {
  for (int alphabet : {1, 2, 3, 7, 12, 15}) {
    for (double eps : {0.3, 1.0, 3.0}) {
      for (bool with_null : {false, true}) {
        const HadamardResponseChannel ch(alphabet, with_null, eps);
        if (ch.K() > 16) continue;
        const HadamardResponseTable table(ch);
        CHECK(max_log_ratio(table) <= eps + 1e-9);
      }
    }
  }
}

TEST_CASE("hadamard response encode agrees with its table") {
  const HadamardResponseChannel ch(3, /*with_null=*/true, 1.1);
  Rng rng(13);
  const int trials = 200000;
  for (int x = 0; x < ch.input_count(); ++x) {
    std::vector<int> counts(static_cast<std::size_t>(ch.K()), 0);
    for (int i = 0; i < trials; ++i) ++counts[static_cast<std::size_t>(ch.encode(x, rng))];
    for (int y = 0; y < ch.K(); ++y) {
      const double expected = ch.message_prob(y, x);
      const double sd = std::sqrt(expected * (1.0 - expected) / trials);
      CHECK(std::abs(counts[static_cast<std::size_t>(y)] / static_cast<double>(trials) -
                     expected) <= 5.0 * sd + 1e-4);
    }
  }
}

TEST_CASE("hadamard decode is exactly unbiased (expectation identity)") {
  Rng rng(17);
  for (int alphabet : {1, 3, 6}) {
    for (bool with_null : {true, false}) {
      const HadamardResponseChannel ch(alphabet, with_null, 0.9);
      if (ch.K() > 8) continue;
      const int inputs = ch.input_count();
      std::vector<double> truth(static_cast<std::size_t>(inputs));
      double sum = 0.0;
      for (auto& t : truth) {
        t = rng.next_unit() + 0.05;
        sum += t;
      }
      for (auto& t : truth) t /= sum;
      // Expected tallies from the exact conditional table; decode is linear.
      std::vector<double> expected_tally(static_cast<std::size_t>(ch.K()), 0.0);
      for (int x = 0; x < inputs; ++x) {
        for (int y = 0; y < ch.K(); ++y) {
          expected_tally[static_cast<std::size_t>(y)] +=
              truth[static_cast<std::size_t>(x)] * ch.message_prob(y, x);
        }
      }
      const std::vector<double> decoded = ch.decode(expected_tally, 1.0);
      for (int x = 0; x < inputs; ++x) {
        CHECK(std::abs(decoded[static_cast<std::size_t>(x)] -
                       truth[static_cast<std::size_t>(x)]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hadamard decode converges in the noiseless limit") {
  const HadamardResponseChannel ch(5, /*with_null=*/false, 200.0);
  Rng rng(19);
  std::vector<std::int64_t> tally(static_cast<std::size_t>(ch.K()), 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++tally[static_cast<std::size_t>(ch.encode(2, rng))];
  const std::vector<double> decoded = ch.decode(tally, n);
  for (int x = 0; x < 5; ++x) {
    CHECK(std::abs(decoded[static_cast<std::size_t>(x)] - (x == 2 ? 1.0 : 0.0)) < 0.02);
  }
}

TEST_CASE("hadamard decode error at the stated variance scale") {
  // K = 4 needs alphabet 3 with null; uniform input at eps = 1, N = 1e6.
  const double eps = 1.0;
  const HadamardResponseChannel ch(3, /*with_null=*/true, eps);
  CHECK(ch.K() == 4);
  Rng rng(23);
  std::vector<std::int64_t> tally(static_cast<std::size_t>(ch.K()), 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(ch.input_count())));
    ++tally[static_cast<std::size_t>(ch.encode(x, rng))];
  }
  const std::vector<double> decoded = ch.decode(tally, n);
  for (int x = 0; x < ch.input_count(); ++x) {
    CHECK(std::abs(decoded[static_cast<std::size_t>(x)] - 0.25) <= 0.01);
  }
  CHECK_THROWS_AS(ch.decode(tally, 0), std::invalid_argument);
}

TEST_CASE("hr encode rejects out-of-range symbols") {
  const HadamardResponseChannel ch(3, /*with_null=*/false, 1.0);
  Rng rng(29);
  CHECK_THROWS_AS(ch.encode(3, rng), std::invalid_argument);
  CHECK_THROWS_AS(ch.encode(-1, rng), std::invalid_argument);
}

TEST_CASE("composition") {
  const PrivacyBudget single = compose({{0.7, 0.0}}, CompositionMode::pure);
  CHECK(single.epsilon == doctest::Approx(0.7));
  CHECK(single.delta == 0.0);

  const PrivacyBudget pure4 =
      compose(std::vector<PrivacyBudget>(4, {0.5, 0.0}), CompositionMode::pure);
  CHECK(pure4.epsilon == doctest::Approx(2.0).epsilon(1e-15));

  const PrivacyBudget adv =
      compose(std::vector<PrivacyBudget>(4, {0.1, 0.0}), CompositionMode::advanced, 1e-6);
  const double expected =
      0.1 * std::sqrt(8.0 * std::log(1e6)) + 0.4 * std::expm1(0.1);
  CHECK(adv.epsilon == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(adv.epsilon - 1.0936) < 1e-3);
  CHECK(adv.delta == doctest::Approx(1e-6));

  CHECK_THROWS_AS(compose({{0.5, 1e-7}}, CompositionMode::pure), std::invalid_argument);
  CHECK_THROWS_AS(compose({{0.5, 0.0}, {0.6, 0.0}}, CompositionMode::advanced, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(compose({{0.5, 0.0}}, CompositionMode::advanced, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(compose({}, CompositionMode::pure), std::invalid_argument);
}

TEST_SUITE_END();
