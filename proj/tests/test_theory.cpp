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
#include "ulldp/errors.hpp"
#include "ulldp/paninski.hpp"

using namespace ulldp;

namespace {

std::vector<std::vector<int>> all_signs(int half) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << half); ++mask) {
    std::vector<int> z(static_cast<std::size_t>(half));
    for (int i = 0; i < half; ++i) z[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("theory");

TEST_CASE("perturbed uniform family examples") {
  const Distribution flat = paninski_dist(4, 0.0, {1, -1});
  for (int x = 0; x < 4; ++x) CHECK(flat[x] == doctest::Approx(0.25));

  const Distribution two = paninski_dist(2, 0.2, {1});
  CHECK(two[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(0.4).epsilon(1e-15));

  const Distribution four = paninski_dist(4, 0.1, {1, -1});
  CHECK(four[0] == doctest::Approx(0.275).epsilon(1e-15));
  CHECK(four[1] == doctest::Approx(0.225).epsilon(1e-15));
  CHECK(four[2] == doctest::Approx(0.225).epsilon(1e-15));
  CHECK(four[3] == doctest::Approx(0.275).epsilon(1e-15));

  CHECK_THROWS_AS(paninski_dist(3, 0.1, {1}), std::invalid_argument);
  CHECK_THROWS_AS(paninski_dist(4, 0.1, {1}), std::invalid_argument);
  CHECK_THROWS_AS(paninski_dist(4, 0.1, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(paninski_dist(4, 0.6, {1, -1}), std::invalid_argument);
}

TEST_CASE("closed form examples") {
  CHECK(alpha_closed_form(4, 2, 0.0) == 0.0);
  const double expected_m2 = std::pow(1.0 + 0.08 / (4.0 * 0.99), 2.0) - 1.0;
  CHECK(alpha_closed_form(4, 2, 0.1) == doctest::Approx(expected_m2).epsilon(1e-15));
  CHECK(std::abs(alpha_closed_form(4, 2, 0.1) - 0.0408122) < 1e-7);
  CHECK(std::abs(alpha_closed_form(4, 1, 0.1) - 0.0202020) < 1e-7);
}

TEST_CASE("brute force equals the closed form on the enumerable grid") {
  for (int k : {2, 4}) {
    for (std::int64_t m : {1, 2, 3}) {
      for (double gamma : {0.05, 0.1}) {
        const double closed = alpha_closed_form(k, m, gamma);
        for (const auto& z : all_signs(k / 2)) {
          for (int i = 1; i <= k / 2; ++i) {
            const double brute = alpha_brute_force(k, m, gamma, z, i);
            CHECK(std::abs(brute - closed) <= 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("likelihood ratios average to one") {
  for (int k : {2, 4}) {
    for (std::int64_t m : {1, 2, 3}) {
      for (double gamma : {0.05, 0.1}) {
        for (const auto& z : all_signs(k / 2)) {
          for (int i = 1; i <= k / 2; ++i) {
            CHECK(std::abs(likelihood_ratio_mean(k, m, gamma, z, i) - 1.0) <= 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("gamma zero gives exactly zero") {
  CHECK(alpha_brute_force(4, 3, 0.0, {1, -1}, 1) == 0.0);
  CHECK(alpha_brute_force(4, 3, 0.0, {1, -1}, 2) == 0.0);
}

TEST_CASE("validity range and resource limits are enforced") {
  // gamma must stay below sqrt(k / (8m + k)).
  CHECK_THROWS_AS(alpha_closed_form(4, 100, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(alpha_brute_force(4, 100, 0.4, {1, -1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(alpha_brute_force(4, 2, 0.1, {1, -1}, 3), std::invalid_argument);
  // k = 20, m = 20 has ~7e10 histograms.
  std::vector<int> z(10, 1);
  CHECK_THROWS_AS(alpha_brute_force(20, 20, 0.01, z, 1), resource_error);
}

TEST_SUITE_END();
