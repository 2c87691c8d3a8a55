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

#include "ulldp/paninski.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "ulldp/errors.hpp"

namespace ulldp {

namespace {

void check_family(int k, const std::vector<int>& z, double gamma) {
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("paninski: k must be even and >= 2");
  }
  if (z.size() != static_cast<std::size_t>(k / 2)) {
    throw std::invalid_argument("paninski: sign vector must have k/2 entries");
  }
  for (int s : z) {
    if (s != 1 && s != -1) {
      throw std::invalid_argument("paninski: sign entries must be +1 or -1");
    }
  }
  if (!(gamma >= 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("paninski: gamma must lie in [0, 1/2)");
  }
}

void check_gap(int k, std::int64_t m, double gamma) {
  const double limit =
      std::sqrt(static_cast<double>(k) / (8.0 * static_cast<double>(m) + k));
  if (!(gamma >= 0.0 && gamma < std::min(0.5, limit))) {
    throw std::invalid_argument("paninski: gamma outside the validity range");
  }
}

// Number of histograms of m samples over k symbols, capped.
double composition_count(int k, std::int64_t m) {
  double c = 1.0;
  for (int i = 1; i < k; ++i) {
    c *= static_cast<double>(m + i) / static_cast<double>(i);
    if (c > 4e6) return c;
  }
  return c;
}

// Visits every histogram (h_0, ..., h_{k-1}) with sum m.
void for_each_histogram(int k, std::int64_t m,
                        const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> h(static_cast<std::size_t>(k), 0);
  const std::function<void(int, std::int64_t)> rec = [&](int idx, std::int64_t left) {
    if (idx == k - 1) {
      h[static_cast<std::size_t>(idx)] = left;
      visit(h);
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      h[static_cast<std::size_t>(idx)] = c;
      rec(idx + 1, left - c);
    }
  };
  rec(0, m);
}

double brute_moment(int k, std::int64_t m, double gamma, const std::vector<int>& z,
                    int flip_coordinate, bool squared_deviation) {
  check_family(k, z, gamma);
  check_gap(k, m, gamma);
  if (m < 1) throw std::invalid_argument("paninski: m must be positive");
  if (flip_coordinate < 1 || flip_coordinate > k / 2) {
    throw std::invalid_argument("paninski: flip coordinate out of range");
  }
  if (composition_count(k, m) > 2e6) {
    throw resource_error("paninski: histogram enumeration budget exceeded");
  }
  const Distribution p = paninski_dist(k, gamma, z);
  std::vector<double> log_p(static_cast<std::size_t>(k));
  for (int x = 0; x < k; ++x) log_p[static_cast<std::size_t>(x)] = std::log(p[x]);

  const int odd = 2 * (flip_coordinate - 1);  // 0-based index of the 2i-1 symbol
  const int even = odd + 1;                   // 0-based index of the 2i symbol
  const double zi = z[static_cast<std::size_t>(flip_coordinate - 1)];
  const double log_odds = std::log((1.0 + gamma * zi) / (1.0 - gamma * zi));
  const double log_m_fact = std::lgamma(static_cast<double>(m) + 1.0);

  double acc = 0.0;
  for_each_histogram(k, m, [&](const std::vector<std::int64_t>& h) {
    double log_prob = log_m_fact;
    for (int x = 0; x < k; ++x) {
      const auto hx = static_cast<double>(h[static_cast<std::size_t>(x)]);
      log_prob += hx * log_p[static_cast<std::size_t>(x)] - std::lgamma(hx + 1.0);
    }
    const double ratio = std::exp(
        static_cast<double>(h[static_cast<std::size_t>(even)] -
                            h[static_cast<std::size_t>(odd)]) *
        log_odds);
    const double value = squared_deviation ? (ratio - 1.0) * (ratio - 1.0) : ratio;
    acc += std::exp(log_prob) * value;
  });
  return acc;
}

}  // namespace

Distribution paninski_dist(int k, double gamma, const std::vector<int>& z) {
  check_family(k, z, gamma);
  std::vector<double> probs(static_cast<std::size_t>(k));
  for (int i = 0; i < k / 2; ++i) {
    const double zi = z[static_cast<std::size_t>(i)];
    probs[static_cast<std::size_t>(2 * i)] = (1.0 + gamma * zi) / static_cast<double>(k);
    probs[static_cast<std::size_t>(2 * i + 1)] = (1.0 - gamma * zi) / static_cast<double>(k);
  }
  return Distribution(std::move(probs));
}

double alpha_closed_form(int k, std::int64_t m, double gamma) {
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("alpha_closed_form: k must be even and >= 2");
  }
  if (m < 1) throw std::invalid_argument("alpha_closed_form: m must be positive");
  check_gap(k, m, gamma);
  const double base =
      1.0 + 8.0 * gamma * gamma / (static_cast<double>(k) * (1.0 - gamma * gamma));
  return std::pow(base, static_cast<double>(m)) - 1.0;
}

double alpha_brute_force(int k, std::int64_t m, double gamma, const std::vector<int>& z,
                         int flip_coordinate) {
  return brute_moment(k, m, gamma, z, flip_coordinate, /*squared_deviation=*/true);
}

double likelihood_ratio_mean(int k, std::int64_t m, double gamma,
                             const std::vector<int>& z, int flip_coordinate) {
  return brute_moment(k, m, gamma, z, flip_coordinate, /*squared_deviation=*/false);
}

}  // namespace ulldp
