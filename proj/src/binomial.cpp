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

#include "ulldp/binomial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ulldp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_binomial_pmf(std::int64_t m, std::int64_t z, double p) {
  if (m <= 0) throw std::invalid_argument("log_binomial_pmf: m must be positive");
  if (z < 0 || z > m) return kNegInf;
  if (p <= 0.0) return z == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return z == m ? 0.0 : kNegInf;
  const double md = static_cast<double>(m);
  const double zd = static_cast<double>(z);
  return std::lgamma(md + 1.0) - std::lgamma(zd + 1.0) - std::lgamma(md - zd + 1.0) +
         zd * std::log(p) + (md - zd) * std::log1p(-p);
}

std::vector<double> binomial_pmf_table(std::int64_t m, double p) {
  if (m <= 0) throw std::invalid_argument("binomial_pmf_table: m must be positive");
  std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[static_cast<std::size_t>(m)] = 1.0;
    return pmf;
  }
  const auto mode = static_cast<std::int64_t>(
      std::min<double>(static_cast<double>(m), std::floor((m + 1) * p)));
  pmf[static_cast<std::size_t>(mode)] = std::exp(log_binomial_pmf(m, mode, p));
  const double odds = p / (1.0 - p);
  for (std::int64_t z = mode; z < m; ++z) {
    const double ratio = odds * static_cast<double>(m - z) / static_cast<double>(z + 1);
    pmf[static_cast<std::size_t>(z + 1)] = pmf[static_cast<std::size_t>(z)] * ratio;
  }
  for (std::int64_t z = mode; z > 0; --z) {
    const double ratio = static_cast<double>(z) / (odds * static_cast<double>(m - z + 1));
    pmf[static_cast<std::size_t>(z - 1)] = pmf[static_cast<std::size_t>(z)] * ratio;
  }
  return pmf;
}

std::int64_t first_count_above(std::int64_t m, double t) {
  if (t < 0.0) return 0;
  if (t >= 1.0) return m + 1;
  auto z = static_cast<std::int64_t>(std::ceil(t * static_cast<double>(m)));
  z = std::max<std::int64_t>(z, 0);
  // Fix up rounding so membership matches the literal comparison z/m > t.
  while (z <= m && !(static_cast<double>(z) / static_cast<double>(m) > t)) ++z;
  while (z > 0 && static_cast<double>(z - 1) / static_cast<double>(m) > t) --z;
  return z;
}

double prob_at_least_one(std::int64_t m, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(m) * std::log1p(-p));
}

double binomial_tail(std::int64_t m, double p, double t) {
  if (m <= 0) throw std::invalid_argument("binomial_tail: m must be positive");
  const std::int64_t z0 = first_count_above(m, t);
  if (z0 > m) return 0.0;
  if (z0 <= 0) return 1.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;  // z0 <= m, so {m} is in the tail

  const double odds = p / (1.0 - p);
  const double mean = static_cast<double>(m) * p;
  if (static_cast<double>(z0) > mean) {
    // Upper tail: terms decay away from z0.
    double term = std::exp(log_binomial_pmf(m, z0, p));
    double sum = term;
    for (std::int64_t z = z0; z < m; ++z) {
      term *= odds * static_cast<double>(m - z) / static_cast<double>(z + 1);
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return std::min(sum, 1.0);
  }
  // Complement of the lower tail 0..z0-1, accumulated downward from z0-1.
  double term = std::exp(log_binomial_pmf(m, z0 - 1, p));
  double sum = term;
  for (std::int64_t z = z0 - 1; z > 0; --z) {
    term *= static_cast<double>(z) / (odds * static_cast<double>(m - z + 1));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return std::max(1.0 - sum, 0.0);
}

}  // namespace ulldp
