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

#include "ulldp/distribution.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ulldp {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("Distribution: alphabet size must be at least 2");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("Distribution: entries must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("Distribution: entries must sum to 1, got " +
                                std::to_string(sum));
  }
}

Distribution Distribution::uniform(int k) {
  if (k < 2) throw std::invalid_argument("Distribution::uniform: k must be >= 2");
  return Distribution(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
}

Distribution Distribution::two_point(double p) {
  return Distribution({p, 1.0 - p});
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("tv_distance: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double tv_distance(const Distribution& p, const Distribution& q) {
  return tv_distance(p.probs(), q.probs());
}

Distribution project_to_simplex(const std::vector<double>& v) {
  if (v.size() < 2) {
    throw std::invalid_argument("project_to_simplex: need at least 2 entries");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("project_to_simplex: entries must be finite");
    }
  }
  double sum = 0.0;
  double min_entry = v[0];
  for (double x : v) {
    sum += x;
    min_entry = std::min(min_entry, x);
  }
  if (min_entry >= 0.0 && std::abs(sum - 1.0) <= kSimplexTolerance) {
    return Distribution(v);
  }
  std::vector<double> out(v.size(), 0.0);
  double positive_mass = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) {
      out[i] = v[i];
      positive_mass += v[i];
    }
  }
  if (positive_mass <= 0.0) {
    return Distribution::uniform(static_cast<int>(v.size()));
  }
  for (auto& x : out) x /= positive_mass;
  // A second normalization pass keeps the sum within the simplex tolerance
  // for large alphabets.
  double check = 0.0;
  for (double x : out) check += x;
  for (auto& x : out) x /= check;
  return Distribution(std::move(out));
}

void sample_user_data(const Distribution& p, std::int64_t m, Rng& rng, UserData& out) {
  if (m <= 0) throw std::invalid_argument("sample_user_data: m must be positive");
  const auto k = static_cast<std::size_t>(p.size());
  CategoricalSampler sampler(p.probs());
  out.m = m;
  out.sequence.resize(static_cast<std::size_t>(m));
  out.counts.assign(k, 0);
  for (std::int64_t i = 0; i < m; ++i) {
    const int x = sampler.sample(rng);
    out.sequence[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(x);
    ++out.counts[static_cast<std::size_t>(x)];
  }
}

UserData sample_user_data(const Distribution& p, std::int64_t m, Rng& rng) {
  UserData out;
  sample_user_data(p, m, rng, out);
  return out;
}

}  // namespace ulldp
