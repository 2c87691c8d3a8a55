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

#include "ulldp/hadamard.hpp"

#include <stdexcept>

namespace ulldp {

int hadamard_order(int k) {
  if (k < 2) throw std::invalid_argument("hadamard_order: k must be >= 2");
  if (is_pow2(k)) return k;
  int K = 1;
  while (K < k + 1) K <<= 1;
  return K;
}

std::vector<std::vector<int>> hadamard_sets(int k) {
  const int K = hadamard_order(k);
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(K));
  for (int row = 0; row < K; ++row) {
    auto& t = sets[static_cast<std::size_t>(row)];
    for (int x = 0; x < k; ++x) {
      if (hadamard_plus(row, x)) t.push_back(x);
    }
  }
  return sets;
}

void fwht_inplace(std::vector<double>& v) {
  const auto n = v.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fwht_inplace: size must be a power of 2");
  }
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = v[j];
        const double b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
}

std::vector<double> subset_probabilities(const std::vector<double>& p, int K) {
  if (static_cast<int>(p.size()) > K) {
    throw std::invalid_argument("subset_probabilities: K smaller than alphabet");
  }
  std::vector<double> v(p);
  v.resize(static_cast<std::size_t>(K), 0.0);
  fwht_inplace(v);
  for (auto& x : v) x = 0.5 * (x + 1.0);
  return v;
}

std::vector<double> invert_subset_probabilities(const std::vector<double>& p_t) {
  std::vector<double> v(p_t);
  for (auto& x : v) x = 2.0 * x - 1.0;
  fwht_inplace(v);
  const auto K = static_cast<double>(v.size());
  for (auto& x : v) x /= K;
  return v;
}

}  // namespace ulldp
