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

#ifndef ULLDP_HADAMARD_HPP_
#define ULLDP_HADAMARD_HPP_

#include <vector>

namespace ulldp {

constexpr bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Hadamard order used for the subset reduction: k itself when k is a power of
// two, otherwise the smallest power of two with room for zero-padding (at
// least k + 1).
int hadamard_order(int k);

// H_K(row, col) for 0-based indices of the Sylvester construction:
// +1 iff popcount(row & col) is even.
inline bool hadamard_plus(int row, int col) {
  return (__builtin_popcount(static_cast<unsigned>(row & col)) & 1) == 0;
}

// Row subsets T_i = {x in [k] : H_K(i, x) = +1} for 1-based row i = index+1.
// Symbols are identified with the first k columns of H_K.
std::vector<std::vector<int>> hadamard_sets(int k);

// In-place Walsh-Hadamard transform (v <- H_K v); size must be a power of 2.
void fwht_inplace(std::vector<double>& v);

// Subset probabilities p_T(i) = (H_K p + 1)/2 with p zero-padded to K.
std::vector<double> subset_probabilities(const std::vector<double>& p, int K);

// Inverse of subset_probabilities: the K-dimensional vector H_K^{-1}(2 p_T - 1).
std::vector<double> invert_subset_probabilities(const std::vector<double>& p_t);

}  // namespace ulldp

#endif  // ULLDP_HADAMARD_HPP_
