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

#ifndef ULLDP_DISTRIBUTION_HPP_
#define ULLDP_DISTRIBUTION_HPP_

#include <cstdint>
#include <vector>

#include "ulldp/rng.hpp"

namespace ulldp {

inline constexpr double kSimplexTolerance = 1e-12;

// Probability vector over a finite alphabet {0, ..., k-1}: entries
// nonnegative, summing to one within kSimplexTolerance, k >= 2.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(int k);

  // The k = 2 distribution (p, 1 - p).
  static Distribution two_point(double p);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& probs() const { return probs_; }

  // Probability mass of a subset given by a membership predicate.
  template <typename Pred>
  double mass(Pred&& member) const {
    double s = 0.0;
    for (int x = 0; x < size(); ++x) {
      if (member(x)) s += probs_[static_cast<std::size_t>(x)];
    }
    return s;
  }

 private:
  std::vector<double> probs_;
};

// Half the l1 distance. Requires equal alphabet sizes.
double tv_distance(const Distribution& p, const Distribution& q);
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

// Nearest simplex member in the clip-and-renormalize sense: negatives are
// clipped to zero and the positive mass is renormalized. Zero positive mass
// falls back to uniform. Vectors already on the simplex (within
// kSimplexTolerance) are returned verbatim, which makes the map idempotent.
Distribution project_to_simplex(const std::vector<double>& v);

// One user's m samples. `sequence` keeps the draw order (needed by the
// first-occurrence reduction and the one-sample baseline); `counts` is the
// induced histogram over the alphabet.
struct UserData {
  std::vector<std::uint32_t> sequence;
  std::vector<std::uint32_t> counts;
  std::int64_t m = 0;

  // Count of samples landing in the set given by a membership predicate.
  template <typename Pred>
  std::int64_t count_in(Pred&& member) const {
    std::int64_t c = 0;
    if (!counts.empty()) {
      for (std::size_t x = 0; x < counts.size(); ++x) {
        if (member(static_cast<int>(x))) c += counts[x];
      }
    } else {
      for (auto s : sequence) {
        if (member(static_cast<int>(s))) ++c;
      }
    }
    return c;
  }
};

// Draws m i.i.d. samples from p into `out` (sequence + counts). Deterministic
// given the stream state. m = 0 is rejected.
void sample_user_data(const Distribution& p, std::int64_t m, Rng& rng, UserData& out);
UserData sample_user_data(const Distribution& p, std::int64_t m, Rng& rng);

}  // namespace ulldp

#endif  // ULLDP_DISTRIBUTION_HPP_
