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

#ifndef ULLDP_SHUFFLE_HPP_
#define ULLDP_SHUFFLE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ulldp/rng.hpp"

namespace ulldp {

// Central (eps', delta)-DP level of n uniformly shuffled eps-LDP reports:
//   eps' = ln(1 + (e^eps - 1)/(e^eps + 1) * (8 sqrt(e^eps ln(4/delta))/sqrt(n)
//                                            + 8 e^eps / n)).
// Valid for delta in (0, 1) and eps <= ln(n / (16 ln(1/delta))); natural
// logarithms throughout.
double amplified_epsilon(double eps_local, std::int64_t n, double delta);

// Largest admissible local budget, i.e. the cap of the amplification bound.
double local_budget_cap(std::int64_t n, double delta);

struct LocalBudgetChoice {
  double epsilon_local = 0.0;
  // Which closed form seeded the search: the small branch
  // eps * sqrt(n / (9e ln(4/delta))), the large branch
  // 0.5 * ln(n eps^2 / ln(1/delta)), the validity cap, or plain bisection
  // when neither branch's applicability condition held.
  enum class Branch { cap, small_eps, large_eps, bisection } branch = Branch::bisection;
  // Estimation regime the chosen local budget lands in.
  std::string regime_hint;
};

// Largest local budget whose amplified level stays at or below eps_target.
// The closed forms only seed the search; the returned value always satisfies
// amplified_epsilon(eps_local, n, delta) <= eps_target exactly, found by
// bisecting below the cap. Throws infeasible_error when no positive budget
// works.
LocalBudgetChoice choose_local_budget(double eps_target, double delta, std::int64_t n,
                                      int k, std::int64_t m);

// Uniform random permutation of a message multiset (Fisher-Yates), the
// shuffler the amplification bound assumes.
template <typename T>
void shuffle_messages(std::vector<T>& messages, Rng& rng) {
  for (std::size_t i = messages.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(messages[i - 1], messages[j]);
  }
}

}  // namespace ulldp

#endif  // ULLDP_SHUFFLE_HPP_
