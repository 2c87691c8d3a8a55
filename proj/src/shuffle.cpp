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

#include "ulldp/shuffle.hpp"

#include <cmath>
#include <stdexcept>

#include "ulldp/errors.hpp"

namespace ulldp {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("shuffle: delta must lie in (0, 1)");
  }
}

}  // namespace

double local_budget_cap(std::int64_t n, double delta) {
  check_delta(delta);
  if (n < 1) throw std::invalid_argument("shuffle: n must be positive");
  const double arg = static_cast<double>(n) / (16.0 * std::log(1.0 / delta));
  if (!(arg > 1.0)) {
    throw infeasible_error("shuffle: n too small for any admissible local budget");
  }
  return std::log(arg);
}

double amplified_epsilon(double eps_local, std::int64_t n, double delta) {
  check_delta(delta);
  if (!(eps_local > 0.0)) {
    throw std::invalid_argument("amplified_epsilon: eps_local must be positive");
  }
  const double cap = local_budget_cap(n, delta);
  if (eps_local > cap + 1e-12) {
    throw std::invalid_argument("amplified_epsilon: eps_local exceeds ln(n/(16 ln(1/delta)))");
  }
  const double e = std::exp(eps_local);
  const double nd = static_cast<double>(n);
  const double clone = (e - 1.0) / (e + 1.0);
  const double drift =
      8.0 * std::sqrt(e * std::log(4.0 / delta)) / std::sqrt(nd) + 8.0 * e / nd;
  return std::log1p(clone * drift);
}

LocalBudgetChoice choose_local_budget(double eps_target, double delta, std::int64_t n,
                                      int k, std::int64_t m) {
  if (!(eps_target > 0.0)) {
    throw infeasible_error("choose_local_budget: target must be positive");
  }
  const double cap = local_budget_cap(n, delta);
  LocalBudgetChoice choice;
  const double nd = static_cast<double>(n);
  const auto finish = [&](double eps_local) {
    choice.epsilon_local = eps_local;
    if (eps_local <= 1.0) {
      choice.regime_hint = "eps<=1";
    } else if (m < k &&
               eps_local <= std::log(static_cast<double>(k) / static_cast<double>(m))) {
      choice.regime_hint = "1<eps<=ln(k/m)";
    } else {
      choice.regime_hint = "eps>ln(k/m)";
    }
    return choice;
  };

  if (amplified_epsilon(cap, n, delta) <= eps_target) {
    choice.branch = LocalBudgetChoice::Branch::cap;
    return finish(cap);
  }

  // Closed-form seeds; their hidden constants mean they only initialize the
  // bracket, the bisection below enforces the invariant.
  double seed = -1.0;
  const double small_limit = std::sqrt(9.0 * std::exp(1.0) * std::log(4.0 / delta) / nd);
  const double large_limit = std::sqrt(static_cast<double>(k) *
                                       std::log(1.0 / delta) * std::log(1.0 / delta) /
                                       (static_cast<double>(m) * nd));
  const double large_seed = 0.5 * std::log(nd * eps_target * eps_target / std::log(1.0 / delta));
  if (eps_target < large_limit && large_seed >= 1.0) {
    choice.branch = LocalBudgetChoice::Branch::large_eps;
    seed = large_seed;
  } else if (eps_target < small_limit) {
    choice.branch = LocalBudgetChoice::Branch::small_eps;
    seed = eps_target * std::sqrt(nd / (9.0 * std::exp(1.0) * std::log(4.0 / delta)));
  }

  double lo = 0.0;  // amplified level tends to 0 with the budget
  double hi = cap;  // known to overshoot the target here
  if (seed > 0.0 && seed < cap) {
    if (amplified_epsilon(seed, n, delta) <= eps_target) {
      lo = seed;
    } else {
      hi = seed;
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * (1.0 + hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (amplified_epsilon(mid, n, delta) <= eps_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > 0.0)) {
    throw infeasible_error("choose_local_budget: no positive local budget meets the target");
  }
  return finish(lo);
}

}  // namespace ulldp
