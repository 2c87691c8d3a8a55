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

#ifndef ULLDP_BINOMIAL_HPP_
#define ULLDP_BINOMIAL_HPP_

#include <cstdint>
#include <vector>

namespace ulldp {

// log Pr[Z = z] for Z ~ Binomial(m, p). Returns -inf for zero-probability
// outcomes (including the p = 0 / p = 1 edges).
double log_binomial_pmf(std::int64_t m, std::int64_t z, double p);

// Full pmf table pmf[z] for z = 0..m, computed by a mode-anchored recurrence
// so mid-range terms never travel through underflowed tails.
std::vector<double> binomial_pmf_table(std::int64_t m, double p);

// Pr[Z/m > t] for Z ~ Binomial(m, p), strict inequality. The threshold count
// is resolved with the same floating-point comparison (z / m > t) used by
// per-user indicator bits, so the function and the bits always agree. Stable
// up to m ~ 1e6: the smaller of the two tails is accumulated directly.
double binomial_tail(std::int64_t m, double p, double t);

// Pr[Z >= 1] = 1 - (1 - p)^m, evaluated via expm1/log1p.
double prob_at_least_one(std::int64_t m, double p);

// Smallest integer z in [0, m+1] with (double)z / m > t; m+1 means "none".
std::int64_t first_count_above(std::int64_t m, double t);

}  // namespace ulldp

#endif  // ULLDP_BINOMIAL_HPP_
