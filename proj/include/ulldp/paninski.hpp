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

#ifndef ULLDP_PANINSKI_HPP_
#define ULLDP_PANINSKI_HPP_

#include <cstdint>
#include <vector>

#include "ulldp/distribution.hpp"

namespace ulldp {

// The +-gamma perturbations of uniform indexed by sign vectors:
// p_z(2i-1) = (1 + gamma z_i)/k, p_z(2i) = (1 - gamma z_i)/k (1-based pairs).
Distribution paninski_dist(int k, double gamma, const std::vector<int>& z);

// Chi-square-like coefficient of the m-sample multinomial family:
//   alpha = (1 + 8 gamma^2 / (k (1 - gamma^2)))^m - 1.
// Requires gamma in [0, min(1/2, sqrt(k/(8m + k)))).
double alpha_closed_form(int k, std::int64_t m, double gamma);

// The same quantity by exhaustive histogram enumeration:
//   E_{P_z}[(dP_{z^i}/dP_z - 1)^2]
// where z^i flips sign coordinate i (1-based, i in [1, k/2]). Exact up to
// double precision; throws resource_error past ~2e6 histograms.
double alpha_brute_force(int k, std::int64_t m, double gamma, const std::vector<int>& z,
                         int flip_coordinate);

// E_{P_z}[dP_{z^i}/dP_z], which must equal 1 for a probability measure.
double likelihood_ratio_mean(int k, std::int64_t m, double gamma,
                             const std::vector<int>& z, int flip_coordinate);

}  // namespace ulldp

#endif  // ULLDP_PANINSKI_HPP_
