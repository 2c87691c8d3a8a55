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

#ifndef ULLDP_BASELINES_HPP_
#define ULLDP_BASELINES_HPP_

#include "ulldp/distribution.hpp"
#include "ulldp/rng.hpp"
#include "ulldp/user_source.hpp"

namespace ulldp {

// Item-level Hadamard response on one sample per user (the first one);
// the remaining m - 1 samples are ignored. User-level eps-LDP.
Distribution one_sample_hr(const UserSource& users, double eps, Rng rng);

// Item-level Hadamard response applied to every one of the n*m samples
// independently. This treats samples as if they belonged to n*m distinct
// users: it is eps-LDP per item but only (m*eps)-LDP per user, and serves as
// the error floor in comparisons.
Distribution all_sample_hr(const UserSource& users, double eps, Rng rng);

}  // namespace ulldp

#endif  // ULLDP_BASELINES_HPP_
