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

#ifndef ULLDP_ERRORS_HPP_
#define ULLDP_ERRORS_HPP_

#include <stdexcept>

namespace ulldp {

// The protocol's case analysis failed where the theory says it cannot.
// Surfaced rather than patched over.
class protocol_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive computation would exceed its enumeration budget.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No parameter value can satisfy the requested constraint.
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ulldp

#endif  // ULLDP_ERRORS_HPP_
