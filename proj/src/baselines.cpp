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

#include "ulldp/baselines.hpp"

#include <stdexcept>

#include "ulldp/channels.hpp"

namespace ulldp {

namespace {

int first_sample(const UserData& user) {
  if (!user.sequence.empty()) return static_cast<int>(user.sequence.front());
  if (user.m == 1) {
    for (std::size_t x = 0; x < user.counts.size(); ++x) {
      if (user.counts[x] > 0) return static_cast<int>(x);
    }
  }
  throw std::invalid_argument("one_sample_hr: sample order unavailable");
}

}  // namespace

Distribution one_sample_hr(const UserSource& users, double eps, Rng rng) {
  const int k = users.alphabet_size();
  const HadamardResponseChannel channel(k, /*with_null=*/false, eps);
  std::vector<std::int64_t> tally(static_cast<std::size_t>(channel.K()), 0);
  UserData scratch;
  const std::size_t n = users.size();
  for (std::size_t u = 0; u < n; ++u) {
    users.fetch(u, scratch);
    Rng stream = rng.derive(u);
    const int y = channel.encode(first_sample(scratch), stream);
    ++tally[static_cast<std::size_t>(y)];
  }
  return project_to_simplex(channel.decode(tally, static_cast<std::int64_t>(n)));
}

Distribution all_sample_hr(const UserSource& users, double eps, Rng rng) {
  const int k = users.alphabet_size();
  const HadamardResponseChannel channel(k, /*with_null=*/false, eps);
  std::vector<std::int64_t> tally(static_cast<std::size_t>(channel.K()), 0);
  UserData scratch;
  const std::size_t n = users.size();
  std::int64_t messages = 0;
  for (std::size_t u = 0; u < n; ++u) {
    users.fetch(u, scratch);
    if (scratch.sequence.empty()) {
      throw std::invalid_argument("all_sample_hr: sample order unavailable");
    }
    Rng stream = rng.derive(u);
    for (auto s : scratch.sequence) {
      const int y = channel.encode(static_cast<int>(s), stream);
      ++tally[static_cast<std::size_t>(y)];
      ++messages;
    }
  }
  return project_to_simplex(channel.decode(tally, messages));
}

}  // namespace ulldp
