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

#ifndef ULLDP_USER_SOURCE_HPP_
#define ULLDP_USER_SOURCE_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ulldp/distribution.hpp"
#include "ulldp/rng.hpp"

namespace ulldp {

// Deterministic random access to the users' raw samples. Estimators stream
// users one at a time through fetch(), which lets simulations at n*m in the
// hundreds of millions run in constant memory. fetch(u, ...) must return the
// same data every time it is called for the same u.
class UserSource {
 public:
  virtual ~UserSource() = default;
  virtual std::size_t size() const = 0;
  virtual std::int64_t samples_per_user() const = 0;
  virtual int alphabet_size() const = 0;
  virtual void fetch(std::size_t u, UserData& out) const = 0;
};

// Users drawn i.i.d. from a fixed distribution. User u's samples come from
// the stream rng.derive(u), so they depend only on (rng identity, u) and are
// reproducible under any access pattern or parallel schedule.
class SimulatedUserSource final : public UserSource {
 public:
  SimulatedUserSource(Distribution p, std::int64_t m, std::size_t n, Rng rng)
      : p_(std::move(p)), sampler_(p_.probs()), m_(m), n_(n), rng_(rng) {
    if (m <= 0) throw std::invalid_argument("SimulatedUserSource: m must be positive");
  }

  std::size_t size() const override { return n_; }
  std::int64_t samples_per_user() const override { return m_; }
  int alphabet_size() const override { return p_.size(); }

  void fetch(std::size_t u, UserData& out) const override {
    Rng stream = rng_.derive(static_cast<std::uint64_t>(u));
    out.m = m_;
    out.sequence.resize(static_cast<std::size_t>(m_));
    out.counts.assign(static_cast<std::size_t>(p_.size()), 0);
    for (std::int64_t i = 0; i < m_; ++i) {
      const int x = sampler_.sample(stream);
      out.sequence[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(x);
      ++out.counts[static_cast<std::size_t>(x)];
    }
  }

  const Distribution& distribution() const { return p_; }

 private:
  Distribution p_;
  CategoricalSampler sampler_;
  std::int64_t m_;
  std::size_t n_;
  Rng rng_;
};

// Fixed user list, mainly for tests and explicit-data entry points.
class VectorUserSource final : public UserSource {
 public:
  VectorUserSource(std::vector<UserData> users, int alphabet_size)
      : users_(std::move(users)), k_(alphabet_size) {
    if (users_.empty()) throw std::invalid_argument("VectorUserSource: no users");
    m_ = users_.front().m;
    for (const auto& u : users_) {
      if (u.m != m_) {
        throw std::invalid_argument("VectorUserSource: users must share m");
      }
    }
  }

  std::size_t size() const override { return users_.size(); }
  std::int64_t samples_per_user() const override { return m_; }
  int alphabet_size() const override { return k_; }
  void fetch(std::size_t u, UserData& out) const override { out = users_[u]; }

 private:
  std::vector<UserData> users_;
  int k_;
  std::int64_t m_;
};

}  // namespace ulldp

#endif  // ULLDP_USER_SOURCE_HPP_
