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

#ifndef ULLDP_RNG_HPP_
#define ULLDP_RNG_HPP_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ulldp {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Deterministic, platform-independent random stream (xoshiro256++ seeded via
// SplitMix64). Streams form a tree: derive(i) yields a child stream whose
// identity depends only on this stream's key and i, never on how many values
// have been drawn, so independent callers can safely work off disjoint
// children. All sampling goes through next_unit()/below() so results are
// bit-reproducible across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {
    std::uint64_t sm = key;
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(Rng(seed).derive(stream)) {}

  // Child stream keyed by (this stream's identity, stream index).
  Rng derive(std::uint64_t stream) const {
    std::uint64_t sm = key_ + 0x9E3779B97F4A7C15ULL * (stream + 1);
    std::uint64_t k = detail::splitmix64(sm);
    k ^= detail::splitmix64(sm);
    return Rng(k);
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    const std::uint64_t result =
        detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, n) without modulo bias (Lemire's method).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t state_[4];
};

// Inverse-CDF sampler for a fixed finite distribution. Draw order and results
// depend only on the stream, so samples are reproducible.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& probs) : cdf_(probs) {
    double acc = 0.0;
    for (auto& c : cdf_) {
      acc += c;
      c = acc;
    }
  }

  int sample(Rng& rng) const {
    const double u = rng.next_unit();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<int>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace ulldp

#endif  // ULLDP_RNG_HPP_
