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

#include "ulldp/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace ulldp {

PrivacyBudget compose(const std::vector<PrivacyBudget>& budgets, CompositionMode mode,
                      double delta_prime) {
  if (budgets.empty()) throw std::invalid_argument("compose: no budgets given");
  if (mode == CompositionMode::pure) {
    PrivacyBudget out;
    for (const auto& b : budgets) {
      if (b.delta != 0.0) {
        throw std::invalid_argument("compose: pure mode requires delta = 0");
      }
      out.epsilon += b.epsilon;
    }
    return out;
  }
  if (!(delta_prime > 0.0)) {
    throw std::invalid_argument("compose: advanced mode requires delta' > 0");
  }
  const double eps = budgets.front().epsilon;
  double delta_sum = 0.0;
  for (const auto& b : budgets) {
    if (b.epsilon != eps) {
      throw std::invalid_argument("compose: advanced mode requires equal budgets");
    }
    delta_sum += b.delta;
  }
  const auto t = static_cast<double>(budgets.size());
  PrivacyBudget out;
  out.epsilon = eps * std::sqrt(2.0 * t * std::log(1.0 / delta_prime)) +
                t * eps * std::expm1(eps);
  out.delta = delta_sum + delta_prime;
  return out;
}

FlipChannel FlipChannel::for_budget(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("FlipChannel: budget must be positive");
  // 1 / (e^eta + 1), stable for large eta.
  const double beta = std::exp(-eta) / (1.0 + std::exp(-eta));
  return FlipChannel(eta, beta);
}

void flip_onehot_into(int hot_index, int d, const FlipChannel& per_coordinate, Rng& rng,
                      std::uint8_t* out) {
  if (hot_index < 0 || hot_index >= d) {
    throw std::invalid_argument("flip_onehot: hot index out of range");
  }
  const double beta = per_coordinate.beta();
  for (int i = 0; i < d; ++i) {
    const std::uint8_t bit = i == hot_index ? 1 : 0;
    out[i] = rng.bernoulli(beta) ? static_cast<std::uint8_t>(1 - bit) : bit;
  }
}

std::vector<std::uint8_t> flip_onehot(const std::vector<std::uint8_t>& onehot,
                                      const FlipChannel& per_coordinate, Rng& rng) {
  int hot = -1;
  for (std::size_t i = 0; i < onehot.size(); ++i) {
    if (onehot[i] == 1) {
      if (hot >= 0) throw std::invalid_argument("flip_onehot: input is not one-hot");
      hot = static_cast<int>(i);
    } else if (onehot[i] != 0) {
      throw std::invalid_argument("flip_onehot: input is not a bit vector");
    }
  }
  if (hot < 0) throw std::invalid_argument("flip_onehot: input is not one-hot");
  std::vector<std::uint8_t> out(onehot.size());
  flip_onehot_into(hot, static_cast<int>(onehot.size()), per_coordinate, rng, out.data());
  return out;
}

namespace {

int next_pow2_at_least(int n) {
  int k = 1;
  while (k < n) k <<= 1;
  return k;
}

}  // namespace

HadamardResponseChannel::HadamardResponseChannel(int alphabet_size, bool with_null,
                                                 double epsilon)
    : alphabet_(alphabet_size), with_null_(with_null), epsilon_(epsilon) {
  if (alphabet_size < 1) {
    throw std::invalid_argument("HadamardResponseChannel: empty alphabet");
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("HadamardResponseChannel: epsilon must be nonnegative");
  }
  // Proper symbols occupy columns 1..alphabet_size, so K must exceed the
  // alphabet size.
  K_ = next_pow2_at_least(alphabet_size + 1);
  stay_ = 1.0 / (1.0 + std::exp(-epsilon));
  scale_ = 2.0 / std::tanh(epsilon / 2.0);
}

int HadamardResponseChannel::encode(int input, Rng& rng) const {
  if (input < 0 || input >= input_count()) {
    throw std::invalid_argument("HadamardResponseChannel::encode: input out of range");
  }
  const int column = column_of(input);
  if (column == 0) return static_cast<int>(rng.below(static_cast<std::uint64_t>(K_)));
  const bool in_set = rng.bernoulli(stay_);
  const auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(K_ / 2)));
  // Bijection from [0, K/2) onto the rows with the desired sign in `column`:
  // insert a parity-fixing bit at the column's lowest set bit.
  const int b = __builtin_ctz(static_cast<unsigned>(column));
  const int low = r & ((1 << b) - 1);
  int y = ((r >> b) << (b + 1)) | low;
  const bool even = in_response_set(y, column);
  if (even != in_set) y |= 1 << b;
  return y;
}

double HadamardResponseChannel::message_prob(int y, int input) const {
  if (y < 0 || y >= K_) return 0.0;
  const int column = column_of(input);
  if (column == 0) return 1.0 / static_cast<double>(K_);
  const double p_in = 2.0 * stay_ / static_cast<double>(K_);
  const double p_out = 2.0 * (1.0 - stay_) / static_cast<double>(K_);
  return in_response_set(y, column) ? p_in : p_out;
}

std::vector<double> HadamardResponseChannel::decode(const std::vector<double>& tally,
                                                    double n) const {
  if (!(n > 0.0)) throw std::invalid_argument("HadamardResponseChannel::decode: empty input");
  if (tally.size() != static_cast<std::size_t>(K_)) {
    throw std::invalid_argument("HadamardResponseChannel::decode: tally size mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(input_count()), 0.0);
  double rest = 0.0;
  for (int x = 0; x < alphabet_; ++x) {
    const int column = column_of(x);
    double hits = 0.0;
    for (int y = 0; y < K_; ++y) {
      if (in_response_set(y, column)) hits += tally[static_cast<std::size_t>(y)];
    }
    const double est = (hits / n - 0.5) * scale_;
    out[static_cast<std::size_t>(x)] = est;
    rest += est;
  }
  if (with_null_) out[static_cast<std::size_t>(alphabet_)] = 1.0 - rest;
  return out;
}

std::vector<double> HadamardResponseChannel::decode(const std::vector<std::int64_t>& tally,
                                                    std::int64_t n) const {
  std::vector<double> real_tally(tally.begin(), tally.end());
  return decode(real_tally, static_cast<double>(n));
}

}  // namespace ulldp
