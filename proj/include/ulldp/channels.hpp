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

#ifndef ULLDP_CHANNELS_HPP_
#define ULLDP_CHANNELS_HPP_

#include <cstdint>
#include <vector>

#include "ulldp/rng.hpp"

namespace ulldp {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

enum class CompositionMode { pure, advanced };

// Sequential composition of local randomizers. Pure mode sums the epsilons
// and requires every delta to be zero. Advanced mode requires equal pure
// budgets and a slack delta' > 0, giving
//   eps'' = eps * sqrt(2 t ln(1/delta')) + t * eps * (e^eps - 1)
// with output delta = sum(delta_i) + delta'. Natural logarithms throughout.
PrivacyBudget compose(const std::vector<PrivacyBudget>& budgets, CompositionMode mode,
                      double delta_prime = 0.0);

// Symmetric bit-flip randomizer: flips with probability beta = 1/(e^eta + 1),
// which is exactly eta-LDP for a single bit. gamma = 1 - 2 beta is the factor
// removed by debias().
class FlipChannel {
 public:
  static FlipChannel for_budget(double eta);

  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double budget() const { return eta_; }

  int flip(int bit, Rng& rng) const { return rng.bernoulli(beta_) ? 1 - bit : bit; }

  // Unbiased inverse of the flip on an empirical mean: (mean - beta) / gamma.
  double debias(double mean) const { return (mean - beta_) / gamma_; }

 private:
  FlipChannel(double eta, double beta) : eta_(eta), beta_(beta), gamma_(1.0 - 2.0 * beta) {}
  double eta_;
  double beta_;
  double gamma_;
};

// Independently flips every coordinate of a one-hot vector with the channel's
// beta. Two one-hot inputs differ in exactly two coordinates, so a channel
// built with per-coordinate budget eps/2 makes the whole vector eps-LDP.
void flip_onehot_into(int hot_index, int d, const FlipChannel& per_coordinate, Rng& rng,
                      std::uint8_t* out);
std::vector<std::uint8_t> flip_onehot(const std::vector<std::uint8_t>& onehot,
                                      const FlipChannel& per_coordinate, Rng& rng);

// K-ary Hadamard response. Symbols map injectively to non-first columns of
// H_K and the response set of a symbol is the rows carrying +1 in its column,
// so every response set has size K/2 and
//   P(y | x) = 2 e^eps / (K (e^eps + 1))   for y in C_x,
//   P(y | x) = 2 / (K (e^eps + 1))         otherwise.
// The null symbol (when present) maps to the first column, whose response
// set is everything; its output law is uniform on [K]. Decoding debiases the
// empirical response-set frequencies; the null mass is one minus the rest,
// which keeps every coordinate unbiased.
class HadamardResponseChannel {
 public:
  // alphabet_size proper symbols 0..alphabet_size-1; with_null appends the
  // null symbol as input index alphabet_size.
  HadamardResponseChannel(int alphabet_size, bool with_null, double epsilon);

  int K() const { return K_; }
  double epsilon() const { return epsilon_; }
  int input_count() const { return alphabet_ + (with_null_ ? 1 : 0); }
  int null_input() const { return with_null_ ? alphabet_ : -1; }

  int encode(int input, Rng& rng) const;

  // Exact conditional probability P(y | input).
  double message_prob(int y, int input) const;

  // Unbiased estimate of the input distribution from message counts.
  // tally[y] counts received messages equal to y; n is the message total.
  // The real-valued overload accepts expected tallies, which makes exact
  // expectation checks a matter of feeding the conditional table back in.
  std::vector<double> decode(const std::vector<double>& tally, double n) const;
  std::vector<double> decode(const std::vector<std::int64_t>& tally, std::int64_t n) const;

 private:
  int column_of(int input) const { return input == alphabet_ ? 0 : input + 1; }
  bool in_response_set(int y, int column) const {
    return (__builtin_popcount(static_cast<unsigned>(y & column)) & 1) == 0;
  }

  int alphabet_;
  bool with_null_;
  int K_;
  double epsilon_;
  double stay_;   // e^eps / (e^eps + 1)
  double scale_;  // 2 (e^eps + 1) / (e^eps - 1) = 2 / tanh(eps / 2)
};

}  // namespace ulldp

#endif  // ULLDP_CHANNELS_HPP_
