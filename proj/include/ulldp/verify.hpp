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

#ifndef ULLDP_VERIFY_HPP_
#define ULLDP_VERIFY_HPP_

#include <cstdint>
#include <vector>

#include "ulldp/channels.hpp"

namespace ulldp {

// A randomizer with finite input and message spaces and an exact conditional
// table, the form every channel in this library can be reduced to for
// verification.
class FiniteChannel {
 public:
  virtual ~FiniteChannel() = default;
  virtual int input_count() const = 0;
  virtual int output_count() const = 0;
  virtual double prob(int y, int x) const = 0;
};

// max over inputs x, x' and messages y of ln(P(y|x) / P(y|x')). Returns +inf
// when some message has positive probability under one input and zero under
// another. This is the exact LDP level of the channel.
double max_log_ratio(const FiniteChannel& ch);

bool satisfies_ldp(const FiniteChannel& ch, double epsilon, double slack = 1e-9);

// Dense conditional table.
class TableChannel : public FiniteChannel {
 public:
  TableChannel(int inputs, int outputs)
      : inputs_(inputs), outputs_(outputs),
        table_(static_cast<std::size_t>(inputs) * static_cast<std::size_t>(outputs), 0.0) {}

  static TableChannel from(const FiniteChannel& ch);

  int input_count() const override { return inputs_; }
  int output_count() const override { return outputs_; }
  double prob(int y, int x) const override {
    return table_[static_cast<std::size_t>(x) * static_cast<std::size_t>(outputs_) +
                  static_cast<std::size_t>(y)];
  }
  double& at(int y, int x) {
    return table_[static_cast<std::size_t>(x) * static_cast<std::size_t>(outputs_) +
                  static_cast<std::size_t>(y)];
  }

 private:
  int inputs_;
  int outputs_;
  std::vector<double> table_;
};

// Independent product: both channels see the same input, the message is the
// pair (y_a, y_b) flattened as y_a * b.outputs + y_b.
TableChannel product(const FiniteChannel& a, const FiniteChannel& b);

// Precomposition with a deterministic map: input i of the result feeds
// input_map[i] into ch.
TableChannel precompose(const FiniteChannel& ch, const std::vector<int>& input_map);

// Exact tables for the library's randomizers.

class FlipBitChannel : public FiniteChannel {
 public:
  explicit FlipBitChannel(const FlipChannel& ch) : beta_(ch.beta()) {}
  int input_count() const override { return 2; }
  int output_count() const override { return 2; }
  double prob(int y, int x) const override { return y == x ? 1.0 - beta_ : beta_; }

 private:
  double beta_;
};

// One-hot coordinate flip over d coordinates: inputs are hot indices,
// messages are bit vectors encoded as integers in [0, 2^d).
class OneHotFlipChannel : public FiniteChannel {
 public:
  OneHotFlipChannel(int d, const FlipChannel& per_coordinate)
      : d_(d), beta_(per_coordinate.beta()) {}
  int input_count() const override { return d_; }
  int output_count() const override { return 1 << d_; }
  double prob(int y, int x) const override;

 private:
  int d_;
  double beta_;
};

// Adapter exposing a HadamardResponseChannel's exact table.
class HadamardResponseTable : public FiniteChannel {
 public:
  explicit HadamardResponseTable(const HadamardResponseChannel& ch) : ch_(ch) {}
  int input_count() const override { return ch_.input_count(); }
  int output_count() const override { return ch_.K(); }
  double prob(int y, int x) const override { return ch_.message_prob(y, x); }

 private:
  const HadamardResponseChannel& ch_;
};

class IdentityChannel : public FiniteChannel {
 public:
  explicit IdentityChannel(int n) : n_(n) {}
  int input_count() const override { return n_; }
  int output_count() const override { return n_; }
  double prob(int y, int x) const override { return y == x ? 1.0 : 0.0; }

 private:
  int n_;
};

}  // namespace ulldp

#endif  // ULLDP_VERIFY_HPP_
