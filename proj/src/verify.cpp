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

#include "ulldp/verify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ulldp {

double max_log_ratio(const FiniteChannel& ch) {
  const int nx = ch.input_count();
  const int ny = ch.output_count();
  double worst = 0.0;
  for (int y = 0; y < ny; ++y) {
    double pmin = std::numeric_limits<double>::infinity();
    double pmax = 0.0;
    for (int x = 0; x < nx; ++x) {
      const double p = ch.prob(y, x);
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
    }
    if (pmax == 0.0) continue;  // message unreachable under every input
    if (pmin == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::log(pmax / pmin));
  }
  return worst;
}

bool satisfies_ldp(const FiniteChannel& ch, double epsilon, double slack) {
  return max_log_ratio(ch) <= epsilon + slack;
}

TableChannel TableChannel::from(const FiniteChannel& ch) {
  TableChannel out(ch.input_count(), ch.output_count());
  for (int x = 0; x < ch.input_count(); ++x) {
    for (int y = 0; y < ch.output_count(); ++y) out.at(y, x) = ch.prob(y, x);
  }
  return out;
}

TableChannel product(const FiniteChannel& a, const FiniteChannel& b) {
  if (a.input_count() != b.input_count()) {
    throw std::invalid_argument("product: input domains differ");
  }
  TableChannel out(a.input_count(), a.output_count() * b.output_count());
  for (int x = 0; x < a.input_count(); ++x) {
    for (int ya = 0; ya < a.output_count(); ++ya) {
      const double pa = a.prob(ya, x);
      if (pa == 0.0) continue;
      for (int yb = 0; yb < b.output_count(); ++yb) {
        out.at(ya * b.output_count() + yb, x) = pa * b.prob(yb, x);
      }
    }
  }
  return out;
}

TableChannel precompose(const FiniteChannel& ch, const std::vector<int>& input_map) {
  TableChannel out(static_cast<int>(input_map.size()), ch.output_count());
  for (std::size_t i = 0; i < input_map.size(); ++i) {
    const int x = input_map[i];
    if (x < 0 || x >= ch.input_count()) {
      throw std::invalid_argument("precompose: mapped input out of range");
    }
    for (int y = 0; y < ch.output_count(); ++y) {
      out.at(y, static_cast<int>(i)) = ch.prob(y, x);
    }
  }
  return out;
}

double OneHotFlipChannel::prob(int y, int x) const {
  if (x < 0 || x >= d_) return 0.0;
  double p = 1.0;
  for (int i = 0; i < d_; ++i) {
    const int sent = (y >> i) & 1;
    const int bit = i == x ? 1 : 0;
    p *= sent == bit ? 1.0 - beta_ : beta_;
  }
  return p;
}

}  // namespace ulldp
