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

#ifndef ULLDP_PARTITION_HPP_
#define ULLDP_PARTITION_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ulldp/errors.hpp"

namespace ulldp {

enum class PartitionKind { localization, refinement };

// Mirror-symmetric partition of [0, 1] with quadratically growing boundaries
// l_i = min{c i^2 / m, 1/2}, i <= r = floor(sqrt(m / (2c))), mirrored onto
// the upper half. When l_r < 1/2 the leftover region (l_r, 1 - l_r) forms one
// extra straddling middle cell, so the cell count is 2r or 2r + 1 and the
// cells always tile [0, 1] (a total cover is what makes the one-hot cell
// indicator well defined). r = 0 degenerates to the single cell [0, 1] with
// the `degenerate` flag set.
struct IntervalPartition {
  PartitionKind kind = PartitionKind::localization;
  double constant = 0.0;
  std::int64_t m = 0;
  int r = 0;
  bool degenerate = false;
  std::vector<double> boundaries;  // ascending, first = 0, last = 1

  int cell_count() const { return static_cast<int>(boundaries.size()) - 1; }
  double cell_lo(int i) const { return boundaries[static_cast<std::size_t>(i - 1)]; }
  double cell_hi(int i) const { return boundaries[static_cast<std::size_t>(i)]; }
  double cell_mid(int i) const { return 0.5 * (cell_lo(i) + cell_hi(i)); }

  // 1-based index of the cell containing x; boundary points go to the
  // lower-indexed cell, so cell i is effectively (l_{i-1}, l_i] and cell 1
  // additionally owns 0.
  int locate(double x) const;
};

IntervalPartition build_partition(std::int64_t m, double constant,
                                  PartitionKind kind = PartitionKind::localization);

// The partition of [0, 1] induced by the midpoints j_i of a refinement
// partition's cells: 2r + 1 cells with boundaries 0, j_1, ..., j_{2r}, 1.
// Each midpoint is interior to its cell, and the construction inherits the
// mirror symmetry of the underlying partition.
struct MidpointPartition {
  std::vector<double> anchors;     // j_1..j_{2r}
  std::vector<double> boundaries;  // 0, j_1, ..., j_{2r}, 1

  int cell_count() const { return static_cast<int>(boundaries.size()) - 1; }
  int locate(double x) const;
};

MidpointPartition build_midpoints(const IntervalPartition& refinement);

// Exact Binomial(m, p) probabilities of the three refinement events:
//   r2: Z/m lands in an even-indexed refinement cell,
//   r3: Z/m lands in an even-indexed midpoint cell,
//   r4: Z >= 1.
// Cell membership of a count z uses the same locate() rule as the per-user
// indicator bits, so these functions are the exact means being estimated.
class RefinementFunctions {
 public:
  RefinementFunctions(std::int64_t m, const IntervalPartition& refinement,
                      const MidpointPartition& midpoints);

  double r2(double p) const;
  double r3(double p) const;
  double r4(double p) const;

  std::int64_t m() const { return m_; }

 private:
  double masked_sum(const std::vector<bool>& mask, double p) const;

  std::int64_t m_;
  std::vector<bool> even_refinement_;  // per count z
  std::vector<bool> even_midpoint_;
};

// Which refinement function the server inverts, and over which interval.
struct RefinementCase {
  enum class Kind { small_p, on_boundary, on_midpoint };
  Kind kind = Kind::small_p;
  int index = 0;   // 1-based anchor index; 0 for small_p
  double anchor = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  bool by_containment = true;  // false when the nearest-anchor fallback fired
};

// Case selection for a confidence interval [lo, hi] (a union of up to three
// consecutive localization cells). Cases are tried in order: small_p (only
// when allow_small), then boundary windows, then midpoint windows, each by
// containment. Window half-widths are 0.55 c i / m with the index mirrored on
// the upper half so the analysis stays symmetric under relabeling.
//
// When allow_small is set (the four-group protocol) a containment miss is a
// protocol_error. Without it (the three-group experiment protocol, whose
// small constants break the containment geometry) the nearest anchor to the
// interval's center is used instead and the case is marked as a fallback.
RefinementCase select_case(double lo, double hi, const IntervalPartition& refinement,
                           const MidpointPartition& midpoints, bool allow_small);

// Bisection inverse of a strictly monotone f on [lo, hi]: returns p with
// |f(p) - clamp(y, range)| <= tol. Values outside f's range clamp to the
// nearer endpoint. Throws std::invalid_argument when endpoint/midpoint
// samples are inconsistent with monotonicity.
double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double y, double tol = 1e-10);

// Maximal sub-interval of [lo, hi] containing `anchor` on which f is
// monotone along a fixed evaluation grid. The nearest-anchor fallback inverts
// on this span: its windows carry no containment guarantee, and the event
// probabilities can turn over within them.
std::pair<double, double> monotone_span(const std::function<double(double)>& f, double lo,
                                        double hi, double anchor);

}  // namespace ulldp

#endif  // ULLDP_PARTITION_HPP_
