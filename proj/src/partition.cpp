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

#include "ulldp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulldp/binomial.hpp"

namespace ulldp {

namespace {

int locate_in(const std::vector<double>& boundaries, double x) {
  // Smallest i >= 1 with x <= boundaries[i]; ties go to the lower cell.
  auto it = std::lower_bound(boundaries.begin() + 1, boundaries.end(), x);
  if (it == boundaries.end()) --it;
  return static_cast<int>(it - boundaries.begin());
}

}  // namespace

int IntervalPartition::locate(double x) const { return locate_in(boundaries, x); }

int MidpointPartition::locate(double x) const { return locate_in(boundaries, x); }

IntervalPartition build_partition(std::int64_t m, double constant, PartitionKind kind) {
  if (m <= 0) throw std::invalid_argument("build_partition: m must be positive");
  if (!(constant > 0.0)) {
    throw std::invalid_argument("build_partition: constant must be positive");
  }
  IntervalPartition part;
  part.kind = kind;
  part.constant = constant;
  part.m = m;
  part.r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(m) / (2.0 * constant))));
  if (part.r == 0) {
    part.degenerate = true;
    part.boundaries = {0.0, 1.0};
    return part;
  }
  const int r = part.r;
  std::vector<double> lower(static_cast<std::size_t>(r) + 1);
  lower[0] = 0.0;
  for (int i = 1; i <= r; ++i) {
    lower[static_cast<std::size_t>(i)] =
        std::min(constant * static_cast<double>(i) * static_cast<double>(i) /
                     static_cast<double>(m),
                 0.5);
  }
  // When l_r falls short of 1/2 the region (l_r, 1 - l_r) becomes one extra
  // straddling middle cell; mirroring the lower boundaries then tiles [0, 1]
  // while keeping every boundary on the l_i formula.
  part.boundaries = lower;
  const bool meets_middle = lower[static_cast<std::size_t>(r)] >= 0.5;
  for (int i = meets_middle ? r - 1 : r; i >= 0; --i) {
    part.boundaries.push_back(1.0 - lower[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 1; i < part.boundaries.size(); ++i) {
    if (!(part.boundaries[i] > part.boundaries[i - 1])) {
      throw std::logic_error("build_partition: boundaries not strictly increasing");
    }
  }
  return part;
}

MidpointPartition build_midpoints(const IntervalPartition& refinement) {
  MidpointPartition mid;
  if (refinement.degenerate) {
    mid.boundaries = {0.0, 1.0};
    return mid;
  }
  const int cells = refinement.cell_count();
  mid.anchors.reserve(static_cast<std::size_t>(cells));
  for (int i = 1; i <= cells; ++i) mid.anchors.push_back(refinement.cell_mid(i));
  mid.boundaries.reserve(static_cast<std::size_t>(cells) + 2);
  mid.boundaries.push_back(0.0);
  mid.boundaries.insert(mid.boundaries.end(), mid.anchors.begin(), mid.anchors.end());
  mid.boundaries.push_back(1.0);
  return mid;
}

RefinementFunctions::RefinementFunctions(std::int64_t m,
                                         const IntervalPartition& refinement,
                                         const MidpointPartition& midpoints)
    : m_(m) {
  even_refinement_.resize(static_cast<std::size_t>(m) + 1);
  even_midpoint_.resize(static_cast<std::size_t>(m) + 1);
  for (std::int64_t z = 0; z <= m; ++z) {
    const double x = static_cast<double>(z) / static_cast<double>(m);
    even_refinement_[static_cast<std::size_t>(z)] = refinement.locate(x) % 2 == 0;
    even_midpoint_[static_cast<std::size_t>(z)] = midpoints.locate(x) % 2 == 0;
  }
}

double RefinementFunctions::masked_sum(const std::vector<bool>& mask, double p) const {
  const std::vector<double> pmf = binomial_pmf_table(m_, p);
  double sum = 0.0;
  for (std::size_t z = 0; z < pmf.size(); ++z) {
    if (mask[z]) sum += pmf[z];
  }
  return sum;
}

double RefinementFunctions::r2(double p) const { return masked_sum(even_refinement_, p); }

double RefinementFunctions::r3(double p) const { return masked_sum(even_midpoint_, p); }

double RefinementFunctions::r4(double p) const { return prob_at_least_one(m_, p); }

namespace {

double window_half_width(const IntervalPartition& refinement, int index, int mirror_span) {
  const int mirrored = std::min(index, mirror_span - index);
  return 0.55 * refinement.constant * static_cast<double>(mirrored) /
         static_cast<double>(refinement.m);
}

}  // namespace

RefinementCase select_case(double lo, double hi, const IntervalPartition& refinement,
                           const MidpointPartition& midpoints, bool allow_small) {
  RefinementCase chosen;
  const double small_hi = 65.0 * refinement.constant / static_cast<double>(refinement.m);
  if (allow_small && hi <= small_hi) {
    chosen.kind = RefinementCase::Kind::small_p;
    chosen.index = 0;
    chosen.anchor = 0.0;
    chosen.lo = 0.0;
    chosen.hi = std::min(1.0, small_hi);
    return chosen;
  }

  const int cells = refinement.degenerate ? 0 : refinement.cell_count();
  // Boundary windows around l'_1..l'_{2r-1}.
  for (int i = 1; i < cells; ++i) {
    const double center = refinement.boundaries[static_cast<std::size_t>(i)];
    const double hw = window_half_width(refinement, i, cells);
    if (lo >= center - hw && hi <= center + hw) {
      chosen.kind = RefinementCase::Kind::on_boundary;
      chosen.index = i;
      chosen.anchor = center;
      chosen.lo = std::max(0.0, center - hw);
      chosen.hi = std::min(1.0, center + hw);
      return chosen;
    }
  }
  // Midpoint windows around j_1..j_{2r}.
  const int anchors = static_cast<int>(midpoints.anchors.size());
  for (int i = 1; i <= anchors; ++i) {
    const double center = midpoints.anchors[static_cast<std::size_t>(i - 1)];
    const double hw = window_half_width(refinement, i, anchors + 1);
    if (lo >= center - hw && hi <= center + hw) {
      chosen.kind = RefinementCase::Kind::on_midpoint;
      chosen.index = i;
      chosen.anchor = center;
      chosen.lo = std::max(0.0, center - hw);
      chosen.hi = std::min(1.0, center + hw);
      return chosen;
    }
  }

  if (allow_small) {
    throw protocol_error("select_case: no refinement case contains the interval");
  }
  if (cells == 0) {
    throw protocol_error("select_case: refinement partition is degenerate");
  }

  // Nearest-anchor fallback for the three-group protocol: pick the boundary
  // or midpoint anchor closest to the interval's center and use its window.
  const double center = 0.5 * (lo + hi);
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 1; i < cells; ++i) {
    const double anchor = refinement.boundaries[static_cast<std::size_t>(i)];
    const double d = std::abs(anchor - center);
    if (d < best_dist) {
      best_dist = d;
      const double hw = window_half_width(refinement, i, cells);
      chosen.kind = RefinementCase::Kind::on_boundary;
      chosen.index = i;
      chosen.anchor = anchor;
      chosen.lo = std::max(0.0, anchor - hw);
      chosen.hi = std::min(1.0, anchor + hw);
    }
  }
  for (int i = 1; i <= anchors; ++i) {
    const double anchor = midpoints.anchors[static_cast<std::size_t>(i - 1)];
    const double d = std::abs(anchor - center);
    if (d < best_dist) {
      best_dist = d;
      const double hw = window_half_width(refinement, i, anchors + 1);
      chosen.kind = RefinementCase::Kind::on_midpoint;
      chosen.index = i;
      chosen.anchor = anchor;
      chosen.lo = std::max(0.0, anchor - hw);
      chosen.hi = std::min(1.0, anchor + hw);
    }
  }
  chosen.by_containment = false;
  return chosen;
}

std::pair<double, double> monotone_span(const std::function<double(double)>& f, double lo,
                                        double hi, double anchor) {
  constexpr int kGrid = 128;
  if (!(lo < hi)) return {lo, hi};
  anchor = std::min(std::max(anchor, lo), hi);
  std::vector<double> xs(kGrid + 1);
  std::vector<double> vs(kGrid + 1);
  int anchor_idx = 0;
  for (int i = 0; i <= kGrid; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / kGrid;
    vs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    if (xs[static_cast<std::size_t>(i)] <= anchor) anchor_idx = i;
  }
  // Grow the run around the anchor while one direction stays consistent.
  int a = anchor_idx;
  int b = std::min(anchor_idx + 1, kGrid);
  int dir = 0;  // 0 unknown, +1 nondecreasing, -1 nonincreasing
  const auto step_dir = [&](int i) {
    const double d = vs[static_cast<std::size_t>(i + 1)] - vs[static_cast<std::size_t>(i)];
    return d > 0.0 ? 1 : d < 0.0 ? -1 : 0;
  };
  if (b > a) dir = step_dir(a);
  bool grew = true;
  while (grew) {
    grew = false;
    if (a > 0) {
      const int d = step_dir(a - 1);
      if (d == 0 || dir == 0 || d == dir) {
        if (dir == 0) dir = d;
        --a;
        grew = true;
      }
    }
    if (b < kGrid) {
      const int d = step_dir(b);
      if (d == 0 || dir == 0 || d == dir) {
        if (dir == 0) dir = d;
        ++b;
        grew = true;
      }
    }
  }
  return {xs[static_cast<std::size_t>(a)], xs[static_cast<std::size_t>(b)]};
}

double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double y, double tol) {
  if (!(lo <= hi)) throw std::invalid_argument("invert_monotone: empty interval");
  double flo = f(lo);
  double fhi = f(hi);
  const double fmid = f(0.5 * (lo + hi));
  const double fmin = std::min(flo, fhi);
  const double fmax = std::max(flo, fhi);
  const double slack = 1e-12 + 1e-9 * (fmax - fmin);
  if (fmid < fmin - slack || fmid > fmax + slack) {
    throw std::invalid_argument("invert_monotone: f is not monotone on the interval");
  }
  const bool increasing = fhi >= flo;
  if (y <= fmin) return increasing ? lo : hi;
  if (y >= fmax) return increasing ? hi : lo;
  double a = lo;
  double b = hi;
  double mid = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm - y) <= tol) return mid;
    const bool go_right = increasing ? (fm < y) : (fm > y);
    if (go_right) {
      a = mid;
    } else {
      b = mid;
    }
    if (b - a <= std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b) + 1.0)) {
      break;
    }
  }
  return mid;
}

}  // namespace ulldp
