// Copyright 2026 The cbiou Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference implementations used only by tests. Nothing here
// calls into the code paths it checks.

#ifndef CBIOU_TESTS_ORACLES_H_
#define CBIOU_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace cbiou::testing {

// Integer box [x, x + w) x [y, y + h) on a pixel grid.
struct PixelBox {
  int x, y, w, h;
  bool Covers(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
};

struct PixelAreas {
  std::int64_t intersection = 0;
  std::int64_t union_area = 0;
};

// Counts unit cells covered by both / either box.
inline PixelAreas CountPixels(const PixelBox& a, const PixelBox& b) {
  PixelAreas out;
  const int x0 = std::min(a.x, b.x), x1 = std::max(a.x + a.w, b.x + b.w);
  const int y0 = std::min(a.y, b.y), y1 = std::max(a.y + a.h, b.y + b.h);
  for (int py = y0; py < y1; ++py) {
    for (int px = x0; px < x1; ++px) {
      const bool in_a = a.Covers(px, py);
      const bool in_b = b.Covers(px, py);
      out.intersection += (in_a && in_b) ? 1 : 0;
      out.union_area += (in_a || in_b) ? 1 : 0;
    }
  }
  return out;
}

// Maximum of sum(sim[r][pi(r)]) over all injections of the smaller side into
// the larger, accumulated in row order.
inline double BruteForceMaxAssignment(const std::vector<double>& values,
                                      std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  if (rows <= cols) {
    std::vector<std::size_t> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    // Every injection appears as the prefix of some permutation.
    do {
      double total = 0.0;
      for (std::size_t r = 0; r < rows; ++r) total += values[r * cols + perm[r]];
      best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // perm[c] is the row matched to column c; sum in row order.
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t c = 0; c < cols; ++c) pairs.emplace_back(perm[c], c);
      std::sort(pairs.begin(), pairs.end());
      double total = 0.0;
      for (const auto& [r, c] : pairs) total += values[r * cols + c];
      best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

// Exhaustive lexicographically smallest optimal matching: the row -> column
// vector (cols for unmatched rows) is minimized among maximum-total matchings
// of size min(rows, cols). Exact for dyadic values.
inline std::vector<std::size_t> BruteForceLexAssignment(
    const std::vector<double>& values, std::size_t rows, std::size_t cols) {
  const std::size_t n = std::max(rows, cols);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_vec;
  do {
    // perm[r] is the column of padded row r; padded columns mean unmatched.
    double total = 0.0;
    std::vector<std::size_t> vec(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (perm[r] < cols) {
        total += values[r * cols + perm[r]];
        vec[r] = perm[r];
      }
    }
    if (total > best || (total == best && vec < best_vec)) {
      best = total;
      best_vec = vec;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best_vec;
}

// Exhaustive best one-to-one id mapping total for an overlap-count matrix.
inline std::int64_t BruteForceBestMapping(
    const std::vector<std::vector<std::int64_t>>& counts) {
  const std::size_t ng = counts.size();
  const std::size_t np = ng == 0 ? 0 : counts[0].size();
  std::int64_t best = 0;
  std::vector<bool> used(np, false);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t g,
                                                           std::int64_t acc) {
    if (g == ng) {
      best = std::max(best, acc);
      return;
    }
    rec(g + 1, acc);  // leave g unmapped
    for (std::size_t p = 0; p < np; ++p) {
      if (used[p]) continue;
      used[p] = true;
      rec(g + 1, acc + counts[g][p]);
      used[p] = false;
    }
  };
  rec(0, 0);
  return best;
}

// Plain arithmetic mean of consecutive differences.
inline double MeanOfDeltas(const std::vector<double>& xs) {
  double sum = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) sum += xs[i] - xs[i - 1];
  return sum / static_cast<double>(xs.size() - 1);
}

}  // namespace cbiou::testing

#endif  // CBIOU_TESTS_ORACLES_H_
