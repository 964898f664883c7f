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

#include "cbiou/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cbiou/errors.h"

namespace cbiou {
namespace {

// Reduced costs within this distance of zero are treated as tight.
constexpr double kTightTolerance = 1e-10;

void CheckValue(double value) {
  if (!std::isfinite(value)) {
    throw ArgumentError("similarity value is not finite");
  }
  if (value < -1.0 || value > 1.0) {
    throw ArgumentError("similarity value " + std::to_string(value) +
                        " outside [-1, 1]");
  }
}

// Rectangular minimum-cost assignment (rows <= cols) with dual potentials.
// Classic O(n^2 m) shortest-augmenting-path formulation, 1-based sentinels.
// Potentials satisfy cost - u - v >= 0, equality on matched pairs, v <= 0,
// and v == 0 on unmatched columns.
struct Potentials {
  std::vector<double> row;            // 0-based, size rows
  std::vector<double> col;            // 0-based, size cols
  std::vector<std::size_t> row_to_col;
};

template <typename CostFn>
Potentials SolveRectangular(std::size_t n, std::size_t m, CostFn cost) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  std::vector<double> min_slack(m + 1);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Potentials out;
  out.row.assign(u.begin() + 1, u.end());
  out.col.assign(v.begin() + 1, v.end());
  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) out.row_to_col[owner[j] - 1] = j - 1;
  }
  return out;
}

// Optimal face of the assignment problem padded to square with unit-cost
// dummies. Identical dummies collapse into one pad node (an extra column when
// rows > cols, an extra row when cols > rows) of capacity |rows - cols|.
// Every perfect matching on tight edges is optimal; Refine() moves to the
// lexicographically smallest one by rotating along alternating cycles.
class OptimalFace {
 public:
  explicit OptimalFace(const SimilarityMatrix& sim)
      : sim_(sim),
        rows_(sim.rows()),
        cols_(sim.cols()),
        pad_row_(rows_),
        pad_col_(cols_),
        u_(rows_ + 1, 0.0),
        v_(cols_ + 1, 0.0),
        row_match_(rows_, pad_col_),
        col_holder_(cols_, pad_row_) {
    if (rows_ <= cols_) {
      const Potentials p = SolveRectangular(
          rows_, cols_,
          [&](std::size_t r, std::size_t c) { return 1.0 - sim_(r, c); });
      std::copy(p.row.begin(), p.row.end(), u_.begin());
      std::copy(p.col.begin(), p.col.end(), v_.begin());
      u_[pad_row_] = 1.0;
      for (std::size_t r = 0; r < rows_; ++r) Assign(r, p.row_to_col[r]);
    } else {
      const Potentials p = SolveRectangular(
          cols_, rows_,
          [&](std::size_t c, std::size_t r) { return 1.0 - sim_(r, c); });
      std::copy(p.row.begin(), p.row.end(), v_.begin());
      std::copy(p.col.begin(), p.col.end(), u_.begin());
      v_[pad_col_] = 1.0;
      for (std::size_t c = 0; c < cols_; ++c) Assign(p.row_to_col[c], c);
    }
  }

  void Refine() {
    fixed_.assign(rows_ + 1, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::size_t lowest = pad_col_ + 1;
      for (std::size_t c = 0; c <= pad_col_; ++c) {
        if (c == row_match_[r]) break;
        if (Tight(r, c)) {
          lowest = c;
          break;
        }
      }
      if (lowest <= pad_col_) Improve(r);
      fixed_[r] = 1;
    }
  }

  std::vector<IndexPair> Pairs() const {
    std::vector<IndexPair> pairs;
    pairs.reserve(std::min(rows_, cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (row_match_[r] < cols_) pairs.emplace_back(r, row_match_[r]);
    }
    return pairs;
  }

 private:
  // Residual-graph nodes: rows 0..rows_ (rows_ is the pad row), then columns
  // offset by rows_ + 1 (cols_ is the pad column).
  std::size_t ColNode(std::size_t c) const { return rows_ + 1 + c; }

  bool HasPadRow() const { return cols_ > rows_; }
  bool HasPadCol() const { return rows_ > cols_; }

  double Cost(std::size_t r, std::size_t c) const {
    if (r == pad_row_ || c == pad_col_) return 1.0;
    return 1.0 - sim_(r, c);
  }

  bool Tight(std::size_t r, std::size_t c) const {
    if (r == pad_row_ && !HasPadRow()) return false;
    if (c == pad_col_ && !HasPadCol()) return false;
    return Cost(r, c) - u_[r] - v_[c] <= kTightTolerance;
  }

  void Assign(std::size_t r, std::size_t c) {
    if (r != pad_row_) row_match_[r] = c;
    if (c != pad_col_) col_holder_[c] = r;
  }

  bool Holds(std::size_t r, std::size_t c) const {
    if (r == pad_row_) return c != pad_col_ && col_holder_[c] == pad_row_;
    return row_match_[r] == c;
  }

  // Moves row r to its lowest tight column that lies on an alternating cycle
  // avoiding fixed rows. One reverse search finds every such column.
  void Improve(std::size_t r) {
    const std::size_t nodes = rows_ + 1 + cols_ + 1;
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> next(nodes, kNone);  // successor toward r
    std::vector<std::size_t> queue = {r};
    next[r] = r;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      if (node <= rows_) {
        // Predecessors of a row: the column(s) it holds.
        for (std::size_t c = 0; c <= pad_col_; ++c) {
          if (!Holds(node, c) || next[ColNode(c)] != kNone) continue;
          next[ColNode(c)] = node;
          queue.push_back(ColNode(c));
          if (node != pad_row_) break;
        }
      } else {
        // Predecessors of a column: free rows tight to it that do not hold it.
        const std::size_t c = node - rows_ - 1;
        for (std::size_t x = 0; x <= pad_row_; ++x) {
          if (next[x] != kNone || (x < rows_ && fixed_[x])) continue;
          if (!Tight(x, c) || Holds(x, c)) continue;
          next[x] = node;
          queue.push_back(x);
        }
      }
    }
    for (std::size_t c = 0; c <= pad_col_; ++c) {
      if (c == row_match_[r]) return;
      if (!Tight(r, c) || next[ColNode(c)] == kNone) continue;
      // Rotate along r -> c -> ... -> r.
      std::size_t col = c;
      std::size_t row = r;
      while (true) {
        const std::size_t holder = next[ColNode(col)];
        if (row != pad_row_) row_match_[row] = col;
        if (col != pad_col_) col_holder_[col] = row;
        if (holder == r) break;
        row = holder;
        col = next[row] - rows_ - 1;
      }
      return;
    }
  }

  const SimilarityMatrix& sim_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t pad_row_;
  std::size_t pad_col_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<std::size_t> row_match_;
  std::vector<std::size_t> col_holder_;
  std::vector<char> fixed_;
};

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ArgumentError("similarity matrix expects " +
                        std::to_string(rows * cols) + " values, got " +
                        std::to_string(values_.size()));
  }
  for (double v : values_) CheckValue(v);
}

void SimilarityMatrix::Set(std::size_t r, std::size_t c, double value) {
  CheckValue(value);
  values_[r * cols_ + c] = value;
}

std::vector<IndexPair> SolveAssignment(const SimilarityMatrix& sim) {
  if (sim.empty()) return {};
  for (double v : sim.values()) CheckValue(v);

  OptimalFace face(sim);
  face.Refine();
  return face.Pairs();
}

MatchResult GatedMatch(const SimilarityMatrix& sim, double min_sim) {
  if (!std::isfinite(min_sim)) {
    throw ArgumentError("min_sim must be finite");
  }
  MatchResult result;
  std::vector<bool> row_used(sim.rows(), false);
  std::vector<bool> col_used(sim.cols(), false);
  for (const auto& [r, c] : SolveAssignment(sim)) {
    if (sim(r, c) < min_sim) continue;
    result.pairs.emplace_back(r, c);
    row_used[r] = true;
    col_used[c] = true;
  }
  for (std::size_t r = 0; r < sim.rows(); ++r) {
    if (!row_used[r]) result.unmatched_rows.push_back(r);
  }
  for (std::size_t c = 0; c < sim.cols(); ++c) {
    if (!col_used[c]) result.unmatched_cols.push_back(c);
  }
  return result;
}

double TotalSimilarity(const SimilarityMatrix& sim,
                       const std::vector<IndexPair>& pairs) {
  double total = 0.0;
  for (const auto& [r, c] : pairs) total += sim(r, c);
  return total;
}

}  // namespace cbiou
