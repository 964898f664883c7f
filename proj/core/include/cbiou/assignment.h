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

#ifndef CBIOU_ASSIGNMENT_H_
#define CBIOU_ASSIGNMENT_H_

#include <cstddef>
#include <utility>
#include <vector>

namespace cbiou {

// Dense rows x cols grid of similarities in [-1, 1], row-major. Rows are
// tracks (or ground-truth objects), columns are detections (or predictions).
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // Zero-filled.
  SimilarityMatrix(std::size_t rows, std::size_t cols);
  // Throws ArgumentError if values.size() != rows * cols or any value is
  // non-finite or outside [-1, 1].
  SimilarityMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  // Throws ArgumentError on a non-finite or out-of-range value.
  void Set(std::size_t r, std::size_t c, double value);

  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

struct MatchResult {
  std::vector<IndexPair> pairs;  // sorted by row
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
};

// Maximum-total-similarity matching of size min(rows, cols) (Hungarian method
// on 1 - similarity). Among optimal matchings the lexicographically smallest
// one is returned: row 0 takes the lowest column it can while staying
// optimal, then row 1, and so on; when rows outnumber columns, lower rows are
// matched in preference to higher ones. Pairs come back sorted by row.
std::vector<IndexPair> SolveAssignment(const SimilarityMatrix& sim);

// SolveAssignment followed by dropping every pair whose similarity is below
// `min_sim`; their row and column move to the unmatched lists.
// Throws ArgumentError if `min_sim` is not finite.
MatchResult GatedMatch(const SimilarityMatrix& sim, double min_sim);

// Sum of sim(r, c) over `pairs`, accumulated in the given order.
double TotalSimilarity(const SimilarityMatrix& sim,
                       const std::vector<IndexPair>& pairs);

}  // namespace cbiou

#endif  // CBIOU_ASSIGNMENT_H_
