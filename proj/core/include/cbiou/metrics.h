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

#ifndef CBIOU_METRICS_H_
#define CBIOU_METRICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "cbiou/box.h"

namespace cbiou {

struct Annotation {
  int id;
  BoundingBox box;
};

// Labeled boxes per frame: ground truth or tracker output.
class SequenceAnnotations {
 public:
  // Throws DataError if `id` already appears in `frame`.
  void Add(int frame, int id, const BoundingBox& box);
  // Registers a frame with no boxes (keeps it in the frame range).
  void AddFrame(int frame) { frames_[frame]; }

  const std::map<int, std::vector<Annotation>>& frames() const {
    return frames_;
  }
  const std::vector<Annotation>& at(int frame) const;
  std::size_t box_count() const;
  bool empty() const { return box_count() == 0; }

 private:
  std::map<int, std::vector<Annotation>> frames_;
};

constexpr int kNumAlphas = 19;

// alpha_k = (k + 1) / 20 for k in [0, 19): 0.05, 0.10, ..., 0.95.
double HotaAlpha(int k);

struct AlphaScores {
  double alpha = 0.0;
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  // Raw accumulators, kept so several sequences can be pooled.
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  // Sum over true positives of their association score.
  double assa_sum = 0.0;
};

struct HotaResult {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  std::array<AlphaScores, kNumAlphas> per_alpha{};
};

struct ClearResult {
  double mota = 0.0;
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t idsw = 0;
  std::int64_t gt_total = 0;
};

struct IdentityResult {
  double idf1 = 0.0;
  std::int64_t idtp = 0;
  std::int64_t idfn = 0;
  std::int64_t idfp = 0;
};

struct MetricsReport {
  HotaResult hota;
  ClearResult clear;
  IdentityResult identity;
};

// CLEAR-MOT. Each frame keeps last frame's GT->prediction correspondences
// that still reach `iou_threshold`, then matches the rest by maximum IoU.
// MOTA = 1 - (FN + FP + IDSW) / GT and is not clamped.
ClearResult ClearMota(const SequenceAnnotations& gt,
                      const SequenceAnnotations& pred,
                      double iou_threshold = 0.5);

// Identity F1 under the single GT-id -> predicted-id mapping that maximizes
// the number of frames in which the mapped pair overlaps by
// IoU >= `iou_threshold`.
IdentityResult Idf1(const SequenceAnnotations& gt,
                    const SequenceAnnotations& pred,
                    double iou_threshold = 0.5);

// HOTA, DetA and AssA averaged over the 19 localization thresholds.
// HOTA_alpha = sqrt(DetA_alpha * AssA_alpha) for every alpha.
HotaResult Hota(const SequenceAnnotations& gt, const SequenceAnnotations& pred);

MetricsReport Evaluate(const SequenceAnnotations& gt,
                       const SequenceAnnotations& pred);

// Pools several per-sequence reports by summing raw counts, then recomputes
// every ratio from the pooled counts.
MetricsReport CombineReports(const std::vector<MetricsReport>& reports);

}  // namespace cbiou

#endif  // CBIOU_METRICS_H_
