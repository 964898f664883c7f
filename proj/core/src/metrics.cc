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

#include "cbiou/metrics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "cbiou/assignment.h"
#include "cbiou/errors.h"
#include "cbiou/similarity.h"

namespace cbiou {
namespace {

const std::vector<Annotation> kEmptyFrame;

std::vector<int> FrameUnion(const SequenceAnnotations& a,
                            const SequenceAnnotations& b) {
  std::set<int> frames;
  for (const auto& [f, _] : a.frames()) frames.insert(f);
  for (const auto& [f, _] : b.frames()) frames.insert(f);
  return {frames.begin(), frames.end()};
}

// IoU between every GT box (rows) and every predicted box (cols) of a frame.
std::vector<double> IouGrid(const std::vector<Annotation>& gts,
                            const std::vector<Annotation>& preds) {
  std::vector<double> grid(gts.size() * preds.size());
  for (std::size_t i = 0; i < gts.size(); ++i) {
    for (std::size_t j = 0; j < preds.size(); ++j) {
      grid[i * preds.size() + j] = Iou(gts[i].box, preds[j].box);
    }
  }
  return grid;
}

// Maximum-IoU matching restricted to pairs with IoU >= threshold. Entries
// under the threshold are zeroed before solving so they cannot displace a
// passing pair.
std::vector<IndexPair> ThresholdedMatch(std::size_t rows, std::size_t cols,
                                        const std::vector<double>& grid,
                                        double threshold) {
  if (rows == 0 || cols == 0) return {};
  std::vector<double> masked(grid.size());
  bool any = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    masked[k] = grid[k] >= threshold ? grid[k] : 0.0;
    any = any || masked[k] > 0.0;
  }
  if (!any) return {};
  const SimilarityMatrix sim(rows, cols, std::move(masked));
  std::vector<IndexPair> kept;
  for (const auto& [r, c] : SolveAssignment(sim)) {
    if (sim(r, c) > 0.0 && sim(r, c) >= threshold) kept.emplace_back(r, c);
  }
  return kept;
}

double SafeRatio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::uint64_t PairKey(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

void FinalizeHota(HotaResult& result) {
  double hota = 0.0, deta = 0.0, assa = 0.0;
  for (AlphaScores& s : result.per_alpha) {
    s.deta = SafeRatio(static_cast<double>(s.tp),
                       static_cast<double>(s.tp + s.fn + s.fp));
    s.assa = SafeRatio(s.assa_sum, static_cast<double>(s.tp));
    s.hota = std::sqrt(s.deta * s.assa);
    hota += s.hota;
    deta += s.deta;
    assa += s.assa;
  }
  result.hota = hota / kNumAlphas;
  result.deta = deta / kNumAlphas;
  result.assa = assa / kNumAlphas;
}

void FinalizeClear(ClearResult& r) {
  r.mota = 1.0 - SafeRatio(static_cast<double>(r.fn + r.fp + r.idsw),
                           static_cast<double>(r.gt_total));
  if (r.gt_total == 0) r.mota = 0.0;
}

void FinalizeIdentity(IdentityResult& r) {
  r.idf1 = SafeRatio(2.0 * static_cast<double>(r.idtp),
                     static_cast<double>(2 * r.idtp + r.idfp + r.idfn));
}

}  // namespace

void SequenceAnnotations::Add(int frame, int id, const BoundingBox& box) {
  std::vector<Annotation>& boxes = frames_[frame];
  for (const Annotation& a : boxes) {
    if (a.id == id) {
      throw DataError("identity " + std::to_string(id) +
                      " appears twice in frame " + std::to_string(frame));
    }
  }
  boxes.push_back({id, box});
}

const std::vector<Annotation>& SequenceAnnotations::at(int frame) const {
  const auto it = frames_.find(frame);
  return it == frames_.end() ? kEmptyFrame : it->second;
}

std::size_t SequenceAnnotations::box_count() const {
  std::size_t n = 0;
  for (const auto& [_, boxes] : frames_) n += boxes.size();
  return n;
}

double HotaAlpha(int k) { return static_cast<double>(k + 1) / 20.0; }

ClearResult ClearMota(const SequenceAnnotations& gt,
                      const SequenceAnnotations& pred, double iou_threshold) {
  ClearResult result;
  std::unordered_map<int, int> previous;   // gt id -> pred id, last frame
  std::unordered_map<int, int> last_seen;  // gt id -> pred id, ever
  for (int frame : FrameUnion(gt, pred)) {
    const std::vector<Annotation>& gts = gt.at(frame);
    const std::vector<Annotation>& preds = pred.at(frame);
    const std::vector<double> grid = IouGrid(gts, preds);
    std::vector<bool> gt_used(gts.size(), false);
    std::vector<bool> pred_used(preds.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matches;

    // Carry forward correspondences that still overlap enough.
    for (std::size_t i = 0; i < gts.size(); ++i) {
      const auto prev = previous.find(gts[i].id);
      if (prev == previous.end()) continue;
      for (std::size_t j = 0; j < preds.size(); ++j) {
        if (pred_used[j] || preds[j].id != prev->second) continue;
        if (grid[i * preds.size() + j] >= iou_threshold) {
          gt_used[i] = pred_used[j] = true;
          matches.emplace_back(i, j);
        }
        break;
      }
    }

    std::vector<std::size_t> rest_gt, rest_pred;
    for (std::size_t i = 0; i < gts.size(); ++i) {
      if (!gt_used[i]) rest_gt.push_back(i);
    }
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (!pred_used[j]) rest_pred.push_back(j);
    }
    std::vector<double> sub(rest_gt.size() * rest_pred.size());
    for (std::size_t a = 0; a < rest_gt.size(); ++a) {
      for (std::size_t b = 0; b < rest_pred.size(); ++b) {
        sub[a * rest_pred.size() + b] =
            grid[rest_gt[a] * preds.size() + rest_pred[b]];
      }
    }
    for (const auto& [a, b] :
         ThresholdedMatch(rest_gt.size(), rest_pred.size(), sub,
                          iou_threshold)) {
      matches.emplace_back(rest_gt[a], rest_pred[b]);
    }

    previous.clear();
    for (const auto& [i, j] : matches) {
      const int gid = gts[i].id;
      const int pid = preds[j].id;
      const auto seen = last_seen.find(gid);
      if (seen != last_seen.end() && seen->second != pid) ++result.idsw;
      last_seen[gid] = pid;
      previous[gid] = pid;
    }
    const auto n = static_cast<std::int64_t>(matches.size());
    result.tp += n;
    result.fn += static_cast<std::int64_t>(gts.size()) - n;
    result.fp += static_cast<std::int64_t>(preds.size()) - n;
    result.gt_total += static_cast<std::int64_t>(gts.size());
  }
  FinalizeClear(result);
  return result;
}

IdentityResult Idf1(const SequenceAnnotations& gt,
                    const SequenceAnnotations& pred, double iou_threshold) {
  std::map<int, std::size_t> gt_index, pred_index;
  for (const auto& [_, boxes] : gt.frames()) {
    for (const Annotation& a : boxes) gt_index.emplace(a.id, gt_index.size());
  }
  for (const auto& [_, boxes] : pred.frames()) {
    for (const Annotation& a : boxes) {
      pred_index.emplace(a.id, pred_index.size());
    }
  }
  const std::size_t ng = gt_index.size();
  const std::size_t np = pred_index.size();
  std::vector<std::int64_t> overlap(ng * np, 0);
  for (int frame : FrameUnion(gt, pred)) {
    for (const Annotation& g : gt.at(frame)) {
      for (const Annotation& p : pred.at(frame)) {
        if (Iou(g.box, p.box) >= iou_threshold) {
          ++overlap[gt_index[g.id] * np + pred_index[p.id]];
        }
      }
    }
  }

  IdentityResult result;
  const std::int64_t max_count =
      overlap.empty() ? 0 : *std::max_element(overlap.begin(), overlap.end());
  if (max_count > 0) {
    std::vector<double> scaled(overlap.size());
    for (std::size_t k = 0; k < overlap.size(); ++k) {
      scaled[k] = static_cast<double>(overlap[k]) /
                  static_cast<double>(max_count);
    }
    for (const auto& [r, c] :
         SolveAssignment(SimilarityMatrix(ng, np, std::move(scaled)))) {
      result.idtp += overlap[r * np + c];
    }
  }
  result.idfn = static_cast<std::int64_t>(gt.box_count()) - result.idtp;
  result.idfp = static_cast<std::int64_t>(pred.box_count()) - result.idtp;
  FinalizeIdentity(result);
  return result;
}

HotaResult Hota(const SequenceAnnotations& gt,
                const SequenceAnnotations& pred) {
  struct FrameData {
    const std::vector<Annotation>* gts;
    const std::vector<Annotation>* preds;
    std::vector<double> grid;
  };
  std::vector<FrameData> frames;
  std::unordered_map<int, std::int64_t> gt_count, pred_count;
  for (int frame : FrameUnion(gt, pred)) {
    FrameData fd{&gt.at(frame), &pred.at(frame), {}};
    fd.grid = IouGrid(*fd.gts, *fd.preds);
    for (const Annotation& a : *fd.gts) ++gt_count[a.id];
    for (const Annotation& a : *fd.preds) ++pred_count[a.id];
    frames.push_back(std::move(fd));
  }
  const auto gt_total = static_cast<std::int64_t>(gt.box_count());
  const auto pred_total = static_cast<std::int64_t>(pred.box_count());

  HotaResult result;
  for (int k = 0; k < kNumAlphas; ++k) {
    AlphaScores& s = result.per_alpha[k];
    s.alpha = HotaAlpha(k);
    std::vector<std::pair<int, int>> tps;
    for (const FrameData& fd : frames) {
      for (const auto& [i, j] : ThresholdedMatch(
               fd.gts->size(), fd.preds->size(), fd.grid, s.alpha)) {
        tps.emplace_back((*fd.gts)[i].id, (*fd.preds)[j].id);
      }
    }
    std::unordered_map<std::uint64_t, std::int64_t> pair_count;
    for (const auto& [g, p] : tps) ++pair_count[PairKey(g, p)];
    for (const auto& [g, p] : tps) {
      const double tpa = static_cast<double>(pair_count[PairKey(g, p)]);
      const double fna = static_cast<double>(gt_count[g]) - tpa;
      const double fpa = static_cast<double>(pred_count[p]) - tpa;
      s.assa_sum += tpa / (tpa + fna + fpa);
    }
    s.tp = static_cast<std::int64_t>(tps.size());
    s.fn = gt_total - s.tp;
    s.fp = pred_total - s.tp;
  }
  FinalizeHota(result);
  return result;
}

MetricsReport Evaluate(const SequenceAnnotations& gt,
                       const SequenceAnnotations& pred) {
  return {Hota(gt, pred), ClearMota(gt, pred), Idf1(gt, pred)};
}

MetricsReport CombineReports(const std::vector<MetricsReport>& reports) {
  MetricsReport pooled;
  for (int k = 0; k < kNumAlphas; ++k) {
    pooled.hota.per_alpha[k].alpha = HotaAlpha(k);
  }
  for (const MetricsReport& r : reports) {
    for (int k = 0; k < kNumAlphas; ++k) {
      AlphaScores& dst = pooled.hota.per_alpha[k];
      const AlphaScores& src = r.hota.per_alpha[k];
      dst.tp += src.tp;
      dst.fn += src.fn;
      dst.fp += src.fp;
      dst.assa_sum += src.assa_sum;
    }
    pooled.clear.tp += r.clear.tp;
    pooled.clear.fn += r.clear.fn;
    pooled.clear.fp += r.clear.fp;
    pooled.clear.idsw += r.clear.idsw;
    pooled.clear.gt_total += r.clear.gt_total;
    pooled.identity.idtp += r.identity.idtp;
    pooled.identity.idfn += r.identity.idfn;
    pooled.identity.idfp += r.identity.idfp;
  }
  FinalizeHota(pooled.hota);
  FinalizeClear(pooled.clear);
  FinalizeIdentity(pooled.identity);
  return pooled;
}

}  // namespace cbiou
