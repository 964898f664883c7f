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

#include "cbiou/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cbiou/errors.h"
#include "cbiou/similarity.h"

namespace cbiou {
namespace {

void CheckRange(const Range& r, const char* name) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min <= 0.0 ||
      r.max < r.min) {
    throw ArgumentError(std::string(name) +
                        " range must satisfy 0 < min <= max");
  }
}

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError(std::string(name) + " must lie in [0, 1]");
  }
}

double Draw(std::mt19937_64& rng, double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// One axis of an object's motion: position = anchor + (t - anchor_t) * v.
struct Axis {
  double anchor;
  int anchor_frame;
  double velocity;
  double extent;  // box size along this axis
  double limit;   // arena size along this axis

  double At(int frame) const {
    return anchor + static_cast<double>(frame - anchor_frame) * velocity;
  }

  void Redirect(int frame, double new_velocity) {
    anchor = At(frame);
    anchor_frame = frame;
    velocity = new_velocity;
  }

  // Position at `frame`, mirrored back into [0, limit - extent].
  double Advance(int frame) {
    double pos = At(frame);
    const double hi = limit - extent;
    bool reflected = false;
    while (pos < 0.0 || pos > hi) {
      pos = pos < 0.0 ? -pos : 2.0 * hi - pos;
      velocity = -velocity;
      reflected = true;
    }
    if (reflected) {
      anchor = pos;
      anchor_frame = frame;
    }
    return pos;
  }
};

struct ObjectState {
  Axis x;
  Axis y;
  int occluded_until = 0;
};

std::pair<double, double> DrawVelocity(std::mt19937_64& rng,
                                       const Range& speed) {
  const double heading = Draw(rng, 0.0, 2.0 * std::numbers::pi);
  const double s = Draw(rng, speed.min, speed.max);
  return {s * std::cos(heading), s * std::sin(heading)};
}

struct GtBox {
  int frame;
  BoundingBox box;
};

}  // namespace

void ScenarioSpec::Validate() const {
  if (num_objects < 0) throw ArgumentError("num_objects must be >= 0");
  if (num_frames < 0) throw ArgumentError("num_frames must be >= 0");
  if (!(arena_width > 0.0) || !(arena_height > 0.0) ||
      !std::isfinite(arena_width) || !std::isfinite(arena_height)) {
    throw ArgumentError("arena dimensions must be positive");
  }
  CheckRange(speed, "speed");
  CheckRange(size, "size");
  CheckProbability(turn_prob, "turn_prob");
  if (size.max >= arena_width || size.max >= arena_height) {
    throw ArgumentError("objects of size " + std::to_string(size.max) +
                        " do not fit a " + std::to_string(arena_width) + "x" +
                        std::to_string(arena_height) + " arena");
  }
  if (occlusion) {
    CheckProbability(occlusion->probability, "occlusion probability");
    if (occlusion->min_frames < 1 ||
        occlusion->max_frames < occlusion->min_frames) {
      throw ArgumentError("occlusion duration must satisfy 1 <= min <= max");
    }
  }
}

Scenario Generate(const ScenarioSpec& spec) {
  spec.Validate();
  std::seed_seq seq{spec.seed, std::uint64_t{0x6f626a73}};
  std::mt19937_64 motion_rng(seq);
  std::mt19937_64 occlusion_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<ObjectState> objects;
  objects.reserve(static_cast<std::size_t>(spec.num_objects));
  for (int i = 0; i < spec.num_objects; ++i) {
    const double w = Draw(motion_rng, spec.size.min, spec.size.max);
    const double h = Draw(motion_rng, spec.size.min, spec.size.max);
    const double x = Draw(motion_rng, 0.0, spec.arena_width - w);
    const double y = Draw(motion_rng, 0.0, spec.arena_height - h);
    const auto [vx, vy] = DrawVelocity(motion_rng, spec.speed);
    objects.push_back({{x, 1, vx, w, spec.arena_width},
                       {y, 1, vy, h, spec.arena_height}});
  }

  Scenario out;
  for (int frame = 1; frame <= spec.num_frames; ++frame) {
    out.ground_truth.AddFrame(frame);
    std::vector<Detection>& dets = out.detections[frame];
    for (int i = 0; i < spec.num_objects; ++i) {
      ObjectState& obj = objects[static_cast<std::size_t>(i)];
      if (frame > 1 && spec.turn_prob > 0.0 &&
          std::bernoulli_distribution(spec.turn_prob)(motion_rng)) {
        const auto [vx, vy] = DrawVelocity(motion_rng, spec.speed);
        obj.x.Redirect(frame - 1, vx);
        obj.y.Redirect(frame - 1, vy);
      }
      const BoundingBox box(obj.x.Advance(frame), obj.y.Advance(frame),
                            obj.x.extent, obj.y.extent);
      out.ground_truth.Add(frame, i + 1, box);

      if (spec.occlusion && frame > obj.occluded_until &&
          std::bernoulli_distribution(spec.occlusion->probability)(
              occlusion_rng)) {
        const int length = std::uniform_int_distribution<int>(
            spec.occlusion->min_frames,
            spec.occlusion->max_frames)(occlusion_rng);
        obj.occluded_until = frame + length - 1;
      }
      if (frame > obj.occluded_until) dets.push_back({frame, box, 1.0});
    }
  }
  return out;
}

DetectionSequence DetectionsFromGroundTruth(const SequenceAnnotations& gt) {
  DetectionSequence out;
  for (const auto& [frame, boxes] : gt.frames()) {
    std::vector<Detection>& dets = out[frame];
    for (const Annotation& a : boxes) dets.push_back({frame, a.box, 1.0});
  }
  return out;
}

DetectionSequence Perturb(const DetectionSequence& detections,
                          const NoiseSpec& noise,
                          const SequenceAnnotations& gt) {
  if (!(noise.ratio >= 0.0 && noise.ratio < 1.0)) {
    throw ArgumentError("noise ratio must lie in [0, 1)");
  }
  struct Slot {
    int frame;
    std::size_t index;
  };
  std::vector<Slot> slots;
  for (const auto& [frame, dets] : detections) {
    for (std::size_t i = 0; i < dets.size(); ++i) slots.push_back({frame, i});
  }
  const auto total = static_cast<double>(slots.size());
  const auto count = static_cast<std::size_t>(std::llround(noise.ratio * total));
  if (count == 0) return detections;

  std::mt19937_64 rng(noise.seed);
  std::vector<Slot> removed;
  if (!noise.stratified) {
    std::shuffle(slots.begin(), slots.end(), rng);
    removed.assign(slots.begin(), slots.begin() + static_cast<long>(count));
  } else {
    // Largest-remainder allocation keeps the total exactly `count`.
    struct Quota {
      int frame;
      std::size_t n;
      std::size_t take;
      double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [frame, dets] : detections) {
      const double exact = noise.ratio * static_cast<double>(dets.size());
      const auto take = static_cast<std::size_t>(std::floor(exact));
      quotas.push_back({frame, dets.size(), take, exact - std::floor(exact)});
      assigned += take;
    }
    std::vector<std::size_t> order(quotas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return quotas[a].remainder > quotas[b].remainder;
                     });
    for (std::size_t i = 0; assigned < count && i < order.size(); ++i) {
      Quota& q = quotas[order[i]];
      if (q.take < q.n) {
        ++q.take;
        ++assigned;
      }
    }
    for (const Quota& q : quotas) {
      std::vector<std::size_t> idx(q.n);
      for (std::size_t i = 0; i < q.n; ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t i = 0; i < q.take; ++i) {
        removed.push_back({q.frame, idx[i]});
      }
    }
  }
  std::sort(removed.begin(), removed.end(), [](const Slot& a, const Slot& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.index < b.index;
  });

  std::vector<GtBox> gt_boxes;
  double ex1 = 0.0, ey1 = 0.0, ex2 = 0.0, ey2 = 0.0;
  for (const auto& [frame, boxes] : gt.frames()) {
    for (const Annotation& a : boxes) {
      if (gt_boxes.empty()) {
        ex1 = a.box.x();
        ey1 = a.box.y();
        ex2 = a.box.x() + a.box.w();
        ey2 = a.box.y() + a.box.h();
      }
      ex1 = std::min(ex1, a.box.x());
      ey1 = std::min(ey1, a.box.y());
      ex2 = std::max(ex2, a.box.x() + a.box.w());
      ey2 = std::max(ey2, a.box.y() + a.box.h());
      gt_boxes.push_back({frame, a.box});
    }
  }
  if (gt_boxes.empty()) {
    throw ArgumentError("false-positive injection needs ground-truth boxes");
  }

  DetectionSequence out;
  std::size_t next_removed = 0;
  for (const auto& [frame, dets] : detections) {
    std::vector<Detection>& kept = out[frame];
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (next_removed < removed.size() &&
          removed[next_removed].frame == frame &&
          removed[next_removed].index == i) {
        ++next_removed;
        continue;
      }
      kept.push_back(dets[i]);
    }
  }

  std::uniform_int_distribution<std::size_t> pick(0, gt_boxes.size() - 1);
  for (const Slot& slot : removed) {
    const std::vector<Annotation>& targets = gt.at(slot.frame);
    bool placed = false;
    for (int attempt = 0; attempt < kFalsePositiveMaxAttempts && !placed;
         ++attempt) {
      const BoundingBox& like = gt_boxes[pick(rng)].box;
      const double x = Draw(rng, ex1, std::max(ex1, ex2 - like.w()));
      const double y = Draw(rng, ey1, std::max(ey1, ey2 - like.h()));
      const BoundingBox candidate(x, y, like.w(), like.h());
      const bool clear = std::all_of(
          targets.begin(), targets.end(), [&](const Annotation& a) {
            return Iou(candidate, a.box) < kFalsePositiveMaxIou;
          });
      if (clear) {
        out[slot.frame].push_back({slot.frame, candidate, 1.0});
        placed = true;
      }
    }
    if (!placed) {
      throw GenerationError("could not place a false positive in frame " +
                            std::to_string(slot.frame) + " after " +
                            std::to_string(kFalsePositiveMaxAttempts) +
                            " attempts");
    }
  }
  return out;
}

}  // namespace cbiou
