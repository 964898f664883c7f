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

#ifndef CBIOU_SYNTH_H_
#define CBIOU_SYNTH_H_

#include <cstdint>
#include <optional>
#include <utility>

#include "cbiou/metrics.h"
#include "cbiou/tracker.h"

namespace cbiou {

struct Range {
  double min;
  double max;
};

struct OcclusionSpec {
  // Per-object, per-frame probability that a detection-suppression burst
  // starts.
  double probability = 0.0;
  // Burst length in frames, inclusive bounds.
  int min_frames = 1;
  int max_frames = 1;
};

// Piecewise-linear motion scenario. Every object is visible in every frame;
// occlusion only removes detections.
struct ScenarioSpec {
  int num_objects = 10;
  int num_frames = 100;
  double arena_width = 1920.0;
  double arena_height = 1080.0;
  // Pixels per frame.
  Range speed{2.0, 10.0};
  // Per-frame probability of drawing a new heading and speed.
  double turn_prob = 0.0;
  // Box width and height are drawn independently from this range.
  Range size{30.0, 80.0};
  std::optional<OcclusionSpec> occlusion;
  std::uint64_t seed = 0;

  // Throws ArgumentError for empty or non-positive ranges, probabilities
  // outside [0, 1], or boxes that cannot fit the arena.
  void Validate() const;
};

struct Scenario {
  SequenceAnnotations ground_truth;
  // Ground-truth boxes with confidence 1, minus occluded frames.
  DetectionSequence detections;
};

// Deterministic for a given spec (including seed).
Scenario Generate(const ScenarioSpec& spec);

// Oracle detections straight from ground truth, confidence 1.
DetectionSequence DetectionsFromGroundTruth(const SequenceAnnotations& gt);

struct NoiseSpec {
  // Fraction of detections replaced, in [0, 1).
  double ratio = 0.0;
  std::uint64_t seed = 0;
  // Draw the removed detections frame by frame instead of uniformly over the
  // whole sequence.
  bool stratified = false;
};

// Removes round(ratio * N) detections chosen uniformly without replacement,
// then adds as many false positives. Each false positive goes to the frame of
// one removed detection, takes the size of a randomly drawn ground-truth box,
// and is placed by rejection sampling inside the ground-truth extent until
// its IoU with every ground-truth box of that frame is below 0.2.
// Throws ArgumentError for a ratio outside [0, 1) and GenerationError, naming
// the frame, after 1000 failed placements.
DetectionSequence Perturb(const DetectionSequence& detections,
                          const NoiseSpec& noise,
                          const SequenceAnnotations& gt);

// IoU ceiling between an injected false positive and any ground-truth box.
inline constexpr double kFalsePositiveMaxIou = 0.2;
inline constexpr int kFalsePositiveMaxAttempts = 1000;

}  // namespace cbiou

#endif  // CBIOU_SYNTH_H_
