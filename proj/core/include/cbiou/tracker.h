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

#ifndef CBIOU_TRACKER_H_
#define CBIOU_TRACKER_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbiou/box.h"
#include "cbiou/motion.h"
#include "cbiou/similarity.h"

namespace cbiou {

struct TrackerConfig {
  // Buffer scale of the first matching round.
  double b1 = 0.3;
  // Buffer scale of the second round; only read when `cascade` is set.
  double b2 = 0.4;
  // A track unmatched for more than this many consecutive frames is dropped.
  int max_age = 30;
  // Upper bound on the number of frame-to-frame deltas averaged for motion.
  int n_max = 5;
  // Assigned pairs with similarity below this are rejected.
  double min_sim = 1e-9;
  // Detections below this confidence are discarded before matching.
  double det_conf_min = 0.1;
  SimilarityKind similarity = SimilarityKind::kBiou;
  bool cascade = true;
  bool motion = true;

  // Throws ArgumentError describing the first violated constraint.
  void Validate() const;

  friend bool operator==(const TrackerConfig&, const TrackerConfig&) = default;
};

struct Detection {
  int frame;
  BoundingBox box;
  double confidence;
};

// frame -> detections of that frame.
using DetectionSequence = std::map<int, std::vector<Detection>>;

struct Track {
  int id;
  // Current estimate: the last matched box, or its extrapolation while
  // coasting.
  CornerBox state;
  // Frames since the last match.
  int age;
  // Matched detections only; coasting never writes here.
  MotionHistory history;
  double last_confidence;
  bool degenerate = false;
};

struct TrackRecord {
  int track_id;
  BoundingBox box;
  double confidence;
};

struct FrameOutput {
  int frame;
  // Sorted by track id.
  std::vector<TrackRecord> records;
};

struct CascadeMatchResult {
  struct Pair {
    std::size_t track;
    std::size_t detection;
    int round;  // 1 or 2
  };
  std::vector<Pair> matches;
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_detections;
};

// Two-round association. Round 1 matches every track state against every
// detection with the configured similarity (BIoU at buffer b1). When
// `config.cascade` is set, round 2 re-matches the round-1 leftovers with
// buffer b2. Both rounds gate at `config.min_sim`.
CascadeMatchResult CascadeMatch(std::span<const BoundingBox> track_states,
                                std::span<const BoundingBox> detections,
                                const TrackerConfig& config);

// Online tracker over one sequence. Not thread-safe; run one instance per
// sequence.
class Tracker {
 public:
  // Throws ArgumentError on an invalid config.
  explicit Tracker(TrackerConfig config);

  // Processes one frame and returns the tracks matched in it (including the
  // tracks it just created), each reported at its detection box.
  // Throws SequencingError if `frame` does not increase, ArgumentError if a
  // detection is tagged with another frame or has a non-finite confidence.
  FrameOutput Step(int frame, std::span<const Detection> detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  std::optional<int> last_frame() const { return last_frame_; }
  // Number of tracks created so far.
  int tracks_created() const { return next_id_ - 1; }

 private:
  // Extrapolated state of `track` at `frame`.
  Prediction PredictState(const Track& track, int frame) const;

  TrackerConfig config_;
  std::vector<Track> tracks_;
  std::optional<int> last_frame_;
  int next_id_ = 1;
};

// Steps a fresh tracker over every frame from the first to the last key of
// `detections`; frames without an entry are processed as empty.
std::vector<FrameOutput> RunSequence(const TrackerConfig& config,
                                     const DetectionSequence& detections);

// Optional post-processing: for each track id, fills gaps of at most
// `max_gap` frames between two reported boxes by linear interpolation of the
// corners. Interpolated records carry the confidence of the earlier record.
std::vector<FrameOutput> InterpolateGaps(const std::vector<FrameOutput>& outputs,
                                         int max_gap);

}  // namespace cbiou

#endif  // CBIOU_TRACKER_H_
