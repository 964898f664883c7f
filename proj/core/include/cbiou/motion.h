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

#ifndef CBIOU_MOTION_H_
#define CBIOU_MOTION_H_

#include <cstddef>
#include <deque>

#include "cbiou/box.h"

namespace cbiou {

// Per-frame displacement of the four corner coordinates, pixels/frame.
struct Velocity {
  double dx1 = 0.0;
  double dy1 = 0.0;
  double dx2 = 0.0;
  double dy2 = 0.0;

  bool IsZero() const {
    return dx1 == 0.0 && dy1 == 0.0 && dx2 == 0.0 && dy2 == 0.0;
  }
  friend bool operator==(const Velocity&, const Velocity&) = default;
};

struct HistoryEntry {
  int frame;
  CornerBox box;
};

// The most recent matched detections of one track, oldest first. Holds at
// most window + 1 entries, i.e. enough for `window` frame-to-frame deltas.
class MotionHistory {
 public:
  // Throws ArgumentError if window < 1.
  explicit MotionHistory(std::size_t window);

  // Appends a matched detection and evicts the oldest entry once the history
  // is over capacity. Throws SequencingError unless `frame` is strictly later
  // than the last entry.
  void Push(int frame, const CornerBox& box);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t window() const { return window_; }
  std::size_t capacity() const { return window_ + 1; }
  const HistoryEntry& front() const { return entries_.front(); }
  const HistoryEntry& back() const { return entries_.back(); }
  const std::deque<HistoryEntry>& entries() const { return entries_; }

 private:
  std::size_t window_;
  std::deque<HistoryEntry> entries_;
};

// Average per-frame displacement over the history: (last - first) divided by
// the frame span between them. With consecutive frames this is the mean of
// the individual deltas; gaps are normalized by their length. Fewer than two
// entries yield zero velocity.
Velocity AverageVelocity(const MotionHistory& history);

struct Prediction {
  CornerBox box;
  // True when the extrapolated box collapsed (x2 <= x1 or y2 <= y1) and had
  // to be rebuilt as a 1-pixel extent around its predicted center.
  bool degenerate = false;
};

// state + frames * velocity, componentwise. Throws ArgumentError if
// frames < 1.
Prediction Predict(const CornerBox& state, const Velocity& velocity,
                   int frames);

}  // namespace cbiou

#endif  // CBIOU_MOTION_H_
