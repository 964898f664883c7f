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

#include "cbiou/motion.h"

#include <string>

#include "cbiou/errors.h"

namespace cbiou {

MotionHistory::MotionHistory(std::size_t window) : window_(window) {
  if (window < 1) throw ArgumentError("motion window must be at least 1");
}

void MotionHistory::Push(int frame, const CornerBox& box) {
  if (!entries_.empty() && frame <= entries_.back().frame) {
    throw SequencingError("motion history frame " + std::to_string(frame) +
                          " is not after " +
                          std::to_string(entries_.back().frame));
  }
  entries_.push_back({frame, box});
  while (entries_.size() > capacity()) entries_.pop_front();
}

Velocity AverageVelocity(const MotionHistory& history) {
  if (history.size() < 2) return {};
  const HistoryEntry& first = history.front();
  const HistoryEntry& last = history.back();
  const double span = static_cast<double>(last.frame - first.frame);
  return {(last.box.x1() - first.box.x1()) / span,
          (last.box.y1() - first.box.y1()) / span,
          (last.box.x2() - first.box.x2()) / span,
          (last.box.y2() - first.box.y2()) / span};
}

Prediction Predict(const CornerBox& state, const Velocity& velocity,
                   int frames) {
  if (frames < 1) {
    throw ArgumentError("prediction horizon must be >= 1 frame, got " +
                        std::to_string(frames));
  }
  const double t = static_cast<double>(frames);
  double x1 = state.x1() + t * velocity.dx1;
  double y1 = state.y1() + t * velocity.dy1;
  double x2 = state.x2() + t * velocity.dx2;
  double y2 = state.y2() + t * velocity.dy2;
  bool degenerate = false;
  if (!(x2 > x1)) {
    const double cx = (x1 + x2) / 2.0;
    x1 = cx - 0.5;
    x2 = cx + 0.5;
    degenerate = true;
  }
  if (!(y2 > y1)) {
    const double cy = (y1 + y2) / 2.0;
    y1 = cy - 0.5;
    y2 = cy + 0.5;
    degenerate = true;
  }
  return {CornerBox(x1, y1, x2, y2), degenerate};
}

}  // namespace cbiou
