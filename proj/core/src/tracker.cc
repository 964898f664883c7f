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

#include "cbiou/tracker.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cbiou/assignment.h"
#include "cbiou/errors.h"

namespace cbiou {
namespace {

SimilarityMatrix BuildMatrix(std::span<const BoundingBox> tracks,
                             const std::vector<std::size_t>& track_idx,
                             std::span<const BoundingBox> dets,
                             const std::vector<std::size_t>& det_idx,
                             SimilarityKind kind, double buffer) {
  SimilarityMatrix sim(track_idx.size(), det_idx.size());
  for (std::size_t r = 0; r < track_idx.size(); ++r) {
    for (std::size_t c = 0; c < det_idx.size(); ++c) {
      sim.Set(r, c,
              Similarity(kind, tracks[track_idx[r]], dets[det_idx[c]], buffer));
    }
  }
  return sim;
}

std::vector<std::size_t> Iota(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

void TrackerConfig::Validate() const {
  if (!std::isfinite(b1) || b1 < 0.0) {
    throw ArgumentError("b1 must be finite and >= 0");
  }
  if (cascade && (!std::isfinite(b2) || !(b1 < b2))) {
    throw ArgumentError("cascaded matching requires b1 < b2 (got b1=" +
                        std::to_string(b1) + ", b2=" + std::to_string(b2) +
                        ")");
  }
  if (max_age < 1) throw ArgumentError("max_age must be >= 1");
  if (n_max < 2) throw ArgumentError("n_max must be >= 2");
  if (!std::isfinite(min_sim)) throw ArgumentError("min_sim must be finite");
  if (!(det_conf_min >= 0.0 && det_conf_min <= 1.0)) {
    throw ArgumentError("det_conf_min must lie in [0, 1]");
  }
}

CascadeMatchResult CascadeMatch(std::span<const BoundingBox> track_states,
                                std::span<const BoundingBox> detections,
                                const TrackerConfig& config) {
  CascadeMatchResult result;
  const std::vector<std::size_t> all_tracks = Iota(track_states.size());
  const std::vector<std::size_t> all_dets = Iota(detections.size());

  const MatchResult first =
      GatedMatch(BuildMatrix(track_states, all_tracks, detections, all_dets,
                             config.similarity, config.b1),
                 config.min_sim);
  for (const auto& [r, c] : first.pairs) result.matches.push_back({r, c, 1});

  std::vector<std::size_t> left_tracks = first.unmatched_rows;
  std::vector<std::size_t> left_dets = first.unmatched_cols;
  if (config.cascade && !left_tracks.empty() && !left_dets.empty()) {
    const MatchResult second =
        GatedMatch(BuildMatrix(track_states, left_tracks, detections,
                               left_dets, config.similarity, config.b2),
                   config.min_sim);
    for (const auto& [r, c] : second.pairs) {
      result.matches.push_back({left_tracks[r], left_dets[c], 2});
    }
    std::vector<std::size_t> still_tracks;
    std::vector<std::size_t> still_dets;
    for (std::size_t r : second.unmatched_rows) {
      still_tracks.push_back(left_tracks[r]);
    }
    for (std::size_t c : second.unmatched_cols) {
      still_dets.push_back(left_dets[c]);
    }
    left_tracks = std::move(still_tracks);
    left_dets = std::move(still_dets);
  }
  result.unmatched_tracks = std::move(left_tracks);
  result.unmatched_detections = std::move(left_dets);
  return result;
}

Tracker::Tracker(TrackerConfig config) : config_(config) {
  config_.Validate();
}

Prediction Tracker::PredictState(const Track& track, int frame) const {
  const HistoryEntry& anchor = track.history.back();
  if (!config_.motion || track.history.size() < 2) {
    return {anchor.box, false};
  }
  return Predict(anchor.box, AverageVelocity(track.history),
                 frame - anchor.frame);
}

FrameOutput Tracker::Step(int frame, std::span<const Detection> detections) {
  if (last_frame_ && frame <= *last_frame_) {
    throw SequencingError("frame " + std::to_string(frame) +
                          " does not follow frame " +
                          std::to_string(*last_frame_));
  }
  std::vector<const Detection*> admitted;
  admitted.reserve(detections.size());
  for (const Detection& det : detections) {
    if (det.frame != frame) {
      throw ArgumentError("detection tagged frame " +
                          std::to_string(det.frame) + " passed to frame " +
                          std::to_string(frame));
    }
    if (!std::isfinite(det.confidence)) {
      throw ArgumentError("detection confidence is not finite");
    }
    if (det.confidence >= config_.det_conf_min) admitted.push_back(&det);
  }
  last_frame_ = frame;

  // (1) Advance every alive track to this frame.
  std::vector<BoundingBox> track_boxes;
  track_boxes.reserve(tracks_.size());
  for (Track& track : tracks_) {
    const Prediction p = PredictState(track, frame);
    track.state = p.box;
    track.degenerate = p.degenerate;
    track_boxes.push_back(p.box.ToBoundingBox());
  }
  std::vector<BoundingBox> det_boxes;
  det_boxes.reserve(admitted.size());
  for (const Detection* det : admitted) det_boxes.push_back(det->box);

  // (2)-(3) Cascaded association.
  const CascadeMatchResult match =
      CascadeMatch(track_boxes, det_boxes, config_);

  FrameOutput out{frame, {}};
  // (4) Matched tracks take the detection as their new state.
  for (const auto& pair : match.matches) {
    Track& track = tracks_[pair.track];
    const Detection& det = *admitted[pair.detection];
    track.state = det.box.ToCorners();
    track.history.Push(frame, track.state);
    track.age = 0;
    track.last_confidence = det.confidence;
    track.degenerate = false;
    out.records.push_back({track.id, det.box, det.confidence});
  }
  // (5) Unmatched tracks coast; drop those past max_age.
  for (std::size_t t : match.unmatched_tracks) ++tracks_[t].age;
  std::erase_if(tracks_, [this](const Track& track) {
    return track.age > config_.max_age;
  });
  // (6) Leftover detections start new tracks.
  for (std::size_t d : match.unmatched_detections) {
    const Detection& det = *admitted[d];
    Track track{next_id_++, det.box.ToCorners(), 0,
                MotionHistory(static_cast<std::size_t>(config_.n_max)),
                det.confidence};
    track.history.Push(frame, track.state);
    tracks_.push_back(std::move(track));
    out.records.push_back({tracks_.back().id, det.box, det.confidence});
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const TrackRecord& a, const TrackRecord& b) {
              return a.track_id < b.track_id;
            });
  return out;
}

std::vector<FrameOutput> RunSequence(const TrackerConfig& config,
                                     const DetectionSequence& detections) {
  std::vector<FrameOutput> outputs;
  if (detections.empty()) return outputs;
  Tracker tracker(config);
  const int first = detections.begin()->first;
  const int last = detections.rbegin()->first;
  outputs.reserve(static_cast<std::size_t>(last - first + 1));
  static const std::vector<Detection> kNone;
  for (int frame = first; frame <= last; ++frame) {
    const auto it = detections.find(frame);
    outputs.push_back(
        tracker.Step(frame, it == detections.end() ? kNone : it->second));
  }
  return outputs;
}

std::vector<FrameOutput> InterpolateGaps(const std::vector<FrameOutput>& outputs,
                                         int max_gap) {
  std::map<int, std::vector<TrackRecord>> frames;
  std::map<int, std::vector<std::pair<int, const TrackRecord*>>> by_track;
  for (const FrameOutput& fo : outputs) {
    frames[fo.frame];
    for (const TrackRecord& rec : fo.records) {
      frames[fo.frame].push_back(rec);
      by_track[rec.track_id].emplace_back(fo.frame, &rec);
    }
  }
  for (const auto& [id, seen] : by_track) {
    for (std::size_t i = 1; i < seen.size(); ++i) {
      const auto& [f0, r0] = seen[i - 1];
      const auto& [f1, r1] = seen[i];
      const int gap = f1 - f0 - 1;
      if (gap < 1 || gap > max_gap) continue;
      const CornerBox a = r0->box.ToCorners();
      const CornerBox b = r1->box.ToCorners();
      for (int f = f0 + 1; f < f1; ++f) {
        const double t = static_cast<double>(f - f0) / (f1 - f0);
        const CornerBox c(a.x1() + t * (b.x1() - a.x1()),
                          a.y1() + t * (b.y1() - a.y1()),
                          a.x2() + t * (b.x2() - a.x2()),
                          a.y2() + t * (b.y2() - a.y2()));
        frames[f].push_back({id, c.ToBoundingBox(), r0->confidence});
      }
    }
  }
  std::vector<FrameOutput> result;
  result.reserve(frames.size());
  for (auto& [frame, records] : frames) {
    std::sort(records.begin(), records.end(),
              [](const TrackRecord& a, const TrackRecord& b) {
                return a.track_id < b.track_id;
              });
    result.push_back({frame, std::move(records)});
  }
  return result;
}

}  // namespace cbiou
