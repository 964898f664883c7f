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

#ifndef CBIOU_MOT_IO_H_
#define CBIOU_MOT_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cbiou/metrics.h"
#include "cbiou/tracker.h"

namespace cbiou {

// MOTChallenge-style comma-separated text.
//
//   detections:   frame,-1,x,y,w,h,conf[,-1,-1,-1]
//   ground truth: frame,id,x,y,w,h[,active,class,visibility]
//   results:      frame,id,x,y,w,h,conf,-1,-1,-1
//
// Readers accept 6 to 10 columns, CR/LF line endings and blank lines, and
// report the 1-based line number of any malformed row (ParseError) or
// non-positive extent (DataError). Missing confidence and visibility default
// to 1. Writers emit LF-terminated rows sorted by (frame, id) with fixed
// two-decimal coordinates.

// Throws IoError if the file cannot be opened.
DetectionSequence ReadDetections(const std::filesystem::path& path);
DetectionSequence ParseDetections(std::istream& in);

// Drops rows with active == 0 and, when given, rows whose visibility is
// below `min_visibility`. Throws DataError on a repeated (frame, id).
SequenceAnnotations ReadGroundTruth(
    const std::filesystem::path& path,
    std::optional<double> min_visibility = std::nullopt);
SequenceAnnotations ParseGroundTruth(
    std::istream& in, std::optional<double> min_visibility = std::nullopt);

// Tracker output read back as labeled boxes (confidence discarded).
SequenceAnnotations ReadResults(const std::filesystem::path& path);
SequenceAnnotations ParseResults(std::istream& in);

void WriteResults(const std::filesystem::path& path,
                  const std::vector<FrameOutput>& outputs);
void FormatResults(std::ostream& out, const std::vector<FrameOutput>& outputs);

// Detection rows with id -1.
void WriteDetections(const std::filesystem::path& path,
                     const DetectionSequence& detections);
void FormatDetections(std::ostream& out, const DetectionSequence& detections);

// Ground-truth rows "frame,id,x,y,w,h,1,1,1.00".
void WriteGroundTruth(const std::filesystem::path& path,
                      const SequenceAnnotations& gt);
void FormatGroundTruth(std::ostream& out, const SequenceAnnotations& gt);

// Fixed two-decimal rendering used by every writer. Ties round to even on
// the exact binary value.
std::string FormatFixed2(double value);

}  // namespace cbiou

#endif  // CBIOU_MOT_IO_H_
