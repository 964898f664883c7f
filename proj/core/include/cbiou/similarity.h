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

#ifndef CBIOU_SIMILARITY_H_
#define CBIOU_SIMILARITY_H_

#include <string_view>

#include "cbiou/box.h"

namespace cbiou {

// Grows `box` by `scale` times its own width on the left and right and by
// `scale` times its height on top and bottom:
//   (x - s*w, y - s*h, w + 2*s*w, h + 2*s*h).
// Center and aspect ratio are unchanged; area grows by (1 + 2s)^2.
// Throws ArgumentError if `scale` is negative or not finite.
BoundingBox Buffer(const BoundingBox& box, double scale);

// Intersection area of two boxes, 0 when disjoint.
double IntersectionArea(const BoundingBox& a, const BoundingBox& b);

// Area of the smallest axis-aligned box enclosing both.
BoundingBox EnclosingBox(const BoundingBox& a, const BoundingBox& b);

// Intersection over union, in [0, 1].
double Iou(const BoundingBox& a, const BoundingBox& b);

// IoU of both boxes after buffering each with the same `scale`. Reduces to
// Iou() at scale 0. Throws ArgumentError on a bad scale.
double Biou(const BoundingBox& a, const BoundingBox& b, double scale);

// Generalized IoU: IoU - (hull - union) / hull. In (-1, 1].
double Giou(const BoundingBox& a, const BoundingBox& b);

// Distance IoU: IoU - |center_a - center_b|^2 / diagonal(hull)^2. In (-1, 1].
double Diou(const BoundingBox& a, const BoundingBox& b);

enum class SimilarityKind { kIou, kGiou, kDiou, kBiou };

std::string_view ToString(SimilarityKind kind);
// Accepts "iou", "giou", "diou", "biou" (case-insensitive). Throws
// ArgumentError otherwise.
SimilarityKind ParseSimilarityKind(std::string_view name);

// Dispatches to the measure named by `kind`. `buffer_scale` is only read for
// kBiou.
double Similarity(SimilarityKind kind, const BoundingBox& a,
                  const BoundingBox& b, double buffer_scale);

}  // namespace cbiou

#endif  // CBIOU_SIMILARITY_H_
