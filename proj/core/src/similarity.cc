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

#include "cbiou/similarity.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cbiou/errors.h"

namespace cbiou {
namespace {

// Corner coordinates used by every measure below. Areas are always taken from
// these corners so that f(a, a) is exactly 1.
struct Extent {
  double x1, y1, x2, y2;
  double area() const { return (x2 - x1) * (y2 - y1); }
};

Extent ExtentOf(const BoundingBox& b) {
  return {b.x(), b.y(), b.x() + b.w(), b.y() + b.h()};
}

double Overlap(double lo1, double hi1, double lo2, double hi2) {
  return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

struct Pairwise {
  double intersection;
  double union_area;
  Extent hull;
};

Pairwise Compare(const BoundingBox& a, const BoundingBox& b) {
  const Extent ea = ExtentOf(a);
  const Extent eb = ExtentOf(b);
  Pairwise p;
  p.intersection =
      Overlap(ea.x1, ea.x2, eb.x1, eb.x2) * Overlap(ea.y1, ea.y2, eb.y1, eb.y2);
  p.union_area = ea.area() + eb.area() - p.intersection;
  p.hull = {std::min(ea.x1, eb.x1), std::min(ea.y1, eb.y1),
            std::max(ea.x2, eb.x2), std::max(ea.y2, eb.y2)};
  return p;
}

}  // namespace

BoundingBox Buffer(const BoundingBox& box, double scale) {
  if (!std::isfinite(scale) || scale < 0.0) {
    throw ArgumentError("buffer scale must be finite and non-negative, got " +
                        std::to_string(scale));
  }
  const double dw = scale * box.w();
  const double dh = scale * box.h();
  return BoundingBox(box.x() - dw, box.y() - dh, box.w() + 2.0 * dw,
                     box.h() + 2.0 * dh);
}

double IntersectionArea(const BoundingBox& a, const BoundingBox& b) {
  return Compare(a, b).intersection;
}

BoundingBox EnclosingBox(const BoundingBox& a, const BoundingBox& b) {
  const Extent hull = Compare(a, b).hull;
  return BoundingBox(hull.x1, hull.y1, hull.x2 - hull.x1, hull.y2 - hull.y1);
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const Pairwise p = Compare(a, b);
  if (p.intersection <= 0.0) return 0.0;
  return p.intersection / p.union_area;
}

double Biou(const BoundingBox& a, const BoundingBox& b, double scale) {
  return Iou(Buffer(a, scale), Buffer(b, scale));
}

double Giou(const BoundingBox& a, const BoundingBox& b) {
  const Pairwise p = Compare(a, b);
  const double iou = p.intersection / p.union_area;
  const double hull_area = p.hull.area();
  return iou - (hull_area - p.union_area) / hull_area;
}

double Diou(const BoundingBox& a, const BoundingBox& b) {
  const Pairwise p = Compare(a, b);
  const double iou = p.intersection / p.union_area;
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  const double hw = p.hull.x2 - p.hull.x1;
  const double hh = p.hull.y2 - p.hull.y1;
  return iou - (dx * dx + dy * dy) / (hw * hw + hh * hh);
}

std::string_view ToString(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kIou:
      return "iou";
    case SimilarityKind::kGiou:
      return "giou";
    case SimilarityKind::kDiou:
      return "diou";
    case SimilarityKind::kBiou:
      return "biou";
  }
  return "unknown";
}

SimilarityKind ParseSimilarityKind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "iou") return SimilarityKind::kIou;
  if (lower == "giou") return SimilarityKind::kGiou;
  if (lower == "diou") return SimilarityKind::kDiou;
  if (lower == "biou") return SimilarityKind::kBiou;
  throw ArgumentError("unknown similarity kind '" + std::string(name) +
                      "' (expected iou, giou, diou or biou)");
}

double Similarity(SimilarityKind kind, const BoundingBox& a,
                  const BoundingBox& b, double buffer_scale) {
  switch (kind) {
    case SimilarityKind::kIou:
      return Iou(a, b);
    case SimilarityKind::kGiou:
      return Giou(a, b);
    case SimilarityKind::kDiou:
      return Diou(a, b);
    case SimilarityKind::kBiou:
      return Biou(a, b, buffer_scale);
  }
  return 0.0;
}

}  // namespace cbiou
