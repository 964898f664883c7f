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

#include "cbiou/box.h"

#include <cmath>
#include <sstream>

#include "cbiou/errors.h"

namespace cbiou {
namespace {

bool AllFinite(double a, double b, double c, double d) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
         std::isfinite(d);
}

}  // namespace

BoundingBox::BoundingBox(double x, double y, double w, double h)
    : x_(x), y_(y), w_(w), h_(h) {
  if (!AllFinite(x, y, w, h)) {
    std::ostringstream msg;
    msg << "bounding box has non-finite field: " << *this;
    throw ArgumentError(msg.str());
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    std::ostringstream msg;
    msg << "bounding box must have positive extents: " << *this;
    throw ArgumentError(msg.str());
  }
}

CornerBox BoundingBox::ToCorners() const {
  return CornerBox(x_, y_, x_ + w_, y_ + h_);
}

CornerBox::CornerBox(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!AllFinite(x1, y1, x2, y2)) {
    std::ostringstream msg;
    msg << "corner box has non-finite field: " << *this;
    throw ArgumentError(msg.str());
  }
  if (!(x2 > x1) || !(y2 > y1)) {
    std::ostringstream msg;
    msg << "corner box must satisfy x2 > x1 and y2 > y1: " << *this;
    throw ArgumentError(msg.str());
  }
}

BoundingBox CornerBox::ToBoundingBox() const {
  return BoundingBox(x1_, y1_, x2_ - x1_, y2_ - y1_);
}

std::ostream& operator<<(std::ostream& os, const BoundingBox& box) {
  return os << "(x=" << box.x() << ", y=" << box.y() << ", w=" << box.w()
            << ", h=" << box.h() << ")";
}

std::ostream& operator<<(std::ostream& os, const CornerBox& box) {
  return os << "(x1=" << box.x1() << ", y1=" << box.y1()
            << ", x2=" << box.x2() << ", y2=" << box.y2() << ")";
}

}  // namespace cbiou
