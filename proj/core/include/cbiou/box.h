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

#ifndef CBIOU_BOX_H_
#define CBIOU_BOX_H_

#include <ostream>

namespace cbiou {

class CornerBox;

// Axis-aligned box in top-left / width / height form, real-valued pixels.
// Construction rejects non-finite fields and non-positive extents, so every
// BoundingBox in the program is valid.
class BoundingBox {
 public:
  // Throws ArgumentError.
  BoundingBox(double x, double y, double w, double h);

  double x() const { return x_; }
  double y() const { return y_; }
  double w() const { return w_; }
  double h() const { return h_; }

  double area() const { return w_ * h_; }
  double center_x() const { return x_ + w_ / 2.0; }
  double center_y() const { return y_ + h_ / 2.0; }

  CornerBox ToCorners() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x_;
  double y_;
  double w_;
  double h_;
};

// The same box as (x1, y1, x2, y2). Tracker state and motion deltas live in
// this form. Requires x2 > x1 and y2 > y1.
class CornerBox {
 public:
  // Throws ArgumentError.
  CornerBox(double x1, double y1, double x2, double y2);

  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double x2() const { return x2_; }
  double y2() const { return y2_; }

  double width() const { return x2_ - x1_; }
  double height() const { return y2_ - y1_; }
  double area() const { return width() * height(); }
  double center_x() const { return (x1_ + x2_) / 2.0; }
  double center_y() const { return (y1_ + y2_) / 2.0; }

  BoundingBox ToBoundingBox() const;

  friend bool operator==(const CornerBox&, const CornerBox&) = default;

 private:
  double x1_;
  double y1_;
  double x2_;
  double y2_;
};

std::ostream& operator<<(std::ostream& os, const BoundingBox& box);
std::ostream& operator<<(std::ostream& os, const CornerBox& box);

}  // namespace cbiou

#endif  // CBIOU_BOX_H_
