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

#include <random>
#include <vector>

#include <gtest/gtest.h>
#include "cbiou/errors.h"
#include "oracles.h"

namespace cbiou {
namespace {

TEST(MotionHistoryTest, RejectsZeroWindow) {
  EXPECT_THROW(MotionHistory(0), ArgumentError);
}

TEST(MotionHistoryTest, FramesMustIncrease) {
  MotionHistory history(5);
  history.Push(3, CornerBox(0, 0, 1, 1));
  EXPECT_THROW(history.Push(3, CornerBox(0, 0, 1, 1)), SequencingError);
  EXPECT_THROW(history.Push(2, CornerBox(0, 0, 1, 1)), SequencingError);
  EXPECT_EQ(history.size(), 1u);
}

TEST(MotionHistoryTest, EvictsBeyondCapacity) {
  MotionHistory history(5);
  for (int f = 1; f <= 20; ++f) {
    history.Push(f, CornerBox(f, 0, f + 10, 10));
    EXPECT_LE(history.size(), 6u);
  }
  EXPECT_EQ(history.size(), 6u);
  EXPECT_EQ(history.front().frame, 15);
  EXPECT_EQ(history.back().frame, 20);
}

TEST(AverageVelocityTest, Examples) {
  MotionHistory history(5);
  history.Push(1, CornerBox(0, 0, 10, 10));
  EXPECT_EQ(AverageVelocity(history), Velocity{});
  history.Push(2, CornerBox(5, 0, 15, 10));
  EXPECT_EQ(AverageVelocity(history), (Velocity{5, 0, 5, 0}));

  MotionHistory three(5);
  three.Push(1, CornerBox(0, 0, 10, 10));
  three.Push(2, CornerBox(2, 0, 10, 10));
  three.Push(3, CornerBox(6, 0, 10, 10));
  EXPECT_EQ(AverageVelocity(three).dx1, 3.0);
  EXPECT_EQ(AverageVelocity(three).dy1, 0.0);
}

TEST(AverageVelocityTest, EmptyHistoryIsZero) {
  EXPECT_TRUE(AverageVelocity(MotionHistory(3)).IsZero());
}

TEST(AverageVelocityTest, GapsNormalizeBySpan) {
  MotionHistory history(5);
  history.Push(1, CornerBox(0, 0, 10, 10));
  history.Push(5, CornerBox(8, 4, 18, 14));
  EXPECT_EQ(AverageVelocity(history), (Velocity{2, 1, 2, 1}));
}

TEST(AverageVelocityTest, EqualsMeanOfConsecutiveDeltas) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> step(-20.0, 20.0);
  std::uniform_int_distribution<int> length(2, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    MotionHistory history(5);
    std::vector<double> xs;
    double x = 100.0;
    const int n = length(rng);
    for (int f = 1; f <= n; ++f) {
      x += step(rng);
      history.Push(f, CornerBox(x, 0, x + 50, 50));
      xs.push_back(x);
    }
    const std::vector<double> window(
        xs.end() - static_cast<std::ptrdiff_t>(history.size()), xs.end());
    ASSERT_NEAR(AverageVelocity(history).dx1, testing::MeanOfDeltas(window),
                1e-12 * 64);
  }
}

TEST(AverageVelocityTest, EffectiveWindowWithDefaults) {
  MotionHistory history(5);
  for (int f = 1; f <= 10; ++f) {
    history.Push(f, CornerBox(0, 0, 1, 1));
    const std::size_t n = history.size() - 1;
    EXPECT_LE(n, 5u);
    if (f >= 3) EXPECT_GE(n, 2u);
  }
}

TEST(PredictTest, Examples) {
  const CornerBox state(0, 0, 10, 10);
  EXPECT_EQ(Predict(state, Velocity{}, 3).box, state);
  EXPECT_EQ(Predict(state, Velocity{5, 0, 5, 0}, 2).box,
            CornerBox(10, 0, 20, 10));
  const Prediction shifted = Predict(state, Velocity{1, 1, 1, 1}, 1);
  EXPECT_EQ(shifted.box, CornerBox(1, 1, 11, 11));
  EXPECT_FALSE(shifted.degenerate);
}

TEST(PredictTest, RejectsNonPositiveDelta) {
  EXPECT_THROW(Predict(CornerBox(0, 0, 1, 1), Velocity{}, 0), ArgumentError);
}

TEST(PredictTest, CollapsedBoxIsClampedAndFlagged) {
  // x extent shrinks by 4 per frame: after 3 frames x1 = 6, x2 = 4.
  const Prediction p = Predict(CornerBox(0, 0, 10, 10), Velocity{2, 0, -2, 0}, 3);
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(p.box.x1(), 4.5);
  EXPECT_EQ(p.box.x2(), 5.5);
  EXPECT_EQ(p.box.y1(), 0.0);
  EXPECT_EQ(p.box.y2(), 10.0);
}

TEST(PredictTest, LinearInFrames) {
  // Dyadic states and velocities keep every sum exact.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> grid(-512, 512);
  std::uniform_int_distribution<int> frames(1, 20);
  for (int trial = 0; trial < 5000; ++trial) {
    const double x = grid(rng) / 8.0, y = grid(rng) / 8.0;
    const CornerBox s(x, y, x + 40.0, y + 30.0);
    const Velocity v{grid(rng) / 64.0, grid(rng) / 64.0, grid(rng) / 64.0,
                     grid(rng) / 64.0};
    const int a = frames(rng), b = frames(rng);
    const Prediction whole = Predict(s, v, a + b);
    if (whole.degenerate) continue;
    const Prediction first = Predict(s, v, a);
    if (first.degenerate) continue;
    ASSERT_EQ(Predict(first.box, v, b).box, whole.box);
  }
  std::uniform_real_distribution<double> real(-5.0, 5.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const CornerBox s(100, 100, 160, 180);
    const Velocity v{real(rng), real(rng), real(rng) + 5.5, real(rng) + 5.5};
    const int a = frames(rng), b = frames(rng);
    const CornerBox whole = Predict(s, v, a + b).box;
    const CornerBox chained = Predict(Predict(s, v, a).box, v, b).box;
    ASSERT_NEAR(whole.x1(), chained.x1(), 1e-9);
    ASSERT_NEAR(whole.y2(), chained.y2(), 1e-9);
  }
}

}  // namespace
}  // namespace cbiou
