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

#ifndef CBIOU_EXPERIMENT_H_
#define CBIOU_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cbiou/metrics.h"
#include "cbiou/tracker.h"

namespace cbiou {

inline constexpr std::string_view kVersion = "0.1.0";

// Detections and ground truth of one sequence.
struct SequencePair {
  std::string name;
  DetectionSequence detections;
  SequenceAnnotations ground_truth;
};
using Dataset = std::vector<SequencePair>;

// Loads either a single (detections file, ground-truth file) pair or two
// directories whose *.txt files are paired by file name. Throws IoError for
// missing paths and DataError when a directory pair has nothing in common.
Dataset LoadDataset(const std::filesystem::path& detections,
                    const std::filesystem::path& ground_truth);

SequenceAnnotations ToAnnotations(const std::vector<FrameOutput>& outputs);

// Tracks every sequence with `config` and pools the metrics.
MetricsReport EvaluateConfig(const TrackerConfig& config,
                             const Dataset& dataset);

// Calls fn(i) for i in [0, n) on up to `jobs` threads. Each index runs
// exactly once; callers write results into per-index slots.
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& fn);

// Evenly spaced values start, start + step, ..., stop (inclusive, within
// half a step), rounded to 1e-9. Throws ArgumentError for a non-positive
// step or stop < start.
std::vector<double> MakeRange(double start, double stop, double step);
// Parses "start:stop:step".
std::vector<double> ParseRange(std::string_view spec);

struct GridCell {
  double b1;
  double b2;
  MetricsReport report;
};

struct GridResult {
  std::vector<double> scales;
  // All (b1, b2) with b1 < b2, ordered by b1 then b2.
  std::vector<GridCell> cells;
  std::size_t best = 0;
  // Single-round IoU matching (b1 = b2 = 0) for reference.
  MetricsReport iou_baseline;
};

// Evaluates every b1 < b2 combination drawn from `scales` with cascaded
// matching enabled. The best cell maximizes pooled HOTA; ties go to the
// smaller (b1, b2).
GridResult GridSearch(const TrackerConfig& base, const Dataset& dataset,
                      const std::vector<double>& scales, int jobs = 1);

void FormatGridSummary(std::ostream& out, const GridResult& grid);
// Lower-triangle HOTA matrix: one row per b2, one column per b1, blank where
// b1 >= b2.
void FormatGridMatrix(std::ostream& out, const GridResult& grid);

struct Variant {
  std::string name;
  TrackerConfig config;
};

// IoU, GIoU, DIoU and BIoU single-round trackers without motion, then
// C-BIoU without and with motion. All other settings come from `base`.
std::vector<Variant> AblationVariants(const TrackerConfig& base);

struct VariantResult {
  Variant variant;
  MetricsReport report;
};

std::vector<VariantResult> CompareVariants(const TrackerConfig& base,
                                           const Dataset& dataset,
                                           int jobs = 1);

// tracker,cascade,motion,HOTA,DetA,AssA,MOTA,IDF1 with scores x100.
void FormatCompareTable(std::ostream& out,
                        const std::vector<VariantResult>& rows);

// Key/value report, scores x100 with one decimal, then raw counts.
void FormatMetricsReport(std::ostream& out, const MetricsReport& report);
// alpha,HOTA,DetA,AssA per localization threshold.
void FormatAlphaTable(std::ostream& out, const MetricsReport& report);
// x100 with one decimal, e.g. 0.7071 -> "70.7".
std::string Percent1(double ratio);

struct BenchResult {
  int objects = 0;
  int frames = 0;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  double fps = 0.0;
  double object_updates_per_second = 0.0;
  std::size_t records = 0;
  // FNV-1a over the formatted tracking output; equal seeds give equal
  // digests.
  std::uint64_t output_digest = 0;
};

// Generates an in-memory workload of `objects` x `frames` and times only
// Tracker::Step.
BenchResult RunBenchmark(const TrackerConfig& config, int objects, int frames,
                         std::uint64_t seed);

void FormatBenchReport(std::ostream& out, const BenchResult& bench);

// Flat key/value record of a run, written next to its outputs. Everything
// except the timing entries is enough to repeat the run.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void Set(std::string key, std::string value);
  void Set(std::string key, double value);
  void Set(std::string key, int value);
  void Set(std::string key, bool value);
  void Set(std::string key, const char* value) {
    Set(std::move(key), std::string(value));
  }
  void SetConfig(const TrackerConfig& config);
  void AddTiming(std::string key, double seconds);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  // TOML-compatible "key = value" lines; timings go under [timing].
  void Format(std::ostream& out) const;
  void Write(const std::filesystem::path& path) const;

 private:
  void SetRaw(std::string key, std::string text);

  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::pair<std::string, double>> timings_;
};

// Shortest round-trip decimal representation.
std::string FormatReal(double value);

}  // namespace cbiou

#endif  // CBIOU_EXPERIMENT_H_
