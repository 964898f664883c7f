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

// Acceptance gate. Runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbiou/assignment.h"
#include "cbiou/box.h"
#include "cbiou/experiment.h"
#include "cbiou/metrics.h"
#include "cbiou/mot_io.h"
#include "cbiou/similarity.h"
#include "cbiou/synth.h"
#include "cbiou/tracker.h"
#include "oracles.h"

namespace cbiou {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a failed check; keeps the first failure message.
  void Check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Geometry exactness.

Outcome GeometryExactness() {
  Outcome out;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-100.0, 500.0);
  std::uniform_real_distribution<double> ext(1.0, 200.0);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const BoundingBox a(pos(rng), pos(rng), ext(rng), ext(rng));
    const BoundingBox b =
        i % 2 == 0 ? BoundingBox(pos(rng), pos(rng), ext(rng), ext(rng))
                   : BoundingBox(a.x() + jitter(rng) * a.w(),
                                 a.y() + jitter(rng) * a.h(), a.w(), a.h());
    worst = std::max(worst, std::abs(Biou(a, b, 0.0) - Iou(a, b)));
  }
  out.Check(worst <= 1e-12, Fmt("max |biou(.,.,0) - iou| = %.3g", worst));

  const BoundingBox unit(0, 0, 10, 10);
  const BoundingBox buffered = Buffer(unit, 0.3);
  out.Check(std::abs(buffered.x() + 3) <= 1e-12 &&
                std::abs(buffered.y() + 3) <= 1e-12 &&
                std::abs(buffered.w() - 16) <= 1e-12 &&
                std::abs(buffered.h() - 16) <= 1e-12,
            "buffered box != (-3,-3,16,16)");
  out.Check(std::abs(Biou(unit, BoundingBox(12, 0, 10, 10), 0.3) - 1.0 / 7.0) <=
                1e-12,
            "BIoU fixture != 1/7");
  out.Check(std::abs(Giou(unit, BoundingBox(20, 0, 10, 10)) + 1.0 / 3.0) <= 1e-12,
            "GIoU fixture != -1/3");
  out.Check(std::abs(Diou(unit, BoundingBox(10, 0, 10, 10)) + 0.2) <= 1e-12,
            "DIoU fixture != -0.2");

  std::uniform_int_distribution<int> corner(0, 63);
  int mismatches = 0;
  for (int i = 0; i < 2000; ++i) {
    auto make = [&] {
      int x0 = corner(rng), x1 = corner(rng), y0 = corner(rng), y1 = corner(rng);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      return testing::PixelBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    };
    const testing::PixelBox pa = make(), pb = make();
    const testing::PixelAreas areas = testing::CountPixels(pa, pb);
    const BoundingBox a(pa.x, pa.y, pa.w, pa.h), b(pb.x, pb.y, pb.w, pb.h);
    if (IntersectionArea(a, b) != static_cast<double>(areas.intersection) ||
        Iou(a, b) != static_cast<double>(areas.intersection) /
                         static_cast<double>(areas.union_area)) {
      ++mismatches;
    }
  }
  out.Check(mismatches == 0, Fmt("%g pixel-oracle mismatches", mismatches));
  if (out.pass) out.detail = Fmt("10^4 pairs, max deviation %.3g", worst);
  return out;
}

// ---------------------------------------------------------------------------
// 2. Assignment optimality.

Outcome AssignmentOptimality() {
  Outcome out;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  int wrong = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    std::vector<double> values(rows * cols);
    for (double& v : values) v = real(rng);
    const SimilarityMatrix sim(rows, cols, values);
    if (TotalSimilarity(sim, SolveAssignment(sim)) !=
        testing::BruteForceMaxAssignment(values, rows, cols)) {
      ++wrong;
    }
  }
  out.Check(wrong == 0, Fmt("%g of 1000 matrices not optimal", wrong));
  if (out.pass) out.detail = "1000 matrices up to 6x6 equal brute force exactly";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Metrics fixtures.

bool IdentityHolds(const HotaResult& r) {
  for (const AlphaScores& a : r.per_alpha) {
    if (std::abs(a.hota - std::sqrt(a.deta * a.assa)) > 1e-12) return false;
  }
  return true;
}

Outcome MetricsFixtures() {
  Outcome out;
  SequenceAnnotations gt, swapped;
  for (int f = 1; f <= 4; ++f) {
    const BoundingBox box(10.0 * f, 20, 30, 40);
    gt.Add(f, 1, box);
    gt.Add(f, 2, BoundingBox(300, 10.0 * f, 25, 25));
    swapped.Add(f, f <= 2 ? 10 : 20, box);
  }
  const MetricsReport perfect = Evaluate(gt, gt);
  out.Check(perfect.hota.hota == 1.0 && perfect.hota.deta == 1.0 &&
                perfect.hota.assa == 1.0 && perfect.clear.mota == 1.0 &&
                perfect.identity.idf1 == 1.0,
            "perfect prediction does not score 1.0 everywhere");
  out.Check(IdentityHolds(perfect.hota), "HOTA identity broken (perfect)");

  SequenceAnnotations single;
  for (int f = 1; f <= 4; ++f) single.Add(f, 1, BoundingBox(10.0 * f, 20, 30, 40));
  const MetricsReport sw = Evaluate(single, swapped);
  out.Check(std::abs(sw.clear.mota - 0.75) <= 1e-12,
            Fmt("switch fixture MOTA %.6f != 0.75", sw.clear.mota));
  out.Check(std::abs(sw.identity.idf1 - 0.5) <= 1e-12,
            Fmt("switch fixture IDF1 %.6f != 0.5", sw.identity.idf1));
  for (const AlphaScores& a : sw.hota.per_alpha) {
    out.Check(std::abs(a.assa - 0.5) <= 1e-12,
              Fmt("AssA at alpha %.2f is %.6f", a.alpha, a.assa));
  }
  out.Check(IdentityHolds(sw.hota), "HOTA identity broken (switch)");

  SequenceAnnotations shifted_gt, shifted;
  for (int f = 1; f <= 3; ++f) {
    shifted_gt.Add(f, 1, BoundingBox(0, 0, 7, 10));
    shifted.Add(f, 1, BoundingBox(3, 0, 7, 10));
  }
  const HotaResult partial = Hota(shifted_gt, shifted);
  out.Check(IdentityHolds(partial), "HOTA identity broken (partial overlap)");
  out.Check(IdentityHolds(Hota(single, SequenceAnnotations())),
            "HOTA identity broken (empty prediction)");
  if (out.pass) {
    out.detail = Fmt("MOTA %.2f, IDF1 %.2f, AssA 0.5 at all 19 alphas",
                     sw.clear.mota, sw.identity.idf1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. Non-overlap rescue.

Outcome NonOverlapRescue() {
  Outcome out;
  // Twenty objects on separate horizontal lanes, each moving 1.1-1.5 box
  // widths per frame so consecutive boxes never overlap.
  constexpr int kObjects = 20;
  constexpr int kFrames = 300;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> size(30.0, 60.0);
  std::uniform_real_distribution<double> factor(1.1, 1.5);
  std::uniform_real_distribution<double> start(0.0, 500.0);
  SequenceAnnotations gt;
  DetectionSequence dets;
  double min_step_ratio = 1e9;
  for (int id = 1; id <= kObjects; ++id) {
    const double w = size(rng), h = size(rng);
    const double step = factor(rng) * w;
    const double sign = id % 2 == 0 ? 1.0 : -1.0;
    const double x0 = sign > 0 ? start(rng) : start(rng) + kFrames * 100.0;
    const double y = 200.0 * id;
    for (int f = 1; f <= kFrames; ++f) {
      const BoundingBox box(x0 + sign * step * (f - 1), y, w, h);
      gt.Add(f, id, box);
      dets[f].push_back({f, box, 1.0});
    }
    min_step_ratio = std::min(min_step_ratio, step / w);
  }
  // Precondition: adjacent-frame IoU is zero for every object.
  double max_adjacent_iou = 0.0;
  for (int f = 2; f <= kFrames; ++f) {
    for (std::size_t i = 0; i < gt.at(f).size(); ++i) {
      max_adjacent_iou = std::max(
          max_adjacent_iou, Iou(gt.at(f - 1)[i].box, gt.at(f)[i].box));
    }
  }
  out.Check(max_adjacent_iou == 0.0, "scenario has overlapping adjacent boxes");

  TrackerConfig iou;
  iou.similarity = SimilarityKind::kIou;
  iou.cascade = false;
  iou.motion = false;
  TrackerConfig cbiou;
  cbiou.b1 = 0.3;
  cbiou.b2 = 0.4;
  const MetricsReport base = Evaluate(gt, ToAnnotations(RunSequence(iou, dets)));
  const MetricsReport ours = Evaluate(gt, ToAnnotations(RunSequence(cbiou, dets)));
  out.Check(base.identity.idf1 < 0.3,
            Fmt("IoU tracker IDF1 %.3f not < 0.3", base.identity.idf1));
  out.Check(ours.identity.idf1 > 0.9,
            Fmt("C-BIoU IDF1 %.3f not > 0.9", ours.identity.idf1));
  out.Check(ours.clear.idsw == 0, Fmt("C-BIoU has %g id switches",
                                      static_cast<double>(ours.clear.idsw)));
  if (out.pass) {
    out.detail = Fmt("IoU IDF1 %.3f, C-BIoU IDF1 %.3f, IDSW %g", base.identity.idf1,
                     ours.identity.idf1, static_cast<double>(ours.clear.idsw));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5. Ablation ordering on the irregular-motion suite.

Dataset IrregularMotionSuite() {
  Dataset data;
  for (int s = 0; s < 5; ++s) {
    ScenarioSpec spec;
    spec.num_objects = 15;
    spec.num_frames = 300;
    spec.arena_width = 1280;
    spec.arena_height = 720;
    spec.speed = {5, 20};
    spec.turn_prob = 0.05;
    spec.size = {30, 70};
    spec.occlusion = OcclusionSpec{0.02, 2, 8};
    spec.seed = 100 + static_cast<std::uint64_t>(s);
    Scenario sc = Generate(spec);
    data.push_back({"irregular" + std::to_string(s), std::move(sc.detections),
                    std::move(sc.ground_truth)});
  }
  return data;
}

Outcome AblationOrdering(const Dataset& suite) {
  Outcome out;
  const std::vector<VariantResult> rows = CompareVariants(TrackerConfig{}, suite);
  auto hota = [&](const std::string& name) {
    for (const VariantResult& r : rows) {
      if (r.variant.name == name) return r.report.hota.hota;
    }
    return -1.0;
  };
  const double iou = hota("IoU"), giou = hota("GIoU"), diou = hota("DIoU");
  const double biou = hota("BIoU"), c = hota("C-BIoU"), cm = hota("C-BIoU+motion");
  const double baseline = std::max({iou, giou, diou});
  out.Check(cm >= c, Fmt("C-BIoU+motion %.4f < C-BIoU %.4f", cm, c));
  out.Check(c >= biou, Fmt("C-BIoU %.4f < BIoU %.4f", c, biou));
  out.Check(biou >= baseline, Fmt("BIoU %.4f < best baseline %.4f", biou, baseline));
  out.Check(cm - iou >= 0.03, Fmt("spread %.2f HOTA points < 3", 100 * (cm - iou)));
  std::ostringstream detail;
  detail << "HOTA";
  for (const VariantResult& r : rows) {
    detail << ' ' << r.variant.name << '=' << Percent1(r.report.hota.hota);
  }
  if (out.pass) out.detail = detail.str();
  else out.detail += " [" + detail.str() + "]";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Noise-robustness crossover.

Outcome NoiseCrossover() {
  Outcome out;
  TrackerConfig full;
  TrackerConfig iou;
  iou.similarity = SimilarityKind::kIou;
  iou.cascade = false;
  iou.motion = false;
  int crossings = 0;
  std::ostringstream detail;
  for (int s = 0; s < 5; ++s) {
    ScenarioSpec spec;
    spec.num_objects = 15;
    spec.num_frames = 300;
    spec.arena_width = 640;
    spec.arena_height = 400;
    spec.speed = {3, 15};
    spec.turn_prob = 0.05;
    spec.size = {30, 70};
    spec.seed = 200 + static_cast<std::uint64_t>(s);
    const Scenario sc = Generate(spec);
    bool crossed = true;
    detail << (s ? "; " : "") << "seed " << spec.seed << ':';
    for (double ratio : {0.0, 0.2, 0.4}) {
      const NoiseSpec noise{ratio, 1000 + static_cast<std::uint64_t>(s)};
      const Dataset data = {
          {"noisy", Perturb(sc.detections, noise, sc.ground_truth),
           sc.ground_truth}};
      const double ours = EvaluateConfig(full, data).hota.hota;
      const double base = EvaluateConfig(iou, data).hota.hota;
      crossed = crossed && (ratio < 0.3 ? ours >= base : base >= ours);
      detail << ' ' << Percent1(ours) << '/' << Percent1(base);
    }
    crossings += crossed ? 1 : 0;
  }
  out.Check(crossings >= 3, Fmt("crossover in only %g of 5 seeds", crossings));
  out.detail = Fmt("crossover in %g/5 seeds (C-BIoU/IoU HOTA at 0/20/40%%: ",
                   crossings) +
               detail.str() + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Grid-search shape.

std::string GridText(const GridResult& grid) {
  std::ostringstream out;
  FormatGridSummary(out, grid);
  FormatGridMatrix(out, grid);
  return out.str();
}

Outcome GridShape(const Dataset& suite) {
  Outcome out;
  const std::vector<double> scales = ParseRange("0.1:0.7:0.1");
  const GridResult grid = GridSearch(TrackerConfig{}, suite, scales);
  out.Check(grid.cells.size() == 21,
            Fmt("%g combinations, expected 21",
                static_cast<double>(grid.cells.size())));
  std::ostringstream matrix;
  FormatGridMatrix(matrix, grid);
  int filled = 0;
  std::string line;
  std::istringstream lines(matrix.str());
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string field;
    std::getline(fields, field, ',');
    while (std::getline(fields, field, ',')) filled += field.empty() ? 0 : 1;
  }
  out.Check(filled == 21, Fmt("matrix has %g filled cells, expected 21", filled));
  const GridCell& best = grid.cells[grid.best];
  out.Check(best.report.hota.hota > grid.iou_baseline.hota.hota,
            "best buffer pair does not beat the IoU degenerate");
  out.Check(GridText(GridSearch(TrackerConfig{}, suite, scales)) == GridText(grid),
            "grid search is not repeatable");

  // All-equal scores must resolve to the smallest pair.
  SequencePair still;
  still.name = "static";
  for (int f = 1; f <= 10; ++f) {
    for (int id = 1; id <= 3; ++id) {
      const BoundingBox box(200.0 * id, 100, 40, 40);
      still.ground_truth.Add(f, id, box);
      still.detections[f].push_back({f, box, 1.0});
    }
  }
  const GridResult tie = GridSearch(TrackerConfig{}, {still}, scales);
  out.Check(tie.best == 0 && tie.cells[0].b1 == 0.1 && tie.cells[0].b2 == 0.2,
            "tie not broken toward (0.1, 0.2)");
  if (out.pass) {
    out.detail = "21 cells; best (" + FormatReal(best.b1) + ", " +
                 FormatReal(best.b2) + ") HOTA " + Percent1(best.report.hota.hota) +
                 " vs IoU " + Percent1(grid.iou_baseline.hota.hota);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8. Throughput.

Outcome Throughput() {
  Outcome out;
  const BenchResult bench = RunBenchmark(TrackerConfig{}, 20, 1000, 8);
  out.Check(bench.fps >= 200.0, Fmt("%.1f FPS < 200", bench.fps));
  out.detail = Fmt("%.1f FPS tracker-only (20 objects x 1000 frames)", bench.fps);
  return out;
}

// ---------------------------------------------------------------------------
// 9. End-to-end determinism.

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Tracks and evaluates one sequence through files, as the command line does.
void TrackThenEval(const fs::path& dir, const std::string& tag) {
  const DetectionSequence dets = ReadDetections(dir / "det.txt");
  WriteResults(dir / ("res" + tag + ".txt"), RunSequence(TrackerConfig{}, dets));
  const MetricsReport report =
      Evaluate(ReadGroundTruth(dir / "gt.txt"),
               ReadResults(dir / ("res" + tag + ".txt")));
  std::ofstream out(dir / ("report" + tag + ".txt"), std::ios::binary);
  FormatMetricsReport(out, report);
}

int RunCli(const fs::path& dir, const std::string& args) {
#ifdef CBIOU_CLI_PATH
  const std::string cmd = "cd '" + dir.string() + "' && '" CBIOU_CLI_PATH "' " +
                          args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)dir;
  (void)args;
  return 0;
#endif
}

Outcome Determinism(const Dataset& suite) {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() /
                       ("cbiou_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  WriteDetections(dir / "det.txt", suite[0].detections);
  WriteGroundTruth(dir / "gt.txt", suite[0].ground_truth);

  TrackThenEval(dir, "1");
  TrackThenEval(dir, "2");
  out.Check(Slurp(dir / "res1.txt") == Slurp(dir / "res2.txt"),
            "results differ between runs");
  out.Check(Slurp(dir / "report1.txt") == Slurp(dir / "report2.txt"),
            "reports differ between runs");

#ifdef CBIOU_CLI_PATH
  for (const char* tag : {"a", "b"}) {
    const std::string t(tag);
    out.Check(RunCli(dir, "track --dets det.txt --out cli" + t + ".txt") == 0,
              "cli track failed");
    out.Check(RunCli(dir, "eval --gt gt.txt --res cli" + t + ".txt --report rep" +
                              t + ".txt") == 0,
              "cli eval failed");
  }
  out.Check(Slurp(dir / "clia.txt") == Slurp(dir / "clib.txt"),
            "cli results differ between runs");
  out.Check(Slurp(dir / "repa.txt") == Slurp(dir / "repb.txt"),
            "cli reports differ between runs");
  out.Check(Slurp(dir / "clia.txt") == Slurp(dir / "res1.txt"),
            "cli results differ from library results");
#endif
  fs::remove_all(dir);

  const std::vector<double> scales = ParseRange("0.1:0.7:0.1");
  out.Check(GridText(GridSearch(TrackerConfig{}, suite, scales, 1)) ==
                GridText(GridSearch(TrackerConfig{}, suite, scales, 4)),
            "parallel grid differs from serial");
  std::ostringstream serial, parallel;
  FormatCompareTable(serial, CompareVariants(TrackerConfig{}, suite, 1));
  FormatCompareTable(parallel, CompareVariants(TrackerConfig{}, suite, 4));
  out.Check(serial.str() == parallel.str(), "parallel compare differs from serial");
  if (out.pass) {
    out.detail = "track->eval byte-identical; grid and compare parallel == serial";
  }
  return out;
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;  // 0 = no runtime limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace cbiou

int main() {
  using cbiou::Outcome;
  const cbiou::Dataset suite = cbiou::IrregularMotionSuite();
  const std::vector<cbiou::Criterion> criteria = {
      {1, "Geometry exactness", 5, cbiou::GeometryExactness},
      {2, "Assignment optimality", 10, cbiou::AssignmentOptimality},
      {3, "Metrics fixtures", 5, cbiou::MetricsFixtures},
      {4, "Non-overlap rescue", 30, cbiou::NonOverlapRescue},
      {5, "Ablation ordering", 120, [&] { return cbiou::AblationOrdering(suite); }},
      {6, "Noise-robustness crossover", 180, cbiou::NoiseCrossover},
      {7, "Grid search shape", 0, [&] { return cbiou::GridShape(suite); }},
      {8, "Throughput", 0, cbiou::Throughput},
      {9, "End-to-end determinism", 0, [&] { return cbiou::Determinism(suite); }},
  };
  int failures = 0;
  for (const cbiou::Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += cbiou::Fmt(" [runtime %.1f s exceeds %.0f s]", seconds,
                                   c.limit_seconds);
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("[%s] %d %s (%.2f s): %s\n", outcome.pass ? "PASS" : "FAIL",
                c.number, c.name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
