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

#include "cbiou/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "cbiou/errors.h"
#include "cbiou/mot_io.h"
#include "cbiou/synth.h"

namespace cbiou {
namespace fs = std::filesystem;
namespace {

std::vector<fs::path> TextFiles(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void RequireExists(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("no such file or directory: '" + p.string() + "'");
}

double ParseNumber(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ArgumentError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string Quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::uint64_t Fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Dataset LoadDataset(const fs::path& detections, const fs::path& ground_truth) {
  RequireExists(detections);
  RequireExists(ground_truth);
  Dataset data;
  if (fs::is_directory(detections) != fs::is_directory(ground_truth)) {
    throw ArgumentError(
        "detections and ground truth must both be files or both directories");
  }
  if (!fs::is_directory(detections)) {
    data.push_back({detections.stem().string(), ReadDetections(detections),
                    ReadGroundTruth(ground_truth)});
    return data;
  }
  for (const fs::path& det : TextFiles(detections)) {
    const fs::path gt = ground_truth / det.filename();
    if (!fs::exists(gt)) continue;
    data.push_back(
        {det.stem().string(), ReadDetections(det), ReadGroundTruth(gt)});
  }
  if (data.empty()) {
    throw DataError("no sequence found in both '" + detections.string() +
                    "' and '" + ground_truth.string() + "'");
  }
  return data;
}

SequenceAnnotations ToAnnotations(const std::vector<FrameOutput>& outputs) {
  SequenceAnnotations out;
  for (const FrameOutput& fo : outputs) {
    out.AddFrame(fo.frame);
    for (const TrackRecord& rec : fo.records) {
      out.Add(fo.frame, rec.track_id, rec.box);
    }
  }
  return out;
}

MetricsReport EvaluateConfig(const TrackerConfig& config,
                             const Dataset& dataset) {
  std::vector<MetricsReport> reports;
  reports.reserve(dataset.size());
  for (const SequencePair& seq : dataset) {
    reports.push_back(Evaluate(seq.ground_truth,
                               ToAnnotations(RunSequence(config, seq.detections))));
  }
  return CombineReports(reports);
}

void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> MakeRange(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) ||
      !(step > 0.0) || stop < start) {
    throw ArgumentError("range needs finite start <= stop and step > 0");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    values.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) /
                     1e9);
  }
  return values;
}

std::vector<double> ParseRange(std::string_view spec) {
  const std::size_t a = spec.find(':');
  const std::size_t b =
      a == std::string_view::npos ? a : spec.find(':', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    throw ArgumentError("range must look like start:stop:step, got '" +
                        std::string(spec) + "'");
  }
  return MakeRange(ParseNumber(spec.substr(0, a)),
                   ParseNumber(spec.substr(a + 1, b - a - 1)),
                   ParseNumber(spec.substr(b + 1)));
}

GridResult GridSearch(const TrackerConfig& base, const Dataset& dataset,
                      const std::vector<double>& scales, int jobs) {
  if (dataset.empty()) throw DataError("grid search needs at least one sequence");
  GridResult grid;
  grid.scales = scales;
  std::sort(grid.scales.begin(), grid.scales.end());
  grid.scales.erase(std::unique(grid.scales.begin(), grid.scales.end()),
                    grid.scales.end());
  for (std::size_t i = 0; i < grid.scales.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.scales.size(); ++j) {
      grid.cells.push_back({grid.scales[i], grid.scales[j], {}});
    }
  }
  // Slot n holds the IoU baseline.
  const std::size_t n = grid.cells.size();
  ParallelFor(n + 1, jobs, [&](std::size_t k) {
    TrackerConfig config = base;
    if (k == n) {
      config.b1 = 0.0;
      config.b2 = 0.0;
      config.cascade = false;
      config.similarity = SimilarityKind::kBiou;
      grid.iou_baseline = EvaluateConfig(config, dataset);
      return;
    }
    config.b1 = grid.cells[k].b1;
    config.b2 = grid.cells[k].b2;
    config.cascade = true;
    config.similarity = SimilarityKind::kBiou;
    grid.cells[k].report = EvaluateConfig(config, dataset);
  });
  for (std::size_t k = 1; k < n; ++k) {
    if (grid.cells[k].report.hota.hota > grid.cells[grid.best].report.hota.hota) {
      grid.best = k;
    }
  }
  return grid;
}

void FormatGridSummary(std::ostream& out, const GridResult& grid) {
  out << "combinations = " << grid.cells.size() << '\n';
  if (!grid.cells.empty()) {
    const GridCell& best = grid.cells[grid.best];
    out << "best_b1 = " << FormatReal(best.b1) << '\n'
        << "best_b2 = " << FormatReal(best.b2) << '\n'
        << "best_HOTA = " << Percent1(best.report.hota.hota) << '\n'
        << "best_DetA = " << Percent1(best.report.hota.deta) << '\n'
        << "best_AssA = " << Percent1(best.report.hota.assa) << '\n'
        << "best_MOTA = " << Percent1(best.report.clear.mota) << '\n'
        << "best_IDF1 = " << Percent1(best.report.identity.idf1) << '\n';
  }
  out << "iou_baseline_HOTA = " << Percent1(grid.iou_baseline.hota.hota) << '\n';
}

void FormatGridMatrix(std::ostream& out, const GridResult& grid) {
  out << "b2\\b1";
  for (double b1 : grid.scales) out << ',' << FormatReal(b1);
  out << '\n';
  for (double b2 : grid.scales) {
    out << FormatReal(b2);
    for (double b1 : grid.scales) {
      out << ',';
      if (!(b1 < b2)) continue;
      for (const GridCell& cell : grid.cells) {
        if (cell.b1 == b1 && cell.b2 == b2) {
          out << Percent1(cell.report.hota.hota);
          break;
        }
      }
    }
    out << '\n';
  }
}

std::vector<Variant> AblationVariants(const TrackerConfig& base) {
  auto single = [&](std::string name, SimilarityKind kind) {
    TrackerConfig c = base;
    c.similarity = kind;
    c.cascade = false;
    c.motion = false;
    return Variant{std::move(name), c};
  };
  std::vector<Variant> variants = {
      single("IoU", SimilarityKind::kIou),
      single("GIoU", SimilarityKind::kGiou),
      single("DIoU", SimilarityKind::kDiou),
      single("BIoU", SimilarityKind::kBiou),
  };
  TrackerConfig cascaded = base;
  cascaded.similarity = SimilarityKind::kBiou;
  cascaded.cascade = true;
  cascaded.motion = false;
  variants.push_back({"C-BIoU", cascaded});
  cascaded.motion = true;
  variants.push_back({"C-BIoU+motion", cascaded});
  return variants;
}

std::vector<VariantResult> CompareVariants(const TrackerConfig& base,
                                           const Dataset& dataset, int jobs) {
  if (dataset.empty()) throw DataError("compare needs at least one sequence");
  const std::vector<Variant> variants = AblationVariants(base);
  std::vector<VariantResult> rows(variants.size());
  ParallelFor(variants.size(), jobs, [&](std::size_t i) {
    rows[i] = {variants[i], EvaluateConfig(variants[i].config, dataset)};
  });
  return rows;
}

void FormatCompareTable(std::ostream& out,
                        const std::vector<VariantResult>& rows) {
  out << "tracker,cascade,motion,HOTA,DetA,AssA,MOTA,IDF1\n";
  for (const VariantResult& row : rows) {
    const MetricsReport& r = row.report;
    out << row.variant.name << ',' << (row.variant.config.cascade ? 1 : 0)
        << ',' << (row.variant.config.motion ? 1 : 0) << ','
        << Percent1(r.hota.hota) << ',' << Percent1(r.hota.deta) << ','
        << Percent1(r.hota.assa) << ',' << Percent1(r.clear.mota) << ','
        << Percent1(r.identity.idf1) << '\n';
  }
}

std::string Percent1(double ratio) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%.1f", ratio * 100.0);
  return std::string(buf, static_cast<std::size_t>(std::max(n, 0)));
}

void FormatMetricsReport(std::ostream& out, const MetricsReport& report) {
  out << "HOTA = " << Percent1(report.hota.hota) << '\n'
      << "DetA = " << Percent1(report.hota.deta) << '\n'
      << "AssA = " << Percent1(report.hota.assa) << '\n'
      << "MOTA = " << Percent1(report.clear.mota) << '\n'
      << "IDF1 = " << Percent1(report.identity.idf1) << '\n'
      << "TP = " << report.clear.tp << '\n'
      << "FN = " << report.clear.fn << '\n'
      << "FP = " << report.clear.fp << '\n'
      << "IDSW = " << report.clear.idsw << '\n'
      << "GT = " << report.clear.gt_total << '\n'
      << "IDTP = " << report.identity.idtp << '\n'
      << "IDFN = " << report.identity.idfn << '\n'
      << "IDFP = " << report.identity.idfp << '\n';
}

void FormatAlphaTable(std::ostream& out, const MetricsReport& report) {
  out << "alpha,HOTA,DetA,AssA\n";
  for (const AlphaScores& s : report.hota.per_alpha) {
    char alpha[16];
    std::snprintf(alpha, sizeof(alpha), "%.2f", s.alpha);
    out << alpha << ',' << Percent1(s.hota) << ',' << Percent1(s.deta) << ','
        << Percent1(s.assa) << '\n';
  }
}

BenchResult RunBenchmark(const TrackerConfig& config, int objects, int frames,
                         std::uint64_t seed) {
  ScenarioSpec spec;
  spec.num_objects = objects;
  spec.num_frames = frames;
  spec.speed = {2.0, 12.0};
  spec.turn_prob = 0.05;
  spec.size = {30.0, 80.0};
  spec.seed = seed;
  const Scenario scenario = Generate(spec);

  BenchResult result;
  result.objects = objects;
  result.frames = frames;
  result.seed = seed;
  Tracker tracker(config);
  std::vector<FrameOutput> outputs;
  outputs.reserve(static_cast<std::size_t>(std::max(frames, 0)));
  std::chrono::steady_clock::duration busy{};
  std::size_t updates = 0;
  for (const auto& [frame, dets] : scenario.detections) {
    const auto start = std::chrono::steady_clock::now();
    FrameOutput out = tracker.Step(frame, dets);
    busy += std::chrono::steady_clock::now() - start;
    updates += tracker.tracks().size();
    outputs.push_back(std::move(out));
  }
  result.seconds = std::chrono::duration<double>(busy).count();
  const double secs = std::max(result.seconds, 1e-9);
  result.fps = static_cast<double>(outputs.size()) / secs;
  result.object_updates_per_second = static_cast<double>(updates) / secs;
  std::ostringstream text;
  FormatResults(text, outputs);
  for (const FrameOutput& fo : outputs) result.records += fo.records.size();
  result.output_digest = Fnv1a(text.str());
  return result;
}

void FormatBenchReport(std::ostream& out, const BenchResult& bench) {
  char digest[32];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(bench.output_digest));
  out << "objects = " << bench.objects << '\n'
      << "frames = " << bench.frames << '\n'
      << "seed = " << bench.seed << '\n'
      << "tracker_seconds = " << FormatReal(bench.seconds) << '\n'
      << "fps = " << FormatReal(std::round(bench.fps * 10.0) / 10.0) << '\n'
      << "object_updates_per_second = "
      << FormatReal(std::round(bench.object_updates_per_second)) << '\n'
      << "records = " << bench.records << '\n'
      << "output_digest = \"" << digest << "\"\n";
}

RunManifest::RunManifest(std::string command) {
  Set("command", std::move(command));
  Set("version", std::string(kVersion));
}

void RunManifest::SetRaw(std::string key, std::string text) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(text);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(text));
}

void RunManifest::Set(std::string key, std::string value) {
  SetRaw(std::move(key), Quote(value));
}

void RunManifest::Set(std::string key, double value) {
  SetRaw(std::move(key), FormatReal(value));
}

void RunManifest::Set(std::string key, int value) {
  SetRaw(std::move(key), std::to_string(value));
}

void RunManifest::Set(std::string key, bool value) {
  SetRaw(std::move(key), value ? "true" : "false");
}

void RunManifest::SetConfig(const TrackerConfig& config) {
  Set("b1", config.b1);
  Set("b2", config.b2);
  Set("max_age", config.max_age);
  Set("n_max", config.n_max);
  Set("min_sim", config.min_sim);
  Set("det_conf_min", config.det_conf_min);
  Set("similarity_kind", std::string(ToString(config.similarity)));
  Set("cascade_enabled", config.cascade);
  Set("motion_enabled", config.motion);
}

void RunManifest::AddTiming(std::string key, double seconds) {
  timings_.emplace_back(std::move(key), seconds);
}

void RunManifest::Format(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  if (!timings_.empty()) {
    out << "\n[timing]\n";
    for (const auto& [k, v] : timings_) out << k << " = " << FormatReal(v) << '\n';
  }
}

void RunManifest::Write(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  Format(out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string FormatReal(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, ptr);
  // Keep TOML readers from seeing an integer where a float was meant.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace cbiou
