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

// cbiou: command-line front end for tracking, evaluation and the buffer-scale
// experiments.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbiou/errors.h"
#include "cbiou/experiment.h"
#include "cbiou/metrics.h"
#include "cbiou/mot_io.h"
#include "cbiou/synth.h"
#include "cbiou/tracker.h"

namespace cbiou {
namespace {

namespace fs = std::filesystem;

constexpr int kExitArgument = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;
constexpr int kExitGeneration = 5;

constexpr const char* kConfigEnv = "CBIOU_CONFIG";

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ArgumentError("config key '" + key + "' expects true or false, got '" +
                      text + "'");
}

double ParseDouble(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ArgumentError("config key '" + key + "' expects a number, got '" +
                      text + "'");
}

int ParseInt(const std::string& key, const std::string& text) {
  const double v = ParseDouble(key, text);
  if (v != static_cast<int>(v)) {
    throw ArgumentError("config key '" + key + "' expects an integer");
  }
  return static_cast<int>(v);
}

// Tracker settings as given on the command line; unset fields fall back to
// the config file, then to TrackerConfig defaults.
struct TrackerFlags {
  std::optional<double> b1, b2, min_sim, det_conf_min;
  std::optional<int> max_age, n_max;
  std::optional<std::string> sim;
  bool no_cascade = false;
  bool no_motion = false;

  void Register(CLI::App* cmd) {
    cmd->add_option("--b1", b1, "Buffer scale of the first matching round");
    cmd->add_option("--b2", b2, "Buffer scale of the second matching round");
    cmd->add_option("--max-age", max_age,
                    "Frames a track may stay unmatched before termination");
    cmd->add_option("--n-max", n_max, "Motion window bound (frame deltas)");
    cmd->add_option("--min-sim", min_sim, "Minimum similarity of a match");
    cmd->add_option("--det-conf-min", det_conf_min,
                    "Minimum detection confidence admitted");
    cmd->add_option("--sim", sim, "Similarity: iou, giou, diou or biou")
        ->check(CLI::IsMember({"iou", "giou", "diou", "biou"},
                              CLI::ignore_case));
    cmd->add_flag("--no-cascade", no_cascade, "Single matching round");
    cmd->add_flag("--no-motion", no_motion, "Disable motion estimation");
  }

  void Apply(TrackerConfig& c) const {
    if (b1) c.b1 = *b1;
    if (b2) c.b2 = *b2;
    if (max_age) c.max_age = *max_age;
    if (n_max) c.n_max = *n_max;
    if (min_sim) c.min_sim = *min_sim;
    if (det_conf_min) c.det_conf_min = *det_conf_min;
    if (sim) c.similarity = ParseSimilarityKind(*sim);
    if (no_cascade) c.cascade = false;
    if (no_motion) c.motion = false;
  }
};

// Applies one flat config-file key to the tracker settings. Returns false for
// keys that are not tracker fields.
bool ApplyTrackerKey(TrackerConfig& c, const std::string& key,
                     const std::string& value) {
  if (key == "b1") c.b1 = ParseDouble(key, value);
  else if (key == "b2") c.b2 = ParseDouble(key, value);
  else if (key == "max_age") c.max_age = ParseInt(key, value);
  else if (key == "n_max") c.n_max = ParseInt(key, value);
  else if (key == "min_sim") c.min_sim = ParseDouble(key, value);
  else if (key == "det_conf_min") c.det_conf_min = ParseDouble(key, value);
  else if (key == "similarity_kind") c.similarity = ParseSimilarityKind(value);
  else if (key == "cascade_enabled") c.cascade = ParseBool(key, value);
  else if (key == "motion_enabled") c.motion = ParseBool(key, value);
  else return false;
  return true;
}

// A subcommand plus the plumbing every command shares: --config, --manifest,
// and config-file fallbacks for its own options.
class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help,
          bool uses_tracker)
      : cmd_(app.add_subcommand(name, help)), uses_tracker_(uses_tracker) {
    cmd_->add_option("--config", config_path_,
                     "Flat key = value config file; flags override it")
        ->envname(kConfigEnv);
    cmd_->add_option("--manifest", manifest_path_,
                     "Manifest path (default: <primary output>.manifest.toml)");
    if (uses_tracker_) flags_.Register(cmd_);
  }
  virtual ~Command() = default;

  CLI::App* app() { return cmd_; }
  bool parsed() const { return cmd_->parsed(); }

  int Execute() {
    const auto start = Clock::now();
    TrackerConfig config;
    if (!config_path_.empty()) LoadConfigFile(config);
    flags_.Apply(config);
    if (uses_tracker_) config.Validate();
    RunManifest manifest(cmd_->get_name());
    Run(config, manifest);
    if (uses_tracker_) manifest.SetConfig(config);
    manifest.AddTiming("wall_seconds", SecondsSince(start));
    const fs::path path = manifest_path_.empty()
                              ? fs::path(PrimaryOutput() + ".manifest.toml")
                              : fs::path(manifest_path_);
    manifest.Write(path);
    return 0;
  }

 protected:
  virtual void Run(const TrackerConfig& config, RunManifest& manifest) = 0;
  // Path that the default manifest name derives from.
  virtual std::string PrimaryOutput() const = 0;

  // Throws ArgumentError naming the flag when `value` is empty.
  static void Require(const std::string& value, const char* flag) {
    if (value.empty()) throw ArgumentError(std::string(flag) + " is required");
  }

  CLI::App* cmd_;

 private:
  void LoadConfigFile(TrackerConfig& config) {
    if (!fs::exists(config_path_)) {
      throw IoError("config file not found: '" + config_path_ + "'");
    }
    std::vector<CLI::ConfigItem> items;
    try {
      items = CLI::ConfigTOML().from_file(config_path_);
    } catch (const CLI::Error& e) {
      throw DataError("cannot parse config '" + config_path_ + "': " + e.what());
    }
    for (const CLI::ConfigItem& item : items) {
      if (!item.parents.empty() || item.inputs.empty()) continue;
      const std::string value = item.inputs.front();
      if (uses_tracker_ && ApplyTrackerKey(config, item.name, value)) continue;
      std::string flag = item.name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      CLI::Option* opt = cmd_->get_option_no_throw("--" + flag);
      if (opt == nullptr || opt->count() > 0 || flag == "config" ||
          flag == "manifest") {
        continue;
      }
      for (const std::string& in : item.inputs) opt->add_result(in);
      try {
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw ArgumentError("config key '" + item.name + "': " + e.what());
      }
    }
  }

  std::string config_path_;
  std::string manifest_path_;
  bool uses_tracker_;
  TrackerFlags flags_;
};

class TrackCommand : public Command {
 public:
  explicit TrackCommand(CLI::App& app)
      : Command(app, "track", "Run the tracker over a detection file", true) {
    cmd_->add_option("--dets", dets_, "Detections (MOT format)");
    cmd_->add_option("--out", out_, "Results file to write");
    cmd_->add_option("--interpolate", interpolate_,
                     "Fill reported gaps up to this many frames (0 = off)");
  }

 protected:
  void Run(const TrackerConfig& config, RunManifest& manifest) override {
    Require(dets_, "--dets");
    Require(out_, "--out");
    const DetectionSequence dets = ReadDetections(dets_);
    const auto start = Clock::now();
    std::vector<FrameOutput> outputs = RunSequence(config, dets);
    if (interpolate_ > 0) outputs = InterpolateGaps(outputs, interpolate_);
    manifest.AddTiming("tracker_seconds", SecondsSince(start));
    WriteResults(out_, outputs);
    manifest.Set("dets", dets_);
    manifest.Set("out", out_);
    manifest.Set("interpolate", interpolate_);
  }
  std::string PrimaryOutput() const override { return out_; }

 private:
  std::string dets_;
  std::string out_;
  int interpolate_ = 0;
};

class EvalCommand : public Command {
 public:
  explicit EvalCommand(CLI::App& app)
      : Command(app, "eval", "Score a results file against ground truth",
                false) {
    cmd_->add_option("--gt", gt_, "Ground truth (MOT format)");
    cmd_->add_option("--res", res_, "Tracker results (MOT format)");
    cmd_->add_option("--report", report_, "Key/value report to write");
    cmd_->add_option("--min-visibility", min_visibility_,
                     "Drop ground-truth rows below this visibility");
    cmd_->add_flag("--pretty", pretty_, "Also print a table to stdout");
  }

 protected:
  void Run(const TrackerConfig&, RunManifest& manifest) override {
    Require(gt_, "--gt");
    Require(res_, "--res");
    Require(report_, "--report");
    const SequenceAnnotations gt = ReadGroundTruth(gt_, min_visibility_);
    const SequenceAnnotations res = ReadResults(res_);
    const MetricsReport report = Evaluate(gt, res);
    WriteText(report_, [&](std::ostream& out) {
      FormatMetricsReport(out, report);
    });
    WriteText(report_ + ".alpha.csv", [&](std::ostream& out) {
      FormatAlphaTable(out, report);
    });
    if (pretty_) {
      std::cout << "HOTA   DetA   AssA   MOTA   IDF1\n";
      for (double v : {report.hota.hota, report.hota.deta, report.hota.assa,
                       report.clear.mota, report.identity.idf1}) {
        std::cout << std::left << std::setw(7) << Percent1(v);
      }
      std::cout << '\n';
    }
    manifest.Set("gt", gt_);
    manifest.Set("res", res_);
    manifest.Set("report", report_);
    if (min_visibility_) manifest.Set("min_visibility", *min_visibility_);
  }
  std::string PrimaryOutput() const override { return report_; }

 public:
  static void WriteText(const fs::path& path,
                        const std::function<void(std::ostream&)>& fill) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    fill(out);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  }

 private:
  std::string gt_;
  std::string res_;
  std::string report_;
  std::optional<double> min_visibility_;
  bool pretty_ = false;
};

class GridCommand : public Command {
 public:
  explicit GridCommand(CLI::App& app)
      : Command(app, "grid", "Search buffer-scale pairs b1 < b2 by HOTA",
                true) {
    cmd_->add_option("--dets", dets_, "Detection file or directory");
    cmd_->add_option("--gt", gt_, "Ground-truth file or directory");
    cmd_->add_option("--range", range_, "start:stop:step of buffer scales");
    cmd_->add_option("--report", report_, "Summary report to write");
    cmd_->add_option("--jobs", jobs_, "Worker threads")->check(CLI::PositiveNumber);
  }

 protected:
  void Run(const TrackerConfig& config, RunManifest& manifest) override {
    Require(dets_, "--dets");
    Require(gt_, "--gt");
    Require(report_, "--report");
    const Dataset data = LoadDataset(dets_, gt_);
    const GridResult grid = GridSearch(config, data, ParseRange(range_), jobs_);
    EvalCommand::WriteText(report_, [&](std::ostream& out) {
      FormatGridSummary(out, grid);
    });
    EvalCommand::WriteText(report_ + ".matrix.csv", [&](std::ostream& out) {
      FormatGridMatrix(out, grid);
    });
    manifest.Set("dets", dets_);
    manifest.Set("gt", gt_);
    manifest.Set("range", range_);
    manifest.Set("report", report_);
    manifest.Set("jobs", jobs_);
  }
  std::string PrimaryOutput() const override { return report_; }

 private:
  std::string dets_;
  std::string gt_;
  std::string range_ = "0.1:0.7:0.1";
  std::string report_;
  int jobs_ = 1;
};

class CompareCommand : public Command {
 public:
  explicit CompareCommand(CLI::App& app)
      : Command(app, "compare",
                "Run the IoU/GIoU/DIoU/BIoU/C-BIoU ablation variants", true) {
    cmd_->add_option("--dets", dets_, "Detection file or directory");
    cmd_->add_option("--gt", gt_, "Ground-truth file or directory");
    cmd_->add_option("--report", report_, "CSV table to write");
    cmd_->add_option("--jobs", jobs_, "Worker threads")->check(CLI::PositiveNumber);
    cmd_->add_flag("--pretty", pretty_, "Also print the table to stdout");
  }

 protected:
  void Run(const TrackerConfig& config, RunManifest& manifest) override {
    Require(dets_, "--dets");
    Require(gt_, "--gt");
    Require(report_, "--report");
    const Dataset data = LoadDataset(dets_, gt_);
    const std::vector<VariantResult> rows = CompareVariants(config, data, jobs_);
    EvalCommand::WriteText(report_, [&](std::ostream& out) {
      FormatCompareTable(out, rows);
    });
    if (pretty_) {
      std::cout << std::left << std::setw(15) << "Tracker" << "C.M. Mo.  HOTA  "
                << "DetA  AssA  MOTA  IDF1\n";
      for (const VariantResult& row : rows) {
        const MetricsReport& r = row.report;
        std::cout << std::left << std::setw(15) << row.variant.name
                  << std::setw(5) << (row.variant.config.cascade ? "x" : "-")
                  << std::setw(5) << (row.variant.config.motion ? "x" : "-");
        for (double v : {r.hota.hota, r.hota.deta, r.hota.assa, r.clear.mota,
                         r.identity.idf1}) {
          std::cout << std::setw(6) << Percent1(v);
        }
        std::cout << '\n';
      }
    }
    for (const VariantResult& row : rows) {
      // Bare TOML keys allow only [A-Za-z0-9_-].
      std::string slug;
      for (char c : row.variant.name) {
        slug += std::isalnum(static_cast<unsigned char>(c))
                    ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                    : '-';
      }
      const std::string p = "variant." + slug + ".";
      manifest.Set(p + "similarity_kind",
                   std::string(ToString(row.variant.config.similarity)));
      manifest.Set(p + "cascade_enabled", row.variant.config.cascade);
      manifest.Set(p + "motion_enabled", row.variant.config.motion);
      manifest.Set(p + "min_sim", row.variant.config.min_sim);
    }
    manifest.Set("dets", dets_);
    manifest.Set("gt", gt_);
    manifest.Set("report", report_);
    manifest.Set("jobs", jobs_);
  }
  std::string PrimaryOutput() const override { return report_; }

 private:
  std::string dets_;
  std::string gt_;
  std::string report_;
  int jobs_ = 1;
  bool pretty_ = false;
};

class PerturbCommand : public Command {
 public:
  explicit PerturbCommand(CLI::App& app)
      : Command(app, "perturb",
                "Turn ground truth into detections with FN/FP noise", false) {
    cmd_->add_option("--gt", gt_, "Ground truth (MOT format)");
    cmd_->add_option("--ratio", ratio_, "Noise ratio in [0, 1)");
    cmd_->add_option("--seed", seed_, "Random seed");
    cmd_->add_option("--out", out_, "Detection file to write");
    cmd_->add_flag("--stratified", stratified_,
                   "Remove detections frame by frame");
  }

 protected:
  void Run(const TrackerConfig&, RunManifest& manifest) override {
    Require(gt_, "--gt");
    Require(out_, "--out");
    const SequenceAnnotations gt = ReadGroundTruth(gt_);
    const NoiseSpec noise{ratio_, seed_, stratified_};
    WriteDetections(out_, Perturb(DetectionsFromGroundTruth(gt), noise, gt));
    manifest.Set("gt", gt_);
    manifest.Set("ratio", ratio_);
    manifest.Set("seed", std::to_string(seed_));
    manifest.Set("out", out_);
    manifest.Set("stratified", stratified_);
  }
  std::string PrimaryOutput() const override { return out_; }

 private:
  std::string gt_;
  double ratio_ = 0.0;
  std::uint64_t seed_ = 0;
  std::string out_;
  bool stratified_ = false;
};

class BenchCommand : public Command {
 public:
  explicit BenchCommand(CLI::App& app)
      : Command(app, "bench", "Time the tracker on a synthetic workload",
                true) {
    cmd_->add_option("--objects", objects_, "Objects per frame")
        ->check(CLI::NonNegativeNumber);
    cmd_->add_option("--frames", frames_, "Frames")->check(CLI::NonNegativeNumber);
    cmd_->add_option("--seed", seed_, "Random seed");
    cmd_->add_option("--report", report_,
                     "Report file (default: print to stdout only)");
  }

 protected:
  void Run(const TrackerConfig& config, RunManifest& manifest) override {
    const BenchResult bench = RunBenchmark(config, objects_, frames_, seed_);
    FormatBenchReport(std::cout, bench);
    if (!report_.empty()) {
      EvalCommand::WriteText(report_, [&](std::ostream& out) {
        FormatBenchReport(out, bench);
      });
    }
    manifest.Set("objects", objects_);
    manifest.Set("frames", frames_);
    manifest.Set("seed", std::to_string(seed_));
    if (!report_.empty()) manifest.Set("report", report_);
    manifest.AddTiming("tracker_seconds", bench.seconds);
  }
  std::string PrimaryOutput() const override {
    return report_.empty() ? std::string("cbiou-bench") : report_;
  }

 private:
  int objects_ = 20;
  int frames_ = 1000;
  std::uint64_t seed_ = 0;
  std::string report_;
};

class SynthCommand : public Command {
 public:
  explicit SynthCommand(CLI::App& app)
      : Command(app, "synth",
                "Generate a synthetic sequence (ground truth + detections)",
                false) {
    cmd_->add_option("--num-objects", spec_.num_objects);
    cmd_->add_option("--num-frames", spec_.num_frames);
    cmd_->add_option("--arena-width", spec_.arena_width);
    cmd_->add_option("--arena-height", spec_.arena_height);
    cmd_->add_option("--speed-min", spec_.speed.min, "Pixels per frame");
    cmd_->add_option("--speed-max", spec_.speed.max, "Pixels per frame");
    cmd_->add_option("--turn-prob", spec_.turn_prob,
                     "Per-frame probability of a new heading/speed");
    cmd_->add_option("--size-min", spec_.size.min, "Box side, pixels");
    cmd_->add_option("--size-max", spec_.size.max, "Box side, pixels");
    cmd_->add_option("--occlusion-prob", occlusion_.probability,
                     "Per-frame probability of a detection dropout burst");
    cmd_->add_option("--occlusion-min-frames", occlusion_.min_frames);
    cmd_->add_option("--occlusion-max-frames", occlusion_.max_frames);
    cmd_->add_option("--seed", spec_.seed);
    cmd_->add_option("--gt", gt_, "Ground-truth file to write");
    cmd_->add_option("--dets", dets_, "Oracle detection file to write");
  }

 protected:
  void Run(const TrackerConfig&, RunManifest& manifest) override {
    Require(gt_, "--gt");
    Require(dets_, "--dets");
    ScenarioSpec spec = spec_;
    if (occlusion_.probability > 0.0) spec.occlusion = occlusion_;
    const Scenario scenario = Generate(spec);
    WriteGroundTruth(gt_, scenario.ground_truth);
    WriteDetections(dets_, scenario.detections);
    manifest.Set("num_objects", spec.num_objects);
    manifest.Set("num_frames", spec.num_frames);
    manifest.Set("arena_width", spec.arena_width);
    manifest.Set("arena_height", spec.arena_height);
    manifest.Set("speed_min", spec.speed.min);
    manifest.Set("speed_max", spec.speed.max);
    manifest.Set("turn_prob", spec.turn_prob);
    manifest.Set("size_min", spec.size.min);
    manifest.Set("size_max", spec.size.max);
    manifest.Set("occlusion_prob", occlusion_.probability);
    manifest.Set("occlusion_min_frames", occlusion_.min_frames);
    manifest.Set("occlusion_max_frames", occlusion_.max_frames);
    manifest.Set("seed", std::to_string(spec.seed));
    manifest.Set("gt", gt_);
    manifest.Set("dets", dets_);
  }
  std::string PrimaryOutput() const override { return gt_; }

 private:
  ScenarioSpec spec_;
  OcclusionSpec occlusion_;
  std::string gt_;
  std::string dets_;
};

int Main(int argc, char** argv) {
  CLI::App app{"Cascaded buffered-IoU multi-object tracker"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<TrackCommand>(app));
  commands.push_back(std::make_unique<EvalCommand>(app));
  commands.push_back(std::make_unique<GridCommand>(app));
  commands.push_back(std::make_unique<CompareCommand>(app));
  commands.push_back(std::make_unique<PerturbCommand>(app));
  commands.push_back(std::make_unique<BenchCommand>(app));
  commands.push_back(std::make_unique<SynthCommand>(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgument;
  }

  try {
    for (auto& command : commands) {
      if (command->parsed()) return command->Execute();
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGeneration;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgument;
  } catch (const SequencingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgument;
  }
  return kExitArgument;
}

}  // namespace
}  // namespace cbiou

int main(int argc, char** argv) { return cbiou::Main(argc, argv); }
