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

#include "cbiou/mot_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <utility>

#include "cbiou/errors.h"

namespace cbiou {
namespace {

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

// One physical row split into columns, with its line number for errors.
class Row {
 public:
  Row(std::vector<std::string_view> fields, long line)
      : fields_(std::move(fields)), line_(line) {
    if (fields_.size() < 6 || fields_.size() > 10) {
      Fail("expected 6 to 10 comma-separated fields, got " +
           std::to_string(fields_.size()));
    }
  }

  std::size_t size() const { return fields_.size(); }
  long line() const { return line_; }

  double Real(std::size_t i, const char* name) const {
    const std::string_view f = fields_[i];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value)) {
      Fail(std::string("field '") + name + "' is not a finite number: '" +
           std::string(f) + "'");
    }
    return value;
  }

  double RealOr(std::size_t i, const char* name, double fallback) const {
    return i < fields_.size() ? Real(i, name) : fallback;
  }

  int Integer(std::size_t i, const char* name) const {
    const double value = Real(i, name);
    if (value != std::floor(value) || std::fabs(value) > 2e9) {
      Fail(std::string("field '") + name + "' is not an integer: '" +
           std::string(fields_[i]) + "'");
    }
    return static_cast<int>(value);
  }

  int Frame() const {
    const int frame = Integer(0, "frame");
    if (frame < 1) Fail("frame must be >= 1");
    return frame;
  }

  BoundingBox Box() const {
    const double x = Real(2, "x");
    const double y = Real(3, "y");
    const double w = Real(4, "w");
    const double h = Real(5, "h");
    if (!(w > 0.0) || !(h > 0.0)) {
      throw DataError("line " + std::to_string(line_) +
                      ": box extents must be positive (w=" +
                      std::string(fields_[4]) + ", h=" +
                      std::string(fields_[5]) + ")");
    }
    return BoundingBox(x, y, w, h);
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_) + ": " + what, line_);
  }

 private:
  std::vector<std::string_view> fields_;
  long line_;
};

template <typename Fn>
void ForEachRow(std::istream& in, Fn&& fn) {
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty()) continue;
    fn(Row(SplitFields(trimmed), number));
  }
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

template <typename Fn>
void WriteFile(const std::filesystem::path& path, Fn&& format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  format(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void PutBox(std::ostream& out, const BoundingBox& box) {
  out << FormatFixed2(box.x()) << ',' << FormatFixed2(box.y()) << ','
      << FormatFixed2(box.w()) << ',' << FormatFixed2(box.h());
}

// Tracks the line at which each (frame, id) first appeared.
class IdentityLedger {
 public:
  void Claim(int frame, int id, long line) {
    const auto [it, inserted] = seen_.emplace(std::pair{frame, id}, line);
    if (!inserted) {
      throw DataError("identity " + std::to_string(id) + " repeated in frame " +
                      std::to_string(frame) + " (lines " +
                      std::to_string(it->second) + " and " +
                      std::to_string(line) + ")");
    }
  }

 private:
  std::map<std::pair<int, int>, long> seen_;
};

}  // namespace

std::string FormatFixed2(double value) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%.2f", value);
  return std::string(buf, static_cast<std::size_t>(std::max(n, 0)));
}

DetectionSequence ParseDetections(std::istream& in) {
  DetectionSequence out;
  ForEachRow(in, [&](const Row& row) {
    const int frame = row.Frame();
    const BoundingBox box = row.Box();
    const double conf = row.RealOr(6, "conf", 1.0);
    out[frame].push_back({frame, box, conf});
  });
  return out;
}

DetectionSequence ReadDetections(const std::filesystem::path& path) {
  std::ifstream in = OpenIn(path);
  return ParseDetections(in);
}

SequenceAnnotations ParseGroundTruth(std::istream& in,
                                     std::optional<double> min_visibility) {
  SequenceAnnotations out;
  IdentityLedger ledger;
  ForEachRow(in, [&](const Row& row) {
    const int frame = row.Frame();
    const int id = row.Integer(1, "id");
    const BoundingBox box = row.Box();
    const double active = row.RealOr(6, "active", 1.0);
    const double visibility = row.RealOr(8, "visibility", 1.0);
    ledger.Claim(frame, id, row.line());
    if (active == 0.0) return;
    if (min_visibility && visibility < *min_visibility) return;
    out.Add(frame, id, box);
  });
  return out;
}

SequenceAnnotations ReadGroundTruth(const std::filesystem::path& path,
                                    std::optional<double> min_visibility) {
  std::ifstream in = OpenIn(path);
  return ParseGroundTruth(in, min_visibility);
}

SequenceAnnotations ParseResults(std::istream& in) {
  SequenceAnnotations out;
  IdentityLedger ledger;
  ForEachRow(in, [&](const Row& row) {
    const int frame = row.Frame();
    const int id = row.Integer(1, "id");
    const BoundingBox box = row.Box();
    row.RealOr(6, "conf", 1.0);
    ledger.Claim(frame, id, row.line());
    out.Add(frame, id, box);
  });
  return out;
}

SequenceAnnotations ReadResults(const std::filesystem::path& path) {
  std::ifstream in = OpenIn(path);
  return ParseResults(in);
}

void FormatResults(std::ostream& out, const std::vector<FrameOutput>& outputs) {
  std::vector<std::pair<int, const TrackRecord*>> rows;
  for (const FrameOutput& fo : outputs) {
    for (const TrackRecord& rec : fo.records) rows.emplace_back(fo.frame, &rec);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first
                              : a.second->track_id < b.second->track_id;
  });
  for (const auto& [frame, rec] : rows) {
    out << frame << ',' << rec->track_id << ',';
    PutBox(out, rec->box);
    out << ',' << FormatFixed2(rec->confidence) << ",-1,-1,-1\n";
  }
}

void WriteResults(const std::filesystem::path& path,
                  const std::vector<FrameOutput>& outputs) {
  WriteFile(path, [&](std::ostream& out) { FormatResults(out, outputs); });
}

void FormatDetections(std::ostream& out, const DetectionSequence& detections) {
  for (const auto& [frame, dets] : detections) {
    for (const Detection& det : dets) {
      out << frame << ",-1,";
      PutBox(out, det.box);
      out << ',' << FormatFixed2(det.confidence) << ",-1,-1,-1\n";
    }
  }
}

void WriteDetections(const std::filesystem::path& path,
                     const DetectionSequence& detections) {
  WriteFile(path, [&](std::ostream& out) { FormatDetections(out, detections); });
}

void FormatGroundTruth(std::ostream& out, const SequenceAnnotations& gt) {
  for (const auto& [frame, boxes] : gt.frames()) {
    std::vector<const Annotation*> sorted;
    for (const Annotation& a : boxes) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(),
              [](const Annotation* a, const Annotation* b) {
                return a->id < b->id;
              });
    for (const Annotation* a : sorted) {
      out << frame << ',' << a->id << ',';
      PutBox(out, a->box);
      out << ",1,1,1.00\n";
    }
  }
}

void WriteGroundTruth(const std::filesystem::path& path,
                      const SequenceAnnotations& gt) {
  WriteFile(path, [&](std::ostream& out) { FormatGroundTruth(out, gt); });
}

}  // namespace cbiou
