// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/annotations.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "exprkit/error.hpp"

namespace exprkit {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(strip(item));
  return out;
}

} // namespace

AnnotationTrack parse_annotation_file(const std::string& text, const LabelSpace& space,
                                      const std::string& video_id) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty annotation file");
  const std::vector<std::string> header = split_csv(strip(line));
  if (header.size() != kNumClasses)
    throw FormatError("header has " + std::to_string(header.size()) + " names, expected 8");

  // header position -> canonical id; must be a permutation of the 8 names
  std::array<int, kNumClasses> remap{};
  std::array<bool, kNumClasses> seen{};
  for (int i = 0; i < kNumClasses; ++i) {
    const auto id = space.id_of(header[static_cast<std::size_t>(i)]);
    if (!id) throw FormatError("unknown class name in header: '" + header[i] + "'");
    if (seen[static_cast<std::size_t>(*id)])
      throw FormatError("duplicate class name in header: '" + header[i] + "'");
    seen[static_cast<std::size_t>(*id)] = true;
    remap[static_cast<std::size_t>(i)] = *id;
  }

  AnnotationTrack track;
  track.video_id = video_id;
  while (std::getline(in, line)) {
    const std::string s = strip(line);
    if (s.empty()) continue;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw FormatError("bad label line: '" + s + "'");
    if (v == kInvalidLabel) {
      track.labels.push_back(kInvalidLabel);
    } else if (v >= 0 && v < kNumClasses) {
      track.labels.push_back(remap[static_cast<std::size_t>(v)]);
    } else {
      throw FormatError("label out of range: " + std::to_string(v));
    }
  }
  if (track.labels.empty()) throw FormatError("annotation file has no data lines");
  return track;
}

std::string serialize_annotation(const AnnotationTrack& track, const LabelSpace& space,
                                 const std::vector<std::string>& header) {
  std::vector<std::string> names(header);
  if (names.empty())
    names.assign(space.classes().begin(), space.classes().end());
  if (names.size() != kNumClasses) throw FormatError("serialize header must list 8 names");

  // canonical id -> position in the requested header
  std::array<int, kNumClasses> inverse{};
  inverse.fill(-1);
  for (int pos = 0; pos < kNumClasses; ++pos) {
    const auto id = space.id_of(names[static_cast<std::size_t>(pos)]);
    if (!id) throw FormatError("unknown class name in header: '" + names[pos] + "'");
    inverse[static_cast<std::size_t>(*id)] = pos;
  }
  for (int id = 0; id < kNumClasses; ++id)
    if (inverse[static_cast<std::size_t>(id)] < 0)
      throw FormatError("serialize header is not a permutation of the class names");

  std::string out;
  for (int i = 0; i < kNumClasses; ++i) {
    if (i) out += ',';
    out += names[static_cast<std::size_t>(i)];
  }
  out += '\n';
  for (const int label : track.labels) {
    if (label == kInvalidLabel)
      out += "-1\n";
    else
      out += std::to_string(inverse[static_cast<std::size_t>(label)]) + "\n";
  }
  return out;
}

std::vector<AnnotationTrack> load_annotation_dir(const std::filesystem::path& split_dir,
                                                 const LabelSpace& space) {
  if (!std::filesystem::is_directory(split_dir))
    throw IOError("annotation directory not found: " + split_dir.string());
  std::map<std::string, std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(split_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    files[entry.path().stem().string()] = entry.path();
  }
  std::vector<AnnotationTrack> tracks;
  tracks.reserve(files.size());
  for (const auto& [video_id, path] : files) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    tracks.push_back(parse_annotation_file(ss.str(), space, video_id));
  }
  return tracks;
}

} // namespace exprkit
