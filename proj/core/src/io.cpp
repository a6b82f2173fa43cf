// Copyright 2026, The treeslam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "treeslam/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "treeslam/error.hpp"

namespace treeslam {

namespace {

using Path = std::filesystem::path;

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

[[noreturn]] void parse_fail(const Path &file, int line, const std::string &what) {
  throw Error(ErrorCode::ParseError, file.string() + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T number(std::string_view tok, const Path &file, int line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_fail(file, line, "not a number: '" + std::string(tok) + "'");
  return v;
}

// Calls body(tokens, line_number) for every data line.
template <typename F>
void for_each_line(const Path &file, F &&body) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = tokens(line);
    if (t.empty() || t[0].front() == '#') continue;
    body(t, n);
  }
}

std::ofstream open_out(const Path &file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + file.string());
  return out;
}

void check_ids(const std::vector<PoseEntry> &poses, std::span<const Frame> frames,
               const Path &file) {
  if (poses.size() != frames.size())
    throw Error(ErrorCode::LengthMismatch, file.string() + ": " + std::to_string(poses.size()) +
                                               " poses for " + std::to_string(frames.size()) +
                                               " frames");
  for (std::size_t k = 0; k < poses.size(); ++k)
    if (poses[k].id != frames[k].id)
      throw Error(ErrorCode::LengthMismatch,
                  file.string() + ": pose id " + std::to_string(poses[k].id) +
                      " does not match frame id " + std::to_string(frames[k].id));
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::vector<Frame> read_frames(const Path &file, const ViewCone &cone) {
  std::map<int, Frame> by_id;
  for_each_line(file, [&](const auto &t, int n) {
    if (t.size() != 4) parse_fail(file, n, "expected 'frame_id x y z'");
    const int id = number<int>(t[0], file, n);
    const Vec3 p(number<double>(t[1], file, n), number<double>(t[2], file, n),
                 number<double>(t[3], file, n));
    if (!p.allFinite()) parse_fail(file, n, "non-finite coordinate");
    Frame &f = by_id[id];
    f.id = id;
    f.cone = cone;
    f.points.push_back(p);
  });
  std::vector<Frame> out;
  out.reserve(by_id.size());
  for (auto &[id, f] : by_id) out.push_back(std::move(f));
  return out;
}

void write_frames(const Path &file, std::span<const Frame> frames) {
  auto out = open_out(file);
  for (const auto &f : frames)
    for (const auto &p : f.points)
      out << f.id << ' ' << format_number(p.x()) << ' ' << format_number(p.y()) << ' '
          << format_number(p.z()) << '\n';
}

std::vector<PoseEntry> read_poses(const Path &file) {
  std::vector<PoseEntry> out;
  for_each_line(file, [&](const auto &t, int n) {
    if (t.size() != 13) parse_fail(file, n, "expected 'frame_id' and 12 numbers");
    std::array<double, 12> v{};
    for (int k = 0; k < 12; ++k) v[k] = number<double>(t[k + 1], file, n);
    PoseEntry e;
    e.id = number<int>(t[0], file, n);
    try {
      e.pose = deserialize(v);
    } catch (const Error &err) {
      parse_fail(file, n, err.what());
    }
    out.push_back(e);
  });
  return out;
}

void write_poses(const Path &file, std::span<const RigidTransform> totals,
                 std::span<const Frame> frames) {
  if (totals.size() != frames.size())
    throw Error(ErrorCode::LengthMismatch, "one pose per frame required");
  auto out = open_out(file);
  for (std::size_t k = 0; k < totals.size(); ++k)
    out << frames[k].id << ' ' << serialize(totals[k]) << '\n';
}

Chain read_chain(const Path &file, std::span<const Frame> frames) {
  const auto poses = read_poses(file);
  check_ids(poses, frames, file);
  Chain c;
  for (const auto &e : poses) c.totals.push_back(e.pose);
  c.step_errors.assign(c.totals.size(), 0.0);
  return c;
}

void write_step_errors(const Path &file, const Chain &c, std::span<const Frame> frames) {
  if (static_cast<std::size_t>(c.size()) != frames.size())
    throw Error(ErrorCode::LengthMismatch, "one step error per frame required");
  auto out = open_out(file);
  for (int k = 0; k < c.size(); ++k) {
    const double e = k < static_cast<int>(c.step_errors.size()) ? c.step_errors[k] : 0.0;
    out << frames[k].id << ' ' << format_number(e) << '\n';
  }
}

void read_step_errors(const Path &file, Chain &c, std::span<const Frame> frames) {
  std::vector<double> errors;
  std::size_t k = 0;
  for_each_line(file, [&](const auto &t, int n) {
    if (t.size() != 2) parse_fail(file, n, "expected 'frame_id error'");
    const int id = number<int>(t[0], file, n);
    if (k >= frames.size() || frames[k].id != id)
      parse_fail(file, n, "frame id " + std::to_string(id) + " out of order");
    errors.push_back(number<double>(t[1], file, n));
    ++k;
  });
  if (errors.size() != frames.size() || static_cast<int>(errors.size()) != c.size())
    throw Error(ErrorCode::LengthMismatch, file.string() + ": step error count mismatch");
  c.step_errors = std::move(errors);
}

void write_corrections(const Path &file, std::span<const CorrectionRecord> log) {
  auto out = open_out(file);
  for (const auto &r : log)
    out << r.j << ' ' << r.i << ' ' << to_string(r.rule) << ' ' << serialize(r.delta) << '\n';
}

void write_pairs(const Path &file, std::span<const MatchPair> pairs) {
  auto out = open_out(file);
  for (const auto &p : pairs)
    out << p.j << ' ' << p.i << ' ' << format_number(p.lambda) << ' ' << format_number(p.error)
        << ' ' << to_string(p.status) << '\n';
}

std::vector<MatchPair> read_pairs(const Path &file) {
  std::vector<MatchPair> out;
  for_each_line(file, [&](const auto &t, int n) {
    if (t.size() != 5) parse_fail(file, n, "expected 'j i lambda e status'");
    MatchPair p;
    p.j = number<int>(t[0], file, n);
    p.i = number<int>(t[1], file, n);
    p.lambda = number<double>(t[2], file, n);
    p.error = number<double>(t[3], file, n);
    const std::string_view s = t[4];
    if (s == "candidate") p.status = MatchStatus::Candidate;
    else if (s == "selected") p.status = MatchStatus::Selected;
    else if (s == "improved") p.status = MatchStatus::Improved;
    else if (s == "rejected") p.status = MatchStatus::Rejected;
    else parse_fail(file, n, "unknown status '" + std::string(s) + "'");
    out.push_back(p);
  });
  return out;
}

void write_cells(const Path &file, std::span<const CellCount> cells) {
  auto out = open_out(file);
  for (const auto &c : cells)
    out << format_number(c.x) << ' ' << format_number(c.y) << ' ' << c.count << '\n';
}

std::string read_text(const Path &file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const Path &file, const std::string &text) {
  auto out = open_out(file);
  out << text;
}

}  // namespace treeslam
