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


/**
 * \file io.hpp
 * \brief Line-oriented text formats for frames, poses, corrections, pairs,
 * metrics and cell dumps.
 *
 * Numbers are written with 12 significant digits. Readers skip blank lines
 * and lines starting with '#', and report the offending line number on
 * malformed input.
 */
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "treeslam/map_quality.hpp"
#include "treeslam/pair_selection.hpp"
#include "treeslam/point_cloud.hpp"
#include "treeslam/slam_chain.hpp"

namespace treeslam {

/// `frame_id x y z` per point. Frames are returned sorted by id with points in
/// file order; every frame gets the given cone. Throws IoError, ParseError.
std::vector<Frame> read_frames(const std::filesystem::path &file, const ViewCone &cone = {});
void write_frames(const std::filesystem::path &file, std::span<const Frame> frames);

struct PoseEntry {
  int id = 0;
  RigidTransform pose;
};

/// `frame_id` followed by 12 decimals (R row-major, then p) per line.
std::vector<PoseEntry> read_poses(const std::filesystem::path &file);
void write_poses(const std::filesystem::path &file, std::span<const RigidTransform> totals,
                 std::span<const Frame> frames);

/// Chain from a pose file; ids must match the frames one to one and in order.
/// Step errors default to zero. Throws LengthMismatch.
Chain read_chain(const std::filesystem::path &file, std::span<const Frame> frames);

/// `frame_id error` per line, first frame 0.
void write_step_errors(const std::filesystem::path &file, const Chain &c,
                       std::span<const Frame> frames);
/// Fills c.step_errors from a step error file written for the same frames.
void read_step_errors(const std::filesystem::path &file, Chain &c, std::span<const Frame> frames);

/// `j i rule Δt` per applied correction, chain indices.
void write_corrections(const std::filesystem::path &file, std::span<const CorrectionRecord> log);

/// `j i lambda e status` per pair.
void write_pairs(const std::filesystem::path &file, std::span<const MatchPair> pairs);
std::vector<MatchPair> read_pairs(const std::filesystem::path &file);

/// `x y count` per occupied cell.
void write_cells(const std::filesystem::path &file, std::span<const CellCount> cells);

/// Whole file as text; throws IoError.
std::string read_text(const std::filesystem::path &file);
void write_text(const std::filesystem::path &file, const std::string &text);

/// %.12g with negative zero printed as 0.
std::string format_number(double v);

}  // namespace treeslam
