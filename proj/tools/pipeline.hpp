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


// Pipeline stages behind the generate | slam | improve | metrics
// subcommands. The compute functions are pure given (config, inputs); the
// cmd_* wrappers add file input and output.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "treeslam/map_quality.hpp"

namespace treeslam::cli {

struct Generated {
  std::vector<Vec3> trees;
  std::vector<RigidTransform> poses;  // scanner -> world
  std::vector<Frame> frames;
  Chain ground_truth;
};

Generated generate(const PipelineConfig &c);

/// Sequential matching, then the configured drift if any.
Chain initial_chain(std::span<const Frame> frames, const PipelineConfig &c);

struct ImproveRun {
  std::vector<MatchPair> candidates;
  std::vector<MatchPair> selected;  // in application order
  ImproveResult result;
  std::vector<std::string> warnings;
};

/// Candidate screening, Poisson-disk selection, ordering and the correction
/// loop. An empty candidate set leaves the chain unchanged with a warning.
ImproveRun improve_chain(const Chain &chain, std::span<const Frame> frames,
                         const PipelineConfig &c);

struct MapMetrics {
  double beta = 0.0;
  double e_c = 0.0;
  double dimension = 0.0;
  double r_squared = 0.0;
  int clusters = 0;
  double discarded = 0.0;
  std::vector<double> weights;  // per frame
  std::vector<int> worst;       // frame indices, worst first
  std::vector<CellCount> cells;
};

MapMetrics measure(std::span<const Frame> frames, const Chain &chain, const PipelineConfig &c);

std::string format_metrics(const MapMetrics &m, std::span<const Frame> frames, bool dimension);
std::string format_stats(const ImproveRun &run, const PipelineConfig &c, bool timings);
std::string format_manifest(const PipelineConfig &c, const Generated &g);

// File-level commands. out_dir must exist; every command writes config.txt.
void cmd_generate(const PipelineConfig &c, const std::filesystem::path &out_dir);
void cmd_slam(const std::filesystem::path &frames_file, const PipelineConfig &c,
              const std::filesystem::path &out_dir);
/// Returns the warnings of the run.
std::vector<std::string> cmd_improve(const std::filesystem::path &frames_file,
                                     const std::filesystem::path &poses_file,
                                     const std::filesystem::path &steps_file,
                                     const PipelineConfig &c,
                                     const std::filesystem::path &out_dir, bool timings);
void cmd_metrics(const std::filesystem::path &frames_file,
                 const std::filesystem::path &poses_file, const PipelineConfig &c,
                 const std::filesystem::path &out_dir, bool dimension);

}  // namespace treeslam::cli
