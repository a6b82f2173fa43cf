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


// Pipeline configuration: one `section.key = value` per line, '#' starts a
// comment. Angles are in degrees, lengths in meters.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "treeslam/forest_sim.hpp"
#include "treeslam/icp_global.hpp"
#include "treeslam/pair_selection.hpp"
#include "treeslam/slam_chain.hpp"

namespace treeslam::cli {

struct PipelineConfig {
  struct {
    double width = 180.0;
    double depth = 40.0;
    double mean_distance = 3.5;
    double registration_height = 1.3;
    double height_jitter = 0.3;
  } forest;
  struct {
    double half_angle_deg = 60.0;
    double range = 35.0;
    double noise = 0.07;
    double dropout = 0.15;
  } scan;
  struct {
    int frames = 200;
    double x0 = 10.0, y0 = 20.0;
    double x1 = 170.0, y1 = 20.0;
    double height = 0.0;
    double tilt_jitter_deg = 0.0;
  } path;
  struct {
    double outlier_ratio = 0.6;
    int max_iterations = 60;
    double tolerance = 1e-4;
    double drift_rotation_deg = 0.0;  // per-step yaw bias injected after matching
    double drift_translation = 0.0;   // per-step horizontal noise
  } slam;
  struct {
    int max_gap = 1000;
    double lambda_min = 0.2;
    int target_size = 40;
    double error_intercept = 0.3;
    double error_slope = 0.5;
    int exhaustive_limit = 2000;
    std::int64_t sample_budget = 2000000;
  } select;
  struct {
    std::string strategy = "medium_gaps_first";
  } order;
  struct {
    double lambda0 = 0.4;
    int patience = 10;
    std::string rule = "index";
    double rule_a = 1.0;
    double rule_b = 1.0;
  } improve;
  struct {
    std::string preset = "sparse-uniform";
    double sigma_t = 1.9;
    double sigma_r_deg = 3.7;
    double horizontal_zone_deg = 30.0;
    double tilt_zone_deg = 30.0;
    double box_x = 10.0, box_y = 10.0, box_z = 2.0;
    double optimality_gap = 0.2;
    std::int64_t max_nodes = 200000;
  } bnb;
  struct {
    double eps1 = 0.2;
    double eps2 = 10.0;
    bool volumetric = false;
    double r_alpha = 0.5;
    int min_points = 15;
    int worst_frames = 0;
  } metrics;
  struct {
    std::uint64_t seed = 1;
    int threads = 1;
  } run;
};

/// Parses config text over the defaults. `bnb.preset` is applied before the
/// other bnb keys regardless of line order. Throws InvalidConfig naming the
/// source and line for unknown keys or malformed values, and after
/// validation.
PipelineConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Every key with its resolved value; parse_config(to_text(c)) == c.
std::string to_text(const PipelineConfig &c);

/// Throws InvalidConfig, UnknownStrategy.
void validate(const PipelineConfig &c);

ForestSpec forest_spec(const PipelineConfig &c);
ScanSpec scan_spec(const PipelineConfig &c);
PathSpec path_spec(const PipelineConfig &c);
IcpOptions icp_options(const PipelineConfig &c);
SelectionConfig selection_config(const PipelineConfig &c);
ImproveConfig improve_config(const PipelineConfig &c);
OrderStrategy order_strategy(const PipelineConfig &c);
PowerRule power_rule(const PipelineConfig &c);
BnbConfig bnb_config(const PipelineConfig &c);

/// Independent stream seeds derived from run.seed.
enum class SeedStream : std::uint64_t { Forest = 1, Scan, Path, Drift, Order, Selection };
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index = 0);

}  // namespace treeslam::cli
