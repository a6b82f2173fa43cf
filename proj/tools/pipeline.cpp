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


#include "pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "treeslam/error.hpp"
#include "treeslam/io.hpp"
#include "treeslam/parallel.hpp"

namespace treeslam::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kDeg = std::numbers::pi / 180.0;
// Scales of the box-counting fit between eps1 and eps2.
constexpr int kDimensionScales = 7;

void require_dir(const fs::path &dir) {
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::IoError, "output directory " + dir.string() + " does not exist");
}

std::string kv(const char *key, double v) { return std::string(key) + "=" + format_number(v); }

std::vector<double> dimension_scales(const PipelineConfig &c) {
  std::vector<double> s;
  const double lo = std::log(c.metrics.eps1), hi = std::log(c.metrics.eps2);
  for (int k = 0; k < kDimensionScales; ++k)
    s.push_back(std::exp(lo + (hi - lo) * k / (kDimensionScales - 1)));
  return s;
}

}  // namespace

Generated generate(const PipelineConfig &c) {
  Generated g;
  g.trees = generate_forest(forest_spec(c));
  const std::vector<Vec3> waypoints{{c.path.x0, c.path.y0, 0.0}, {c.path.x1, c.path.y1, 0.0}};
  g.poses = simulate_path(waypoints, c.path.frames, path_spec(c));
  const ScanSpec spec = scan_spec(c);
  g.frames.resize(g.poses.size());
  parallel_for(g.poses.size(), c.run.threads, [&](std::size_t f) {
    g.frames[f] = scan(g.trees, g.poses[f], spec, derive_seed(c.run.seed, SeedStream::Scan, f),
                       static_cast<int>(f));
  });
  g.ground_truth = ground_truth_chain(g.poses);
  return g;
}

Chain initial_chain(std::span<const Frame> frames, const PipelineConfig &c) {
  Chain chain = run_initial_slam(frames, c.slam.outlier_ratio, icp_options(c), c.run.threads);
  if (c.slam.drift_rotation_deg != 0.0 || c.slam.drift_translation != 0.0)
    chain = perturb_odometry(chain, c.slam.drift_rotation_deg * kDeg, c.slam.drift_translation,
                             derive_seed(c.run.seed, SeedStream::Drift));
  return chain;
}

ImproveRun improve_chain(const Chain &chain, std::span<const Frame> frames,
                         const PipelineConfig &c) {
  ImproveRun run;
  const ImproveConfig cfg = improve_config(c);
  run.candidates = candidate_pairs(chain, frames, cfg.selection);
  if (run.candidates.empty()) {
    run.warnings.push_back("no candidate pairs; chain left unchanged");
    run.result.chain = chain;
    run.result.stats.beta_trace.push_back(
        blur_ratio(build_map(frames, chain), cfg.eps1, cfg.eps2));
    return run;
  }
  const auto sampled = poisson_sample(run.candidates, c.select.target_size);
  run.selected = order_pairs(sampled, order_strategy(c));
  for (auto &p : run.selected) p.status = MatchStatus::Selected;
  run.result = improve(chain, frames, run.selected, cfg, bnb_config(c), power_rule(c));
  return run;
}

MapMetrics measure(std::span<const Frame> frames, const Chain &chain, const PipelineConfig &c) {
  MapMetrics m;
  const FusedMap map = build_map(frames, chain);
  m.beta = blur_ratio(map, c.metrics.eps1, c.metrics.eps2, c.metrics.volumetric);
  const auto clusters = cluster_map(map, c.metrics.r_alpha, c.metrics.min_points);
  m.clusters = static_cast<int>(clusters.size());
  m.discarded = discarded_fraction(map, clusters);
  m.e_c = clusters.empty() ? std::nan("") : cluster_rmse(clusters);
  const auto scales = dimension_scales(c);
  const DimensionFit fit = box_dimension(map, scales);
  m.dimension = fit.dimension;
  m.r_squared = fit.r_squared;
  m.weights = frame_weights(map, clusters, static_cast<int>(frames.size()));
  if (c.metrics.worst_frames > 0) m.worst = remove_worst_frames(m.weights, c.metrics.worst_frames);
  m.cells = cell_counts(map, c.metrics.eps1);
  return m;
}

std::string format_metrics(const MapMetrics &m, std::span<const Frame> frames, bool dimension) {
  std::string out = kv("beta", m.beta) + " " + kv("e_C", m.e_c) + " " + kv("d", m.dimension) +
                    " clusters=" + std::to_string(m.clusters) + "\n";
  out += kv("discarded", m.discarded) + "\n";
  if (dimension) out += kv("r2", m.r_squared) + "\n";
  if (!m.worst.empty()) {
    out += "worst_frames=";
    for (std::size_t k = 0; k < m.worst.size(); ++k)
      out += (k ? "," : "") + std::to_string(frames[m.worst[k]].id);
    out += "\n";
  }
  return out;
}

std::string format_stats(const ImproveRun &run, const PipelineConfig &c, bool timings) {
  const auto &st = run.result.stats;
  std::string out;
  out += "strategy=" + c.order.strategy + " rule=" + c.improve.rule + "\n";
  out += "candidates=" + std::to_string(run.candidates.size()) +
         " selected=" + std::to_string(run.selected.size()) + "\n";
  out += "icp_calls=" + std::to_string(st.icp_calls) +
         " go_icp_calls=" + std::to_string(st.go_icp_calls) +
         " corrections=" + std::to_string(st.corrections) +
         " stopped_by_patience=" + (st.stopped_by_patience ? "1" : "0") + "\n";
  if (!st.beta_trace.empty())
    out += kv("beta_initial", st.beta_trace.front()) + " " + kv("beta_final", st.beta_trace.back()) +
           "\n";
  if (timings) out += kv("icp_seconds", st.icp_seconds) + " " + kv("go_icp_seconds", st.go_icp_seconds) + "\n";
  out += "# j i method e_before e_after lambda applied beta";
  out += timings ? " seconds\n" : "\n";
  for (const auto &p : st.pairs) {
    out += std::to_string(p.j) + " " + std::to_string(p.i) + " " + p.method + " " +
           format_number(p.error_before) + " " + format_number(p.error_after) + " " +
           format_number(p.lambda) + " " + (p.applied ? "1" : "0") + " " + format_number(p.beta);
    if (timings) out += " " + format_number(p.seconds);
    out += "\n";
  }
  return out;
}

std::string format_manifest(const PipelineConfig &c, const Generated &g) {
  std::string out;
  out += "run_seed=" + std::to_string(c.run.seed) + "\n";
  out += "forest_seed=" + std::to_string(derive_seed(c.run.seed, SeedStream::Forest)) + "\n";
  out += "path_seed=" + std::to_string(derive_seed(c.run.seed, SeedStream::Path)) + "\n";
  out += "scan_seed[f]=derive(run_seed, scan, f)\n";
  out += "trees=" + std::to_string(g.trees.size()) + "\n";
  out += "frames=" + std::to_string(g.frames.size()) + "\n";
  std::size_t points = 0;
  for (const auto &f : g.frames) points += f.points.size();
  out += "points=" + std::to_string(points) + "\n";
  out += "files=frames.txt ground_truth.txt trees.txt config.txt\n";
  return out;
}

void cmd_generate(const PipelineConfig &c, const fs::path &out_dir) {
  require_dir(out_dir);
  const Generated g = generate(c);
  write_frames(out_dir / "frames.txt", g.frames);
  write_poses(out_dir / "ground_truth.txt", g.ground_truth.totals, g.frames);
  std::string trees;
  for (const auto &t : g.trees)
    trees += format_number(t.x()) + " " + format_number(t.y()) + " " + format_number(t.z()) + "\n";
  write_text(out_dir / "trees.txt", trees);
  write_text(out_dir / "manifest.txt", format_manifest(c, g));
  write_text(out_dir / "config.txt", to_text(c));
}

void cmd_slam(const fs::path &frames_file, const PipelineConfig &c, const fs::path &out_dir) {
  require_dir(out_dir);
  const auto frames = read_frames(frames_file, scan_spec(c).cone);
  const Chain chain = initial_chain(frames, c);
  write_poses(out_dir / "poses.txt", chain.totals, frames);
  write_step_errors(out_dir / "step_errors.txt", chain, frames);
  write_text(out_dir / "config.txt", to_text(c));
}

std::vector<std::string> cmd_improve(const fs::path &frames_file, const fs::path &poses_file,
                                     const fs::path &steps_file, const PipelineConfig &c,
                                     const fs::path &out_dir, bool timings) {
  require_dir(out_dir);
  const auto frames = read_frames(frames_file, scan_spec(c).cone);
  Chain chain = read_chain(poses_file, frames);
  if (!steps_file.empty()) read_step_errors(steps_file, chain, frames);
  const ImproveRun run = improve_chain(chain, frames, c);
  write_poses(out_dir / "poses.txt", run.result.chain.totals, frames);
  write_step_errors(out_dir / "step_errors.txt", run.result.chain, frames);
  write_corrections(out_dir / "corrections.txt", run.result.chain.log);
  write_pairs(out_dir / "pairs.txt", run.result.pairs);
  write_text(out_dir / "stats.txt", format_stats(run, c, timings));
  write_text(out_dir / "config.txt", to_text(c));
  return run.warnings;
}

void cmd_metrics(const fs::path &frames_file, const fs::path &poses_file,
                 const PipelineConfig &c, const fs::path &out_dir, bool dimension) {
  require_dir(out_dir);
  const auto frames = read_frames(frames_file, scan_spec(c).cone);
  const Chain chain = read_chain(poses_file, frames);
  const MapMetrics m = measure(frames, chain, c);
  write_text(out_dir / "metrics.txt", format_metrics(m, frames, dimension));
  write_cells(out_dir / "cells.txt", m.cells);
  std::string weights;
  for (std::size_t k = 0; k < m.weights.size(); ++k)
    weights += std::to_string(frames[k].id) + " " + format_number(m.weights[k]) + "\n";
  write_text(out_dir / "frame_weights.txt", weights);
  write_text(out_dir / "config.txt", to_text(c));
}

}  // namespace treeslam::cli
