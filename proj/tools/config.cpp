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


#include "config.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "treeslam/error.hpp"

namespace treeslam::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Target = std::variant<double *, int *, std::int64_t *, std::uint64_t *, bool *, std::string *>;

struct Field {
  std::string_view key;
  Target target;
};

template <typename C>
std::vector<Field> fields(C &c) {
  return {
      {"forest.width", &c.forest.width},
      {"forest.depth", &c.forest.depth},
      {"forest.mean_distance", &c.forest.mean_distance},
      {"forest.registration_height", &c.forest.registration_height},
      {"forest.height_jitter", &c.forest.height_jitter},
      {"scan.half_angle_deg", &c.scan.half_angle_deg},
      {"scan.range", &c.scan.range},
      {"scan.noise", &c.scan.noise},
      {"scan.dropout", &c.scan.dropout},
      {"path.frames", &c.path.frames},
      {"path.x0", &c.path.x0},
      {"path.y0", &c.path.y0},
      {"path.x1", &c.path.x1},
      {"path.y1", &c.path.y1},
      {"path.height", &c.path.height},
      {"path.tilt_jitter_deg", &c.path.tilt_jitter_deg},
      {"slam.outlier_ratio", &c.slam.outlier_ratio},
      {"slam.max_iterations", &c.slam.max_iterations},
      {"slam.tolerance", &c.slam.tolerance},
      {"slam.drift_rotation_deg", &c.slam.drift_rotation_deg},
      {"slam.drift_translation", &c.slam.drift_translation},
      {"select.max_gap", &c.select.max_gap},
      {"select.lambda_min", &c.select.lambda_min},
      {"select.target_size", &c.select.target_size},
      {"select.error_intercept", &c.select.error_intercept},
      {"select.error_slope", &c.select.error_slope},
      {"select.exhaustive_limit", &c.select.exhaustive_limit},
      {"select.sample_budget", &c.select.sample_budget},
      {"order.strategy", &c.order.strategy},
      {"improve.lambda0", &c.improve.lambda0},
      {"improve.patience", &c.improve.patience},
      {"improve.rule", &c.improve.rule},
      {"improve.rule_a", &c.improve.rule_a},
      {"improve.rule_b", &c.improve.rule_b},
      {"bnb.preset", &c.bnb.preset},
      {"bnb.sigma_t", &c.bnb.sigma_t},
      {"bnb.sigma_r_deg", &c.bnb.sigma_r_deg},
      {"bnb.horizontal_zone_deg", &c.bnb.horizontal_zone_deg},
      {"bnb.tilt_zone_deg", &c.bnb.tilt_zone_deg},
      {"bnb.box_x", &c.bnb.box_x},
      {"bnb.box_y", &c.bnb.box_y},
      {"bnb.box_z", &c.bnb.box_z},
      {"bnb.optimality_gap", &c.bnb.optimality_gap},
      {"bnb.max_nodes", &c.bnb.max_nodes},
      {"metrics.eps1", &c.metrics.eps1},
      {"metrics.eps2", &c.metrics.eps2},
      {"metrics.volumetric", &c.metrics.volumetric},
      {"metrics.r_alpha", &c.metrics.r_alpha},
      {"metrics.min_points", &c.metrics.min_points},
      {"metrics.worst_frames", &c.metrics.worst_frames},
      {"run.seed", &c.run.seed},
      {"run.threads", &c.run.threads},
  };
}

std::string_view trim(std::string_view s) {
  const auto blank = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T &out) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return false;
  out = v;
  return true;
}

bool assign(const Target &t, std::string_view value) {
  return std::visit(
      [&](auto *p) -> bool {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (value.empty()) return false;
          *p = std::string(value);
          return true;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") return *p = true, true;
          if (value == "false" || value == "0") return *p = false, true;
          return false;
        } else if constexpr (std::is_same_v<T, double>) {
          return parse_number(value, *p) && std::isfinite(*p);
        } else {
          return parse_number(value, *p);
        }
      },
      t);
}

std::string render(const Target &t) {
  return std::visit(
      [](auto *p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else {
          // Shortest representation that reads back to the same value.
          char buf[64];
          const auto r = std::to_chars(buf, buf + sizeof(buf), *p);
          return std::string(buf, r.ptr);
        }
      },
      t);
}

void load_preset(PipelineConfig &c, std::string_view name) {
  BnbConfig b;
  if (name == "sparse-uniform") b = sparse_uniform_preset();
  else if (name == "general") b = general_preset();
  else throw Error(ErrorCode::InvalidConfig, "unknown bnb preset '" + std::string(name) + "'");
  c.bnb.preset = std::string(name);
  c.bnb.sigma_t = b.sigma_t;
  c.bnb.sigma_r_deg = b.sigma_r / kDeg;
  c.bnb.horizontal_zone_deg = b.horizontal_zone / kDeg;
  c.bnb.tilt_zone_deg = b.tilt_zone / kDeg;
  c.bnb.box_x = b.translation_box.x();
  c.bnb.box_y = b.translation_box.y();
  c.bnb.box_z = b.translation_box.z();
  c.bnb.optimality_gap = b.optimality_gap;
  c.bnb.max_nodes = b.max_nodes;
}

void require(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

}  // namespace

PipelineConfig parse_config(std::string_view text, std::string_view source) {
  struct Line {
    int number;
    std::string_view key, value;
  };
  std::vector<Line> lines;
  int number = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text.remove_prefix(end == std::string_view::npos ? text.size() : end + 1);
    ++number;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(number) + ": ";
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig, where + "expected 'section.key = value'");
    lines.push_back({number, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }

  PipelineConfig c;
  for (const auto &l : lines)
    if (l.key == "bnb.preset") load_preset(c, l.value);

  const auto table = fields(c);
  for (const auto &l : lines) {
    const std::string where = std::string(source) + ":" + std::to_string(l.number) + ": ";
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field &f) { return f.key == l.key; });
    if (it == table.end())
      throw Error(ErrorCode::InvalidConfig, where + "unknown key '" + std::string(l.key) + "'");
    if (!assign(it->target, l.value))
      throw Error(ErrorCode::InvalidConfig,
                  where + "bad value '" + std::string(l.value) + "' for " + std::string(l.key));
  }
  validate(c);
  return c;
}

std::string to_text(const PipelineConfig &c) {
  PipelineConfig copy = c;
  std::string out;
  for (const auto &f : fields(copy)) {
    out += f.key;
    out += " = ";
    out += render(f.target);
    out += '\n';
  }
  return out;
}

void validate(const PipelineConfig &c) {
  require(c.forest.width > 0 && c.forest.depth > 0, "forest extents must be positive");
  require(c.forest.mean_distance > 0, "forest.mean_distance must be positive");
  require(c.forest.height_jitter >= 0, "forest.height_jitter must be non-negative");
  require(c.scan.half_angle_deg > 0 && c.scan.half_angle_deg <= 180,
          "scan.half_angle_deg must lie in (0, 180]");
  require(c.scan.range > 0, "scan.range must be positive");
  require(c.scan.noise >= 0, "scan.noise must be non-negative");
  require(c.scan.dropout >= 0 && c.scan.dropout < 1, "scan.dropout must lie in [0, 1)");
  require(c.path.frames >= 2, "path.frames must be at least 2");
  require(c.path.tilt_jitter_deg >= 0, "path.tilt_jitter_deg must be non-negative");
  require(c.slam.outlier_ratio >= 0 && c.slam.outlier_ratio < 1,
          "slam.outlier_ratio must lie in [0, 1)");
  require(c.slam.max_iterations >= 1, "slam.max_iterations must be positive");
  require(c.slam.tolerance >= 0, "slam.tolerance must be non-negative");
  require(c.slam.drift_translation >= 0, "slam.drift_translation must be non-negative");
  require(c.select.max_gap >= 1, "select.max_gap must be positive");
  require(c.select.target_size >= 1, "select.target_size must be positive");
  require(c.select.exhaustive_limit >= 0, "select.exhaustive_limit must be non-negative");
  require(c.select.sample_budget >= 1, "select.sample_budget must be positive");
  require(c.improve.patience >= 0, "improve.patience must be non-negative (0 disables)");
  require(c.improve.rule_a >= 0 && c.improve.rule_b >= 0, "improve.rule_a/b must be non-negative");
  require(c.bnb.sigma_t > 0 && c.bnb.sigma_r_deg > 0, "bnb granularities must be positive");
  require(c.bnb.horizontal_zone_deg >= 0 && c.bnb.tilt_zone_deg >= 0,
          "bnb zones must be non-negative");
  require(c.bnb.box_x >= 0 && c.bnb.box_y >= 0 && c.bnb.box_z >= 0,
          "bnb translation box must be non-negative");
  require(c.bnb.optimality_gap >= 0, "bnb.optimality_gap must be non-negative");
  require(c.bnb.max_nodes >= 1, "bnb.max_nodes must be positive");
  require(c.metrics.eps1 > 0 && c.metrics.eps1 < c.metrics.eps2,
          "metrics scales need 0 < eps1 < eps2");
  require(c.metrics.r_alpha > 0, "metrics.r_alpha must be positive");
  require(c.metrics.min_points >= 1, "metrics.min_points must be positive");
  require(c.metrics.worst_frames >= 0, "metrics.worst_frames must be non-negative");
  require(c.run.threads >= 1, "run.threads must be positive");
  parse_order(c.order.strategy);
  parse_power_rule(c.improve.rule);
  if (c.bnb.preset != "sparse-uniform" && c.bnb.preset != "general")
    throw Error(ErrorCode::InvalidConfig, "unknown bnb preset '" + c.bnb.preset + "'");
}

ForestSpec forest_spec(const PipelineConfig &c) {
  ForestSpec s;
  s.width = c.forest.width;
  s.depth = c.forest.depth;
  s.target_mean_distance = c.forest.mean_distance;
  s.registration_height = c.forest.registration_height;
  s.height_jitter = c.forest.height_jitter;
  s.seed = derive_seed(c.run.seed, SeedStream::Forest);
  return s;
}

ScanSpec scan_spec(const PipelineConfig &c) {
  ScanSpec s;
  s.cone.half_angle = c.scan.half_angle_deg * kDeg;
  s.cone.range = c.scan.range;
  s.noise = c.scan.noise;
  s.dropout = c.scan.dropout;
  return s;
}

PathSpec path_spec(const PipelineConfig &c) {
  PathSpec s;
  s.tilt_jitter = c.path.tilt_jitter_deg * kDeg;
  s.height = c.path.height;
  s.seed = derive_seed(c.run.seed, SeedStream::Path);
  return s;
}

IcpOptions icp_options(const PipelineConfig &c) {
  IcpOptions o;
  o.outlier_ratio = c.slam.outlier_ratio;
  o.max_iterations = c.slam.max_iterations;
  o.tolerance = c.slam.tolerance;
  return o;
}

SelectionConfig selection_config(const PipelineConfig &c) {
  SelectionConfig s;
  s.max_gap = c.select.max_gap;
  s.lambda_min = c.select.lambda_min;
  s.target_size = c.select.target_size;
  s.error_intercept = c.select.error_intercept;
  s.error_slope = c.select.error_slope;
  s.outlier_ratio = c.slam.outlier_ratio;
  s.exhaustive_limit = c.select.exhaustive_limit;
  s.sample_budget = static_cast<std::size_t>(c.select.sample_budget);
  s.seed = derive_seed(c.run.seed, SeedStream::Selection);
  s.threads = c.run.threads;
  return s;
}

ImproveConfig improve_config(const PipelineConfig &c) {
  ImproveConfig i;
  i.selection = selection_config(c);
  i.lambda0 = c.improve.lambda0;
  i.patience = c.improve.patience;
  i.eps1 = c.metrics.eps1;
  i.eps2 = c.metrics.eps2;
  i.icp = icp_options(c);
  return i;
}

OrderStrategy order_strategy(const PipelineConfig &c) {
  return {parse_order(c.order.strategy), derive_seed(c.run.seed, SeedStream::Order)};
}

PowerRule power_rule(const PipelineConfig &c) {
  return {parse_power_rule(c.improve.rule), c.improve.rule_a, c.improve.rule_b};
}

BnbConfig bnb_config(const PipelineConfig &c) {
  BnbConfig b;
  b.sigma_t = c.bnb.sigma_t;
  b.sigma_r = c.bnb.sigma_r_deg * kDeg;
  b.horizontal_zone = c.bnb.horizontal_zone_deg * kDeg;
  b.tilt_zone = c.bnb.tilt_zone_deg * kDeg;
  b.translation_box = Vec3(c.bnb.box_x, c.bnb.box_y, c.bnb.box_z);
  b.optimality_gap = c.bnb.optimality_gap;
  b.max_nodes = c.bnb.max_nodes;
  b.icp = icp_options(c);
  return b;
}

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index) {
  // splitmix64 finaliser over (seed, stream, index).
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(stream) * 0xBF58476D1CE4E5B9ull +
                    index * 0x94D049BB133111EBull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace treeslam::cli
