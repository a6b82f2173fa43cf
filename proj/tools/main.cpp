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


// treeslam command line: generate | slam | improve | metrics.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "pipeline.hpp"
#include "treeslam/error.hpp"
#include "treeslam/io.hpp"

namespace {

using namespace treeslam;
using namespace treeslam::cli;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = ".";
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("--config", c.config, "config file of `section.key = value` lines")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "overrides run.seed");
  cmd->add_option("--threads", c.threads, "overrides run.threads; 1 is the reference mode")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "existing output directory");
}

PipelineConfig resolve(const Common &c, CLI::App *cmd) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : parse_config(read_text(c.config), c.config);
  if (cmd->count("--seed")) cfg.run.seed = c.seed;
  if (cmd->count("--threads")) cfg.run.threads = c.threads;
  validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sparse tree-map SLAM with self-correcting pose chains"};
  app.require_subcommand(1);

  Common common;
  std::string frames, poses, steps;
  bool timings = false, dimension = false;

  auto *gen = app.add_subcommand("generate", "simulate a forest, a path and its frames");
  add_common(gen, common);

  auto *slam = app.add_subcommand("slam", "sequential matching into an initial pose chain");
  add_common(slam, common);
  slam->add_option("--frames", frames, "frame file")->required()->check(CLI::ExistingFile);

  auto *imp = app.add_subcommand("improve", "select extra match pairs and correct the chain");
  add_common(imp, common);
  imp->add_option("--frames", frames, "frame file")->required()->check(CLI::ExistingFile);
  imp->add_option("--poses", poses, "pose file")->required()->check(CLI::ExistingFile);
  imp->add_option("--steps", steps, "step error file")->check(CLI::ExistingFile);
  imp->add_flag("--timings", timings, "add wall-clock times to stats.txt");

  auto *met = app.add_subcommand("metrics", "blur ratio, cluster RMSE and dimension of a map");
  add_common(met, common);
  met->add_option("--frames", frames, "frame file")->required()->check(CLI::ExistingFile);
  met->add_option("--poses", poses, "pose file")->required()->check(CLI::ExistingFile);
  met->add_flag("--dimension", dimension, "report the box-counting fit quality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const std::filesystem::path out = common.out;
    if (gen->parsed()) {
      cmd_generate(resolve(common, gen), out);
    } else if (slam->parsed()) {
      cmd_slam(frames, resolve(common, slam), out);
    } else if (imp->parsed()) {
      for (const auto &w : cmd_improve(frames, poses, steps, resolve(common, imp), out, timings))
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else if (met->parsed()) {
      const PipelineConfig cfg = resolve(common, met);
      cmd_metrics(frames, poses, cfg, out, dimension);
      std::fputs(read_text(out / "metrics.txt").c_str(), stdout);
    }
  } catch (const Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
