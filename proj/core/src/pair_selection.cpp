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

#include "treeslam/pair_selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "treeslam/error.hpp"
#include "treeslam/map_quality.hpp"
#include "treeslam/parallel.hpp"

namespace treeslam {

namespace {

using Vec2 = Eigen::Vector2d;

bool lex_less(const Vec2 &a, const Vec2 &b) {
  return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

Vec2 round_to(const Vec2 &a, double eps) {
  return {std::round(a.x() / eps) * eps, std::round(a.y() / eps) * eps};
}

bool by_j_then_i(const MatchPair &a, const MatchPair &b) {
  return a.j != b.j ? a.j < b.j : a.i < b.i;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double overlap_at(const RigidTransform &t_ij, const Frame &fi, const Frame &fj) {
  return overlap_ratio({t_ij, fi.cone}, {RigidTransform::identity(), fj.cone});
}

}  // namespace

std::string_view to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::Candidate: return "candidate";
    case MatchStatus::Selected: return "selected";
    case MatchStatus::Improved: return "improved";
    case MatchStatus::Rejected: return "rejected";
  }
  return "candidate";
}

bool passes_gate(double error, double lambda, const SelectionConfig &cfg) {
  return error < cfg.error_intercept + lambda * cfg.error_slope;
}

std::vector<MatchPair> candidate_pairs(const Chain &c, std::span<const Frame> frames,
                                       const SelectionConfig &cfg) {
  const int n = c.size();
  if (static_cast<int>(frames.size()) != n)
    throw Error(ErrorCode::LengthMismatch, "one frame per chain pose required");

  std::vector<std::pair<int, int>> todo;
  if (n <= cfg.exhaustive_limit) {
    for (int i = 1; i < n; ++i)
      for (int j = std::max(0, i - cfg.max_gap); j < i; ++j) todo.emplace_back(i, j);
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::set<std::pair<int, int>> picked;
    const std::size_t budget = cfg.sample_budget;
    for (std::size_t k = 0; k < 4 * budget && picked.size() < budget; ++k) {
      const int i = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
      const int span = std::min(i, cfg.max_gap);
      const int j = i - 1 - static_cast<int>(rng() % static_cast<std::uint64_t>(span));
      picked.emplace(i, j);
    }
    todo.assign(picked.begin(), picked.end());
  }

  std::vector<IndexedCloud> placed(n);
  std::vector<std::vector<Vec3>> world(n);
  parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t l) {
    world[l] = transform_points(frames[l].points, c.totals[l]);
    placed[l] = IndexedCloud(world[l]);
  });

  std::vector<MatchPair> result(todo.size());
  std::vector<char> keep(todo.size(), 0);
  parallel_for(todo.size(), cfg.threads, [&](std::size_t k) {
    const auto [i, j] = todo[k];
    if (frames[i].points.empty() || frames[j].points.empty()) return;
    const double lambda =
        overlap_ratio({c.totals[i], frames[i].cone}, {c.totals[j], frames[j].cone});
    if (!(lambda > cfg.lambda_min)) return;
    const double e = match_error(placed[j], world[i], cfg.outlier_ratio).error;
    if (!passes_gate(e, lambda, cfg)) return;
    result[k] = {i, j, lambda, e, MatchStatus::Candidate};
    keep[k] = 1;
  });

  std::vector<MatchPair> out;
  for (std::size_t k = 0; k < todo.size(); ++k)
    if (keep[k]) out.push_back(result[k]);
  return out;
}

std::vector<Vec2> grid_round(std::span<const Vec2> points, double eps) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto &p : points) out.push_back(round_to(p, eps));
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<MatchPair> poisson_sample(std::span<const MatchPair> candidates, int m) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyCandidateSet, "no candidate pairs");
  m = std::max(m, 1);

  std::vector<Vec2> pts;
  pts.reserve(candidates.size());
  for (const auto &c : candidates) pts.emplace_back(c.i, c.j);
  const std::size_t distinct = grid_round(pts, 1e-9).size();

  Vec2 lo = pts.front(), hi = pts.front();
  for (const auto &p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double area = std::max(hi.x() - lo.x(), 1.0) * std::max(hi.y() - lo.y(), 1.0);

  double eps = std::sqrt(area / m);
  double best_eps = eps;
  std::size_t best_gap = std::numeric_limits<std::size_t>::max();
  for (int round = 0; round < 400; ++round) {
    const std::size_t count = grid_round(pts, eps).size();
    const std::size_t gap = count > static_cast<std::size_t>(m) ? count - m : m - count;
    if (gap < best_gap) {
      best_gap = gap;
      best_eps = eps;
    }
    if (count >= static_cast<std::size_t>(m) || count >= distinct) break;
    eps *= 0.8;
  }

  // Occupied grid points and their populations.
  std::map<std::pair<double, double>, int> cells;
  for (const auto &p : pts) {
    const Vec2 g = round_to(p, best_eps);
    ++cells[{g.x(), g.y()}];
  }
  std::vector<std::pair<std::pair<double, double>, int>> occupied(cells.begin(), cells.end());
  if (occupied.size() > static_cast<std::size_t>(m)) {
    std::stable_sort(occupied.begin(), occupied.end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });
    occupied.resize(m);
  }

  std::set<std::size_t> chosen;
  for (const auto &[g, count] : occupied) {
    const Vec2 gp(g.first, g.second);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double d = (pts[k] - gp).squaredNorm();
      const auto &c = candidates[k];
      const auto &b = candidates[best];
      if (d < best_d || (d == best_d && (c.i < b.i || (c.i == b.i && c.j < b.j)))) {
        best_d = d;
        best = k;
      }
    }
    chosen.insert(best);
  }

  std::vector<MatchPair> out;
  for (std::size_t k : chosen) {
    out.push_back(candidates[k]);
    out.back().status = MatchStatus::Selected;
  }
  std::sort(out.begin(), out.end(), by_j_then_i);
  return out;
}

OrderKind parse_order(std::string_view name) {
  if (name == "small_gaps_first") return OrderKind::SmallGapsFirst;
  if (name == "medium_gaps_first") return OrderKind::MediumGapsFirst;
  if (name == "random") return OrderKind::Random;
  throw Error(ErrorCode::UnknownStrategy, "unknown ordering strategy '" + std::string(name) + "'");
}

std::string_view to_string(OrderKind kind) {
  switch (kind) {
    case OrderKind::SmallGapsFirst: return "small_gaps_first";
    case OrderKind::MediumGapsFirst: return "medium_gaps_first";
    case OrderKind::Random: return "random";
  }
  return "medium_gaps_first";
}

std::vector<MatchPair> order_pairs(std::span<const MatchPair> pairs, const OrderStrategy &strategy) {
  std::vector<MatchPair> out(pairs.begin(), pairs.end());
  std::sort(out.begin(), out.end(), by_j_then_i);
  if (out.empty()) return out;

  switch (strategy.kind) {
    case OrderKind::SmallGapsFirst:
      std::stable_sort(out.begin(), out.end(),
                       [](const MatchPair &a, const MatchPair &b) { return a.i - a.j < b.i - b.j; });
      break;
    case OrderKind::MediumGapsFirst: {
      std::vector<int> gaps;
      for (const auto &p : out) gaps.push_back(p.i - p.j);
      std::sort(gaps.begin(), gaps.end());
      const int median = gaps[(gaps.size() - 1) / 2];
      std::stable_sort(out.begin(), out.end(), [median](const MatchPair &a, const MatchPair &b) {
        return std::abs(a.i - a.j - median) < std::abs(b.i - b.j - median);
      });
      break;
    }
    case OrderKind::Random: {
      // Fisher-Yates on the raw generator output keeps the permutation
      // identical across standard libraries.
      std::mt19937_64 rng(strategy.seed);
      for (std::size_t k = out.size() - 1; k > 0; --k)
        std::swap(out[k], out[rng() % (k + 1)]);
      break;
    }
  }
  return out;
}

ImproveResult improve(const Chain &c, std::span<const Frame> frames,
                      std::span<const MatchPair> ordered, const ImproveConfig &cfg,
                      const BnbConfig &bnb, const PowerRule &rule) {
  if (static_cast<int>(frames.size()) != c.size())
    throw Error(ErrorCode::LengthMismatch, "one frame per chain pose required");

  ImproveResult out;
  out.chain = c;
  out.pairs.assign(ordered.begin(), ordered.end());
  if (ordered.empty()) return out;

  const double gamma = cfg.selection.outlier_ratio;
  IcpOptions icp = cfg.icp;
  icp.outlier_ratio = gamma;

  std::map<int, IndexedCloud> targets;
  const auto target = [&](int j) -> const IndexedCloud & {
    auto it = targets.find(j);
    if (it == targets.end()) it = targets.emplace(j, IndexedCloud(frames[j].points)).first;
    return it->second;
  };

  auto &st = out.stats;
  double beta = blur_ratio(build_map(frames, out.chain), cfg.eps1, cfg.eps2);
  st.beta_trace.push_back(beta);
  double best_beta = beta;
  int since_best = 0;

  for (auto &pair : out.pairs) {
    const auto t_start = std::chrono::steady_clock::now();
    PairLog log;
    log.i = pair.i;
    log.j = pair.j;
    try {
      if (pair.j < 0 || pair.i <= pair.j || pair.i >= c.size())
        throw Error(ErrorCode::IndexOutOfRange, "pair indices outside the chain");
      const Frame &fi = frames[pair.i];
      const Frame &fj = frames[pair.j];
      const RigidTransform t0 = relative_transform(out.chain, pair.i, pair.j);
      log.error_before =
          match_error(target(pair.j), transform_points(fi.points, t0), gamma).error;

      auto t_icp = std::chrono::steady_clock::now();
      IcpResult best = icp_match(target(pair.j), fi.points, t0, icp);
      st.icp_seconds += seconds_since(t_icp);
      ++st.icp_calls;
      log.method = "icp";
      double lambda = overlap_at(best.transform, fi, fj);

      if (!passes_gate(best.error, lambda, cfg.selection)) {
        auto t_go = std::chrono::steady_clock::now();
        IcpResult global = go_icp(target(pair.j), fi.points, bnb, gamma, t0);
        st.go_icp_seconds += seconds_since(t_go);
        ++st.go_icp_calls;
        log.method = "go_icp";
        if (global.error < best.error) {
          best = std::move(global);
          lambda = overlap_at(best.transform, fi, fj);
        }
      }
      log.error_after = best.error;
      log.lambda = lambda;
      pair.error = best.error;
      pair.lambda = lambda;

      if (passes_gate(best.error, lambda, cfg.selection) && lambda >= cfg.lambda0) {
        out.chain = apply_correction(out.chain, pair.i, pair.j, best.transform, rule);
        log.applied = true;
        pair.status = MatchStatus::Improved;
        ++st.corrections;
        beta = blur_ratio(build_map(frames, out.chain), cfg.eps1, cfg.eps2);
      } else {
        pair.status = MatchStatus::Rejected;
      }
    } catch (const Error &) {
      log.method = "failed";
      pair.status = MatchStatus::Rejected;
    }
    log.beta = beta;
    log.seconds = seconds_since(t_start);
    st.pairs.push_back(log);
    st.beta_trace.push_back(beta);

    if (beta < best_beta) {
      best_beta = beta;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      st.stopped_by_patience = true;
      break;
    }
  }
  return out;
}

}  // namespace treeslam
