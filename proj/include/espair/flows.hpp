#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "espair/error.hpp"
#include "espair/model.hpp"
#include "espair/rng.hpp"

namespace espair {

/// Edge masses at or below this are treated as zero during peeling.
inline constexpr double kFlowResidualTolerance = 1e-12;

/// Convex combination of directed simple-cycle flows reconstructing a
/// joint law. A component of length L is the pmf putting weight/L on each
/// of the L directed edges of its cycle; length-1 cycles are self-loops.
struct CycleDecomposition {
  struct Component {
    std::vector<int> cycle;  // node indices, distinct
    double weight = 0.0;
  };
  std::vector<Component> components;
  int max_cycle_length = 1;  // maximal L over components with L >= 2, else 1
  double refined_constant = 1.0;  // max(1, max_cycle_length / 2)
};

/// True iff the joint mass function is a sourceless flow: row sums equal
/// column sums entrywise (the identically-distributed flag, re-derived).
inline bool is_circulation(const PairLaw& pair) {
  auto rx = pair.x_marginal();
  auto ry = pair.y_marginal();
  for (int a = 0; a < pair.size(); ++a)
    if (std::abs(rx[a] - ry[a]) > kFlagTolerance) return false;
  return true;
}

namespace detail {

/// One greedy peel on the off-diagonal residual: walk from `start`, at each
/// node taking the out-edge selected by `pick` among those with residual
/// mass above tolerance, until a node repeats; returns the simple cycle cut
/// from the walk. In a circulation every entered node has positive outflow,
/// so the walk cannot get stuck; a stuck walk means the residual was
/// corrupted and the caller aborts.
template <typename PickEdge>
inline std::vector<int> walk_cycle(const std::vector<double>& residual, int s,
                                   int start, PickEdge&& pick) {
  std::vector<int> path{start};
  std::vector<int> pos(std::size_t(s), -1);
  pos[start] = 0;
  int at = start;
  for (;;) {
    const int next = pick(residual, at);
    if (next < 0)
      throw Error("decompose_cycles",
                  "no out-edge despite residual mass (numerical corruption)");
    if (pos[next] >= 0)
      return {path.begin() + pos[next], path.end()};
    pos[next] = int(path.size());
    path.push_back(next);
    at = next;
  }
}

template <typename PickStart, typename PickEdge>
inline CycleDecomposition peel(const PairLaw& pair, PickStart&& pick_start,
                               PickEdge&& pick_edge) {
  if (!is_circulation(pair))
    throw Error("decompose_cycles", "joint law is not a circulation");
  const int s = pair.size();
  std::vector<double> residual = pair.joint;
  auto off_mass_at = [&](int a) {
    double m = 0.0;
    for (int b = 0; b < s; ++b)
      if (b != a && residual[std::size_t(a) * s + b] > kFlowResidualTolerance)
        m += residual[std::size_t(a) * s + b];
    return m;
  };

  CycleDecomposition out;
  for (;;) {
    const int start = pick_start(residual, off_mass_at);
    if (start < 0) break;  // no off-diagonal mass left
    std::vector<int> cycle = walk_cycle(residual, s, start, pick_edge);
    const int len = int(cycle.size());
    double bottleneck = std::numeric_limits<double>::infinity();
    for (int t = 0; t < len; ++t) {
      const int a = cycle[t], b = cycle[(t + 1) % len];
      bottleneck = std::min(bottleneck, residual[std::size_t(a) * s + b]);
    }
    for (int t = 0; t < len; ++t) {
      const int a = cycle[t], b = cycle[(t + 1) % len];
      residual[std::size_t(a) * s + b] -= bottleneck;
    }
    out.components.push_back({std::move(cycle), bottleneck * len});
  }
  for (int a = 0; a < s; ++a)
    if (residual[std::size_t(a) * s + a] > kFlowResidualTolerance)
      out.components.push_back({{a}, residual[std::size_t(a) * s + a]});

  out.max_cycle_length = 1;
  for (const auto& c : out.components)
    if (int(c.cycle.size()) >= 2)
      out.max_cycle_length = std::max(out.max_cycle_length, int(c.cycle.size()));
  out.refined_constant = std::max(1.0, out.max_cycle_length / 2.0);
  return out;
}

}  // namespace detail

/// Greedy cycle peeling: repeatedly walk from the smallest-index node with
/// positive off-diagonal outflow, always taking the smallest-index out-edge
/// with residual mass, and subtract the cycle's bottleneck. Each peel zeroes
/// at least one edge, so the component count is bounded by the number of
/// support edges. Remaining diagonal mass becomes self-loop components.
/// Deterministic: identical input yields identical component lists.
inline CycleDecomposition decompose_cycles(const PairLaw& pair) {
  const int s = pair.size();
  auto pick_start = [s](const std::vector<double>& residual, auto&&) {
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b)
        if (b != a && residual[std::size_t(a) * s + b] > kFlowResidualTolerance)
          return a;
    return -1;
  };
  auto pick_edge = [s](const std::vector<double>& residual, int at) {
    for (int b = 0; b < s; ++b)
      if (b != at && residual[std::size_t(at) * s + b] > kFlowResidualTolerance)
        return b;
    return -1;
  };
  return detail::peel(pair, pick_start, pick_edge);
}

/// Half the maximal cycle length over all coordinates' greedy
/// decompositions, floored at 1 (cycle lengths 1 and 2 both give the
/// classical constant). Every pair must be identically distributed.
inline double refined_constant(const ProductModel& model) {
  for (const auto& pair : model.pairs)
    if (!pair.identically_distributed)
      throw Error("refined_constant",
                  "some pair is not identically distributed");
  int max_len = 1;
  for (const auto& pair : model.pairs)
    max_len = std::max(max_len, decompose_cycles(pair).max_cycle_length);
  return std::max(1.0, max_len / 2.0);
}

/// Diagnostic for the decomposition dependence of the maximal cycle length:
/// peels with a seeded random start node and random out-edge choice instead
/// of the smallest-index rule, and reports the minimum maximal cycle length
/// seen over the given number of trials (the greedy value included).
inline int randomized_min_max_cycle_length(const PairLaw& pair, int trials,
                                           std::uint64_t seed) {
  int best = decompose_cycles(pair).max_cycle_length;
  SplitMix64 rng(seed);
  const int s = pair.size();
  for (int t = 0; t < trials; ++t) {
    auto pick_start = [&](const std::vector<double>&, auto&& off_mass) {
      std::vector<int> candidates;
      for (int a = 0; a < s; ++a)
        if (off_mass(a) > 0.0) candidates.push_back(a);
      if (candidates.empty()) return -1;
      return candidates[rng.below(candidates.size())];
    };
    auto pick_edge = [&](const std::vector<double>& residual, int at) {
      std::vector<int> candidates;
      for (int b = 0; b < s; ++b)
        if (b != at && residual[std::size_t(at) * s + b] > kFlowResidualTolerance)
          candidates.push_back(b);
      if (candidates.empty()) return -1;
      return candidates[rng.below(candidates.size())];
    };
    best = std::min(best, detail::peel(pair, pick_start, pick_edge).max_cycle_length);
  }
  return best;
}

}  // namespace espair
