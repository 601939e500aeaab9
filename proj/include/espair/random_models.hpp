#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "espair/model.hpp"
#include "espair/rng.hpp"

namespace espair {

/// Random model generators for randomized certification. Values are always
/// 0..s-1: the certified quantities depend on the joint masses only.

/// Random symmetric joint law (exchangeable pair).
inline PairLaw random_exchangeable_pair(SplitMix64& rng, int s) {
  std::vector<double> joint(std::size_t(s) * s, 0.0);
  double sum = 0.0;
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b) {
      const double w = 1.0 - rng.uniform01();  // in (0, 1]
      joint[std::size_t(a) * s + b] = w;
      joint[std::size_t(b) * s + a] = w;
      sum += (a == b) ? w : 2.0 * w;
    }
  for (double& w : joint) w /= sum;
  std::vector<double> values(s);
  std::iota(values.begin(), values.end(), 0.0);
  return make_pair_law(values, joint);
}

/// Rank-one joint law pmf * pmf^T (Y an independent copy of X).
inline PairLaw random_rank_one_pair(SplitMix64& rng, int s) {
  std::vector<double> pmf(s);
  double sum = 0.0;
  for (double& w : pmf) {
    w = 1.0 - rng.uniform01();
    sum += w;
  }
  for (double& w : pmf) w /= sum;
  std::vector<double> joint(std::size_t(s) * s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) joint[std::size_t(a) * s + b] = pmf[a] * pmf[b];
  std::vector<double> values(s);
  std::iota(values.begin(), values.end(), 0.0);
  return make_pair_law(values, joint);
}

/// Random circulation: convex combination of random simple-cycle pmfs and
/// self-loops, the exact extreme-point structure the decomposition
/// reconstructs.
inline PairLaw random_circulation_pair(SplitMix64& rng, int s) {
  const int pieces = 1 + int(rng.below(std::uint64_t(2 * s)));
  std::vector<double> joint(std::size_t(s) * s, 0.0);
  std::vector<double> weights(pieces);
  double sum = 0.0;
  for (double& w : weights) {
    w = 1.0 - rng.uniform01();
    sum += w;
  }
  std::vector<int> nodes(s);
  for (int c = 0; c < pieces; ++c) {
    const double w = weights[c] / sum;
    const int len = 1 + int(rng.below(std::uint64_t(s)));
    std::iota(nodes.begin(), nodes.end(), 0);
    for (int i = 0; i < len; ++i) {  // partial Fisher-Yates
      const int j = i + int(rng.below(std::uint64_t(s - i)));
      std::swap(nodes[i], nodes[j]);
    }
    for (int i = 0; i < len; ++i) {
      const int a = nodes[i], b = nodes[(i + 1) % len];
      joint[std::size_t(a) * s + b] += w / len;
    }
  }
  std::vector<double> values(s);
  std::iota(values.begin(), values.end(), 0.0);
  return make_pair_law(values, joint);
}

/// Fully random joint law; almost surely neither exchangeable nor
/// identically distributed.
inline PairLaw random_arbitrary_pair(SplitMix64& rng, int s) {
  std::vector<double> joint(std::size_t(s) * s);
  double sum = 0.0;
  for (double& w : joint) {
    w = 1.0 - rng.uniform01();
    sum += w;
  }
  for (double& w : joint) w /= sum;
  std::vector<double> values(s);
  std::iota(values.begin(), values.end(), 0.0);
  return make_pair_law(values, joint);
}

/// n in 1..max_n and per-coordinate sizes in 2..max_s, pairs drawn by `gen`.
template <typename PairGen>
inline ProductModel random_model(SplitMix64& rng, int max_n, int max_s,
                                 PairGen&& gen) {
  const int n = 1 + int(rng.below(std::uint64_t(max_n)));
  std::vector<PairLaw> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int s = 2 + int(rng.below(std::uint64_t(max_s - 1)));
    pairs.push_back(gen(rng, s));
  }
  return make_product_model(std::move(pairs));
}

/// Random real table with entries in [-1, 1).
inline FunctionTable random_real_table(SplitMix64& rng, std::size_t dim) {
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i)
    f.values.emplace_back(2.0 * rng.uniform01() - 1.0, 0.0);
  return f;
}

/// Random complex table with real and imaginary parts in [-1, 1).
inline FunctionTable random_complex_table(SplitMix64& rng, std::size_t dim) {
  FunctionTable f;
  f.kind = ScalarKind::Complex;
  f.values.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double re = 2.0 * rng.uniform01() - 1.0;
    const double im = 2.0 * rng.uniform01() - 1.0;
    f.values.emplace_back(re, im);
  }
  return f;
}

}  // namespace espair
