#pragma once

#include <cstdint>
#include <vector>

namespace espair {

/// Pairwise (cascade) summation with a fixed binary reduction tree.
///
/// Partial sums are merged exactly like a bottom-up balanced binary tree
/// over the inputs in arrival order: level i holds the sum of a block of
/// 2^i consecutive inputs. The tree shape depends only on the number of
/// inputs, so results are bit-for-bit reproducible and the rounding error
/// grows like O(log N) instead of O(N).
class PairwiseAccumulator {
 public:
  void add(double v) {
    std::uint64_t c = count_++;
    std::size_t level = 0;
    // Bit i of the old count says whether level i already holds a block.
    while (c & 1u) {
      v += levels_[level];
      c >>= 1;
      ++level;
    }
    if (level == levels_.size())
      levels_.push_back(v);
    else
      levels_[level] = v;
  }

  /// Sum of everything added so far (low levels first).
  double total() const {
    double t = 0.0;
    std::uint64_t c = count_;
    for (std::size_t i = 0; i < levels_.size(); ++i, c >>= 1)
      if (c & 1u) t += levels_[i];
    return t;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::vector<double> levels_;
  std::uint64_t count_ = 0;
};

}  // namespace espair
