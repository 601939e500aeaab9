#pragma once

#include <cmath>
#include <cstdint>

namespace espair {

/// SplitMix64 (Steele, Lea, Flood 2014), the exact reference algorithm:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Derived variates are pinned down so streams can be replayed in any
/// implementation:
///   uniform01(): (next() >> 11) * 2^-53, in [0, 1)
///   normal():    Box-Muller on u1 = ((next() >> 11) + 1) * 2^-53 in (0, 1]
///                and u2 = uniform01(); returns sqrt(-2 ln u1) cos(2 pi u2)
///                and caches sqrt(-2 ln u1) sin(2 pi u2) for the next call.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  /// Integer in [0, bound), by rejection-free modulo of a 53-bit draw;
  /// bias is negligible for the small bounds used here (< 2^20).
  std::uint64_t below(std::uint64_t bound) { return (next() >> 11) % bound; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = double((next() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace espair
