// Prints rho(k) for small square supports k = (m, .., m) together with the
// k/2 bound, showing where the extremal constant actually sits.

#include <cstdio>
#include <vector>

#include "espair/espair.hpp"

int main() {
  std::printf("%4s %4s %14s %10s\n", "n", "m", "rho", "max k/2");
  for (int n = 1; n <= 3; ++n)
    for (int m = 2; m <= 6; ++m) {
      const auto r = espair::rho(std::vector<int>(n, m));
      std::printf("%4d %4d %14.10f %10.1f\n", n, m, r.rho, r.kappa_half_bound);
    }
  return 0;
}
