#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "espair/error.hpp"
#include "espair/model.hpp"

namespace espair {

inline constexpr double kPi = 3.14159265358979323846;

/// Character coefficients of a table on a product of cyclic groups,
/// mixed-radix indexed by u with coordinate 0 slowest.
struct FourierCoefficients {
  std::vector<std::complex<double>> coefficients;
  std::vector<int> moduli;
};

namespace detail {

inline std::size_t radix_product(const std::vector<int>& moduli,
                                 const char* where) {
  std::size_t d = 1;
  for (int m : moduli) {
    if (m < 1) throw Error(where, "moduli must be >= 1");
    d *= std::size_t(m);
  }
  return d;
}

inline void next_digits(std::vector<int>& d, const std::vector<int>& moduli) {
  for (int i = int(d.size()) - 1; i >= 0; --i) {
    if (++d[i] < moduli[i]) return;
    d[i] = 0;
  }
}

}  // namespace detail

/// c_u = E[f conj(chi_u)] under the uniform product law on prod Z_{m_j},
/// with chi_u(a) = prod_j exp(2 pi i u_j a_j / m_j). Direct O(d^2)
/// summation; d stays at desk scale here and determinism matters more
/// than speed.
inline FourierCoefficients fourier_transform(const FunctionTable& f,
                                             const std::vector<int>& moduli) {
  const char* where = "fourier_transform";
  const std::size_t dim = detail::radix_product(moduli, where);
  if (f.size() != dim)
    throw Error(where, "table length " + std::to_string(f.size()) +
                           " does not match moduli product " +
                           std::to_string(dim));
  const int n = int(moduli.size());

  // roots[j][k] = exp(-2 pi i k / m_j)
  std::vector<std::vector<std::complex<double>>> roots(n);
  for (int j = 0; j < n; ++j) {
    roots[j].resize(moduli[j]);
    for (int k = 0; k < moduli[j]; ++k) {
      const double a = -2.0 * kPi * k / moduli[j];
      roots[j][k] = {std::cos(a), std::sin(a)};
    }
  }

  FourierCoefficients out;
  out.moduli = moduli;
  out.coefficients.assign(dim, {0.0, 0.0});
  std::vector<int> u(n, 0);
  for (std::size_t ui = 0; ui < dim; ++ui, detail::next_digits(u, moduli)) {
    std::complex<double> acc{0.0, 0.0};
    std::vector<int> a(n, 0);
    for (std::size_t ai = 0; ai < dim; ++ai, detail::next_digits(a, moduli)) {
      std::complex<double> chi_conj{1.0, 0.0};
      for (int j = 0; j < n; ++j)
        chi_conj *= roots[j][(std::size_t(u[j]) * a[j]) % moduli[j]];
      acc += f.values[ai] * chi_conj;
    }
    out.coefficients[ui] = acc / double(dim);
  }
  return out;
}

/// Reconstructs f(a) = sum_u c_u chi_u(a).
inline FunctionTable inverse_fourier(const FourierCoefficients& c) {
  const char* where = "inverse_fourier";
  const std::size_t dim = detail::radix_product(c.moduli, where);
  if (c.coefficients.size() != dim)
    throw Error(where, "coefficient length does not match moduli");
  const int n = int(c.moduli.size());

  std::vector<std::vector<std::complex<double>>> roots(n);
  for (int j = 0; j < n; ++j) {
    roots[j].resize(c.moduli[j]);
    for (int k = 0; k < c.moduli[j]; ++k) {
      const double a = 2.0 * kPi * k / c.moduli[j];
      roots[j][k] = {std::cos(a), std::sin(a)};
    }
  }

  FunctionTable f;
  f.kind = ScalarKind::Complex;
  f.values.assign(dim, {0.0, 0.0});
  std::vector<int> a(n, 0);
  for (std::size_t ai = 0; ai < dim; ++ai, detail::next_digits(a, c.moduli)) {
    std::complex<double> acc{0.0, 0.0};
    std::vector<int> u(n, 0);
    for (std::size_t ui = 0; ui < dim; ++ui, detail::next_digits(u, c.moduli)) {
      std::complex<double> chi{1.0, 0.0};
      for (int j = 0; j < n; ++j)
        chi *= roots[j][(std::size_t(u[j]) * a[j]) % c.moduli[j]];
      acc += c.coefficients[ui] * chi;
    }
    f.values[ai] = acc;
  }
  return f;
}

/// Ratio sin^2(sum_j pi u_j / m_j) / sum_j sin^2(pi u_j / m_j) for the
/// uniform-shift pair model; 0 when u = 0 (both sides vanish).
inline double shift_eigenvalue(const std::vector<int>& u,
                               const std::vector<int>& moduli) {
  const char* where = "shift_eigenvalue";
  if (u.size() != moduli.size())
    throw Error(where, "u and moduli must have equal length");
  double t = 0.0, den = 0.0;
  bool zero = true;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (moduli[j] < 1) throw Error(where, "moduli must be >= 1");
    if (u[j] < 0 || u[j] >= moduli[j]) throw Error(where, "u_j out of range");
    if (u[j] == 0) continue;
    zero = false;
    t += double(u[j]) / moduli[j];
    const double s = std::sin(kPi * u[j] / moduli[j]);
    den += s * s;
  }
  if (zero) return 0.0;
  const double num = std::sin(kPi * t);
  return num * num / den;
}

/// The extremal constant of the finite-support bound together with a
/// maximizing (u, m) and the k/2 upper bound from the accompanying lemma.
struct RhoResult {
  double rho = 0.0;
  std::vector<int> argmax_u;
  std::vector<int> argmax_m;
  double kappa_half_bound = 0.0;
};

/// rho(k) = max over 1 <= m_i <= k_i, 0 <= u_i < m_i, u != 0, of
/// sin^2(sum pi u_i/m_i) / sum sin^2(pi u_i/m_i).
///
/// Exhaustive enumeration, (m, u) visited in lexicographic order and the
/// maximum replaced only on strict improvement, so ties resolve to the
/// lexicographically smallest argmax. rho((1,..,1)) = 0 by convention:
/// every admissible u is forced to 0 and both sides of the inequality
/// vanish identically.
inline RhoResult rho(const std::vector<int>& k) {
  const char* where = "rho";
  const int n = int(k.size());
  if (n < 1) throw Error(where, "need at least one coordinate");
  double work = 1.0;
  int kmax = 0;
  for (int ki : k) {
    if (ki < 1) throw Error(where, "k_i must be >= 1");
    work *= double(ki) * (ki + 1) / 2.0;
    kmax = std::max(kmax, ki);
  }
  if (work > 1e8)
    throw Error(where, "enumeration guard exceeded: prod k_i(k_i+1)/2 > 1e8");

  RhoResult best;
  best.kappa_half_bound = kmax / 2.0;
  best.argmax_u.assign(n, 0);
  best.argmax_m = k;

  std::vector<int> m(n), u(n);
  std::vector<double> sum_t(std::size_t(n) + 1), sum_den(std::size_t(n) + 1);
  bool found = false;

  // u odometer for a fixed m; sum_t[i] / sum_den[i] hold the partial angle
  // sum and denominator over coordinates < i.
  auto scan_u = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (sum_den[n] == 0.0) return;  // u = 0, excluded
      const double s = std::sin(kPi * sum_t[n]);
      const double ratio = s * s / sum_den[n];
      if (!found || ratio > best.rho) {
        found = true;
        best.rho = ratio;
        best.argmax_m = m;
        best.argmax_u = u;
      }
      return;
    }
    for (u[i] = 0; u[i] < m[i]; ++u[i]) {
      if (u[i] == 0) {
        sum_t[i + 1] = sum_t[i];
        sum_den[i + 1] = sum_den[i];
      } else {
        sum_t[i + 1] = sum_t[i] + double(u[i]) / m[i];
        const double sj = std::sin(kPi * u[i] / m[i]);
        sum_den[i + 1] = sum_den[i] + sj * sj;
      }
      self(self, i + 1);
    }
  };
  // m vectors in ascending lexicographic order, full u scan per m, strict
  // improvement only: ties resolve to the lexicographically smallest (m, u).
  auto scan_m = [&](auto&& self, int i) -> void {
    if (i == n) {
      scan_u(scan_u, 0);
      return;
    }
    for (m[i] = 1; m[i] <= k[i]; ++m[i]) self(self, i + 1);
  };
  scan_m(scan_m, 0);

  if (!found) {  // all k_i = 1
    best.rho = 0.0;
    best.argmax_u.assign(n, 0);
    best.argmax_m = k;
  }
  return best;
}

/// Diagnostics for the lemma bound rho(k) <= max_i k_i / 2 and the two
/// intermediate bounds of its proof evaluated at the argmax: ratio <= l
/// (l = number of nonzero u_i) and ratio <= kappa^2 / (4 l). The kappa
/// bound needs kappa >= 2; the degenerate all-ones k has rho = 0 and is
/// reported as passing without it.
struct RhoBoundDiagnostics {
  bool passed = false;
  double rho = 0.0;
  double kappa_half_bound = 0.0;
  int ell = 0;
  int kappa = 0;
  double ell_bound = 0.0;
  double kappa_sq_over_4ell = 0.0;
};

inline RhoBoundDiagnostics rho_bound_check(const std::vector<int>& k) {
  RhoResult r = rho(k);
  RhoBoundDiagnostics d;
  d.rho = r.rho;
  d.kappa_half_bound = r.kappa_half_bound;
  for (int u : r.argmax_u)
    if (u != 0) ++d.ell;
  for (int ki : k) d.kappa = std::max(d.kappa, ki);
  d.passed = r.rho <= r.kappa_half_bound + 1e-12;
  if (d.ell > 0 && d.kappa >= 2) {
    d.ell_bound = double(d.ell);
    d.kappa_sq_over_4ell = double(d.kappa) * d.kappa / (4.0 * d.ell);
    d.passed = d.passed && r.rho <= d.ell_bound + 1e-12 &&
               r.rho <= d.kappa_sq_over_4ell + 1e-12;
  }
  return d;
}

/// sin^2(n eps) / (n sin^2(eps)), the exact two-sided ratio of the
/// uniform-rotation pair model with f = sin of the coordinate sum.
/// Tends to n as eps -> 0.
inline double rotation_ratio(int n, double eps) {
  if (n < 1) throw Error("rotation_ratio", "need n >= 1");
  const double s = std::sin(eps);
  if (s == 0.0)
    throw Error("rotation_ratio", "sin(eps) = 0: both sides vanish");
  const double sn = std::sin(double(n) * eps);
  return sn * sn / (double(n) * s * s);
}

}  // namespace espair
