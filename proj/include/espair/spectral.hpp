#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "espair/error.hpp"
#include "espair/exact.hpp"
#include "espair/flows.hpp"
#include "espair/harmonic.hpp"
#include "espair/matrix.hpp"
#include "espair/model.hpp"

namespace espair {

/// Slack for eigenvalue-vs-bound comparisons.
inline constexpr double kEigenTolerance = 1e-8;
/// B eigenvalues at or below this fraction of the top one count as kernel.
inline constexpr double kKernelRelTolerance = 1e-10;
/// A near-kernel vector v of B must satisfy ||Q v|| below this.
inline constexpr double kKernelImageTolerance = 1e-8;

/// Both sides of the inequality as quadratic forms on the product index
/// space: E|Z_n - Z_0|^2 = f^H Q f and sum_i E|Z_i - Z_{i-1}|^2 = f^H B f
/// with B = sum_i Q_i. All matrices are symmetric PSD with zero row sums
/// (constants are in every kernel).
struct QuadraticForms {
  DenseMatrix lhs_matrix;                  // Q
  DenseMatrix rhs_matrix;                  // B
  std::vector<DenseMatrix> per_coordinate; // Q_i
};

/// f^H M f for a real symmetric M; complex tables realify, the cross terms
/// cancel by symmetry.
inline double quadratic_form_value(const DenseMatrix& m,
                                   const FunctionTable& f) {
  if (f.size() != std::size_t(m.dim()))
    throw Error("quadratic_form_value", "table length does not match matrix");
  double total = 0.0;
  for (int i = 0; i < m.dim(); ++i) {
    std::complex<double> row{0.0, 0.0};
    for (int j = 0; j < m.dim(); ++j) row += m(i, j) * f.values[j];
    total += f.values[i].real() * row.real() + f.values[i].imag() * row.imag();
  }
  return total;
}

/// Assembles Q as sum over support tuples of w (e_x - e_y)(e_x - e_y)^T,
/// and each Q_i from the x-prefix / y-suffix construction: the two points
/// differ only in coordinate i, the other coordinates carry the X marginal
/// before i and the Y marginal after i.
inline QuadraticForms assemble_forms(const ProductModel& model) {
  const char* where = "assemble_forms";
  const int n = model.coordinates();
  const std::size_t dim = model.dimension;
  if (dim > 2048)
    throw Error(where, "model dimension exceeds the dense-solver cap 2048");

  std::vector<std::vector<PairLaw::SupportEntry>> supports;
  supports.reserve(n);
  double work = 1.0;
  for (const auto& pair : model.pairs) {
    supports.push_back(pair.support());
    work *= double(supports.back().size());
  }
  if (work > kEnumerationGuard)
    throw Error(where, "support product exceeds enumeration guard 1e8");

  QuadraticForms forms;
  forms.lhs_matrix = DenseMatrix(int(dim));
  forms.rhs_matrix = DenseMatrix(int(dim));
  forms.per_coordinate.assign(n, DenseMatrix(int(dim)));

  auto add_difference = [](DenseMatrix& m, std::size_t x, std::size_t y,
                           double w) {
    if (x == y || w == 0.0) return;
    const int xi = int(x), yi = int(y);
    m(xi, xi) += w;
    m(yi, yi) += w;
    m(xi, yi) -= w;
    m(yi, xi) -= w;
  };

  {  // Q: full-tuple enumeration
    std::vector<std::size_t> xpart(n), ypart(n);
    auto recurse = [&](auto&& self, int i, double weight) -> void {
      if (i == n) {
        std::size_t x = 0, y = 0;
        for (int j = 0; j < n; ++j) {
          x += xpart[j];
          y += ypart[j];
        }
        add_difference(forms.lhs_matrix, x, y, weight);
        return;
      }
      for (const auto& e : supports[i]) {
        xpart[i] = std::size_t(e.x) * model.strides[i];
        ypart[i] = std::size_t(e.y) * model.strides[i];
        self(self, i + 1, weight * e.w);
      }
    };
    recurse(recurse, 0, 1.0);
  }

  std::vector<std::vector<double>> xmarg(n), ymarg(n);
  for (int i = 0; i < n; ++i) {
    xmarg[i] = model.pairs[i].x_marginal();
    ymarg[i] = model.pairs[i].y_marginal();
  }
  for (int i = 0; i < n; ++i) {
    DenseMatrix& qi = forms.per_coordinate[i];
    // Enumerate the coordinates other than i; coordinate i contributes the
    // pair support, everything before it the X marginal, after it the Y.
    auto recurse = [&](auto&& self, int j, std::size_t base,
                       double weight) -> void {
      if (weight == 0.0) return;
      if (j == n) {
        for (const auto& e : supports[i])
          add_difference(qi, base + std::size_t(e.x) * model.strides[i],
                         base + std::size_t(e.y) * model.strides[i],
                         weight * e.w);
        return;
      }
      if (j == i) {
        self(self, j + 1, base, weight);
        return;
      }
      const auto& marg = (j < i) ? xmarg[j] : ymarg[j];
      for (int v = 0; v < model.pairs[j].size(); ++v)
        self(self, j + 1, base + std::size_t(v) * model.strides[j],
             weight * marg[v]);
    };
    recurse(recurse, 0, 0, 1.0);
    forms.rhs_matrix += qi;
  }
  return forms;
}

/// Worst-case ratio sup_f f^H Q f / f^H B f over the range of B, with an
/// extremal function as certificate.
struct WorstCase {
  double lambda_max = 0.0;
  FunctionTable extremal_f;
  bool kernel_consistent = true;
  /// Every eigenvalue of the B-normalized projected operator, descending;
  /// empty when B vanishes.
  std::vector<double> projected_spectrum;
};

namespace detail {

/// Deterministic certificate selection among eigenvectors tied at the top:
/// the entrywise-magnitude sequence decides lexicographically, then the
/// sign is fixed by making the first nonzero entry positive.
inline bool magnitude_lex_greater(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ma = std::abs(a[i]), mb = std::abs(b[i]);
    if (ma != mb) return ma > mb;
  }
  return false;
}

inline void sign_normalize(std::vector<double>& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

}  // namespace detail

inline WorstCase max_generalized_eigenvalue(const QuadraticForms& forms) {
  const DenseMatrix& q = forms.lhs_matrix;
  const DenseMatrix& b = forms.rhs_matrix;
  const int d = b.dim();

  EigenDecomposition eigb = jacobi_eigen(b);
  const double lmax_b = eigb.values.empty() ? 0.0 : eigb.values[0];

  WorstCase out;
  out.extremal_f.kind = ScalarKind::Real;
  out.extremal_f.values.assign(std::size_t(d), {0.0, 0.0});

  const double tau = kKernelRelTolerance * std::max(lmax_b, 0.0);
  int rank = 0;
  while (rank < d && eigb.values[rank] > tau && eigb.values[rank] > 0.0) ++rank;

  out.kernel_consistent = true;
  for (int k = rank; k < d; ++k) {
    const auto qv = q.multiply(eigb.vectors.column(k));
    double norm2 = 0.0;
    for (double x : qv) norm2 += x * x;
    if (std::sqrt(norm2) > kKernelImageTolerance) {
      out.kernel_consistent = false;
      break;
    }
  }

  if (rank == 0) return out;  // B vanishes: lambda_max = 0 by convention

  // M = S V_r^T Q V_r S with S = diag(eigenvalue^-1/2): the B-orthonormal
  // restriction of Q to the range of B.
  std::vector<double> scale(rank);
  for (int k = 0; k < rank; ++k) scale[k] = 1.0 / std::sqrt(eigb.values[k]);
  DenseMatrix qv(d);  // columns: Q * v_k, k < rank (extra columns unused)
  for (int k = 0; k < rank; ++k) {
    const auto col = q.multiply(eigb.vectors.column(k));
    for (int i = 0; i < d; ++i) qv(i, k) = col[i];
  }
  DenseMatrix m(rank);
  for (int r = 0; r < rank; ++r)
    for (int c = r; c < rank; ++c) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += eigb.vectors(i, r) * qv(i, c);
      s *= scale[r] * scale[c];
      m(r, c) = m(c, r) = s;
    }

  EigenDecomposition eigm = jacobi_eigen(m);
  out.projected_spectrum = eigm.values;
  out.lambda_max = std::max(eigm.values[0], 0.0);

  const double tie = 1e-12 * std::max(1.0, std::abs(eigm.values[0]));
  std::vector<double> best;
  for (int k = 0; k < rank && eigm.values[k] >= eigm.values[0] - tie; ++k) {
    std::vector<double> f(std::size_t(d), 0.0);
    for (int c = 0; c < rank; ++c) {
      const double w = eigm.vectors(c, k) * scale[c];
      if (w == 0.0) continue;
      for (int i = 0; i < d; ++i) f[i] += w * eigb.vectors(i, c);
    }
    detail::sign_normalize(f);
    if (best.empty() || detail::magnitude_lex_greater(f, best))
      best = std::move(f);
  }
  for (int i = 0; i < d; ++i) out.extremal_f.values[i] = {best[i], 0.0};
  return out;
}

/// One certified bound and whether lambda_max respects it.
struct BoundCheck {
  double value = 0.0;
  bool pass = false;
};

/// certify = assemble + eigen-maximize + compare against every bound the
/// model's flags make applicable.
struct CertifyResult {
  WorstCase worst;
  std::optional<BoundCheck> exchangeable;  // 1, all pairs exchangeable
  std::optional<BoundCheck> rho_bound;     // rho(k), all identically distributed
  std::optional<BoundCheck> cycle_bound;   // max cycle length / 2, same
  BoundCheck cauchy_schwarz;               // n, always
  double tightest_bound = 0.0;
  bool pass = false;  // every applicable bound holds
};

inline CertifyResult certify(const ProductModel& model) {
  CertifyResult res;
  res.worst = max_generalized_eigenvalue(assemble_forms(model));
  const double lambda = res.worst.lambda_max;
  auto check = [lambda](double bound) {
    return BoundCheck{bound, lambda <= bound + kEigenTolerance};
  };

  res.cauchy_schwarz = check(double(model.coordinates()));
  res.tightest_bound = res.cauchy_schwarz.value;
  res.pass = res.cauchy_schwarz.pass;

  if (model.all_exchangeable()) {
    res.exchangeable = check(1.0);
    res.tightest_bound = std::min(res.tightest_bound, 1.0);
    res.pass = res.pass && res.exchangeable->pass;
  }
  if (model.all_identically_distributed()) {
    res.cycle_bound = check(refined_constant(model));
    res.tightest_bound = std::min(res.tightest_bound, res.cycle_bound->value);
    res.pass = res.pass && res.cycle_bound->pass;
    const auto k = model.sizes();
    double work = 1.0;
    for (int ki : k) work *= double(ki) * (ki + 1) / 2.0;
    if (work <= 1e8) {
      res.rho_bound = check(rho(k).rho);
      res.tightest_bound = std::min(res.tightest_bound, res.rho_bound->value);
      res.pass = res.pass && res.rho_bound->pass;
    }
  }
  return res;
}

}  // namespace espair
