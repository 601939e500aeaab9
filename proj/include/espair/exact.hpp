#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "espair/accumulate.hpp"
#include "espair/error.hpp"
#include "espair/flows.hpp"
#include "espair/harmonic.hpp"
#include "espair/model.hpp"

namespace espair {

/// Slack added to every certified bound comparison on exact sums.
inline constexpr double kVerifyTolerance = 1e-10;
/// Enumeration refuses when the product of support sizes exceeds this.
inline constexpr double kEnumerationGuard = 1e8;

/// Both sides of the telescoping inequality, computed exactly over the
/// joint support. ratio is empty when rhs_sum = 0 (the degenerate Y = X
/// case makes both sides vanish; satisfied then means lhs <= tolerance).
struct SidesReport {
  double lhs = 0.0;
  std::vector<double> rhs_terms;
  double rhs_sum = 0.0;
  std::optional<double> ratio;
  double bound = 0.0;
  bool satisfied = false;
  bool cauchy_schwarz_ok = true;  // lhs <= n * rhs_sum + tolerance
};

/// The tightest constant this library certifies for the model: 1 when all
/// pairs are exchangeable; min of rho(k) and the cycle constant when all
/// are identically distributed (rho skipped if its enumeration guard would
/// trip); n otherwise.
inline double applicable_bound(const ProductModel& model) {
  const int n = model.coordinates();
  if (model.all_exchangeable()) return 1.0;
  if (model.all_identically_distributed()) {
    double bound = refined_constant(model);
    const auto k = model.sizes();
    double work = 1.0;
    for (int ki : k) work *= double(ki) * (ki + 1) / 2.0;
    if (work <= 1e8) bound = std::min(bound, rho(k).rho);
    return bound;
  }
  return double(n);
}

/// Enumerates all tuples ((x_1,y_1),..,(x_n,y_n)) over the product of the
/// pair supports with weight prod p_i(x_i, y_i), evaluates the telescoping
/// chain Z_0,..,Z_n per tuple, and accumulates the exact weighted squared
/// moduli with pairwise summation.
inline SidesReport compute_sides(const ProductModel& model,
                                 const FunctionTable& f) {
  const char* where = "compute_sides";
  validate_table(f, model, where);
  const int n = model.coordinates();

  std::vector<std::vector<PairLaw::SupportEntry>> supports;
  supports.reserve(n);
  double work = 1.0;
  for (const auto& pair : model.pairs) {
    supports.push_back(pair.support());
    work *= double(supports.back().size());
  }
  if (work > kEnumerationGuard)
    throw Error(where, "support product exceeds enumeration guard 1e8");

  PairwiseAccumulator lhs_acc;
  std::vector<PairwiseAccumulator> rhs_acc(n);
  std::vector<std::size_t> xpart(n), ypart(n);
  std::vector<std::size_t> suffix(std::size_t(n) + 1);

  auto recurse = [&](auto&& self, int i, double weight) -> void {
    if (i == n) {
      if (weight == 0.0) return;
      suffix[n] = 0;
      for (int j = n - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + ypart[j];
      std::size_t prefix = 0;
      const std::complex<double> z0 = f.values[suffix[0]];
      std::complex<double> zprev = z0;
      for (int j = 0; j < n; ++j) {
        prefix += xpart[j];
        const std::complex<double> z = f.values[prefix + suffix[j + 1]];
        rhs_acc[j].add(weight * std::norm(z - zprev));
        zprev = z;
      }
      lhs_acc.add(weight * std::norm(zprev - z0));
      return;
    }
    for (const auto& e : supports[i]) {
      xpart[i] = std::size_t(e.x) * model.strides[i];
      ypart[i] = std::size_t(e.y) * model.strides[i];
      self(self, i + 1, weight * e.w);
    }
  };
  recurse(recurse, 0, 1.0);

  SidesReport report;
  report.lhs = lhs_acc.total();
  report.rhs_terms.resize(n);
  report.rhs_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    report.rhs_terms[j] = rhs_acc[j].total();
    report.rhs_sum += report.rhs_terms[j];
  }
  if (report.rhs_sum > 0.0) report.ratio = report.lhs / report.rhs_sum;
  report.bound = applicable_bound(model);
  report.satisfied =
      report.rhs_sum > 0.0
          ? report.lhs <= report.bound * report.rhs_sum + kVerifyTolerance
          : report.lhs <= kVerifyTolerance;
  report.cauchy_schwarz_ok =
      report.lhs <= double(n) * report.rhs_sum + kVerifyTolerance;
  return report;
}

/// compute_sides plus the unconditional Cauchy-Schwarz check
/// lhs <= n * rhs_sum + tolerance, enforced regardless of the flags.
inline SidesReport verify(const ProductModel& model, const FunctionTable& f) {
  SidesReport report = compute_sides(model, f);
  if (!report.cauchy_schwarz_ok) report.satisfied = false;
  return report;
}

}  // namespace espair
