#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "espair/accumulate.hpp"
#include "espair/error.hpp"
#include "espair/rng.hpp"

namespace espair {

/// Monte Carlo mean with its standard error and 95% confidence interval
/// (mean +/- 1.96 standard errors).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t samples_used = 0;
};

namespace detail {

class MeanAccumulator {
 public:
  void add(double v) {
    sum_.add(v);
    sumsq_.add(v * v);
  }
  McEstimate estimate() const {
    McEstimate e;
    const double n = double(sum_.count());
    e.samples_used = sum_.count();
    if (n == 0.0) return e;
    e.mean = sum_.total() / n;
    if (n > 1.0) {
      const double var =
          std::max(0.0, (sumsq_.total() - n * e.mean * e.mean) / (n - 1.0));
      e.std_error = std::sqrt(var / n);
    }
    e.ci_low = e.mean - 1.96 * e.std_error;
    e.ci_high = e.mean + 1.96 * e.std_error;
    return e;
  }

 private:
  PairwiseAccumulator sum_, sumsq_;
};

}  // namespace detail

/// Differentiable test functions on R^n with analytic gradients.
///   linear(a):             f = sum a_i z_i
///   sin_sum:               f = sin(z_1 + .. + z_n)
///   product_quadratic(c):  f = c * sum z_i^2   (c defaults to 1)
struct TestFunction {
  enum class Kind { Linear, SinSum, ProductQuadratic };
  Kind kind = Kind::SinSum;
  std::vector<double> coefficients;  // linear only
  double scale = 1.0;                // product_quadratic only

  double operator()(const std::vector<double>& z) const {
    switch (kind) {
      case Kind::Linear: {
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += coefficients[i] * z[i];
        return s;
      }
      case Kind::SinSum: {
        double s = 0.0;
        for (double v : z) s += v;
        return std::sin(s);
      }
      case Kind::ProductQuadratic: {
        double s = 0.0;
        for (double v : z) s += v * v;
        return scale * s;
      }
    }
    return 0.0;
  }

  void gradient(const std::vector<double>& z, std::vector<double>& g) const {
    g.resize(z.size());
    switch (kind) {
      case Kind::Linear:
        for (std::size_t i = 0; i < z.size(); ++i) g[i] = coefficients[i];
        return;
      case Kind::SinSum: {
        double s = 0.0;
        for (double v : z) s += v;
        const double c = std::cos(s);
        for (std::size_t i = 0; i < z.size(); ++i) g[i] = c;
        return;
      }
      case Kind::ProductQuadratic:
        for (std::size_t i = 0; i < z.size(); ++i) g[i] = 2.0 * scale * z[i];
        return;
    }
  }
};

inline TestFunction make_test_function(const std::string& name,
                                       const std::vector<double>& params,
                                       int n) {
  const char* where = "make_test_function";
  TestFunction f;
  if (name == "linear") {
    if (int(params.size()) != n)
      throw Error(where, "linear needs one coefficient per coordinate");
    f.kind = TestFunction::Kind::Linear;
    f.coefficients = params;
    return f;
  }
  if (name == "sin_sum") {
    if (!params.empty()) throw Error(where, "sin_sum takes no parameters");
    f.kind = TestFunction::Kind::SinSum;
    return f;
  }
  if (name == "product_quadratic") {
    if (params.size() > 1)
      throw Error(where, "product_quadratic takes at most one scale parameter");
    f.kind = TestFunction::Kind::ProductQuadratic;
    f.scale = params.empty() ? 1.0 : params[0];
    return f;
  }
  throw Error(where, "unknown test function '" + name + "'");
}

/// Configuration of the Gaussian sign-flipping experiment: Z_i iid standard
/// normal, B_i = +1 with probability p else -1, Y_i = B_i Z_i.
struct SignFlipConfig {
  int n = 1;
  double p = 0.5;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  TestFunction function;
};

struct SignFlipReport {
  McEstimate lhs;           // E (f(Z) - f(Y))^2
  McEstimate poincare_rhs;  // 4 (1-p) sum_i E (df/dz_i)^2
  /// Per-coordinate diagnostic (1-p) E (f(Z) - f(Z with z_i negated))^2,
  /// the exact value of each telescoping increment.
  std::vector<McEstimate> increments;
  bool bound_holds = false;
};

/// Per sample the draw order is fixed: z_1..z_n via normal(), then b_1..b_n
/// via uniform01() < p. Single stream, single thread: results depend only on
/// (seed, samples, n, p, function).
inline SignFlipReport estimate_sign_flip_sides(const SignFlipConfig& cfg) {
  const char* where = "estimate_sign_flip_sides";
  if (cfg.n < 1) throw Error(where, "need n >= 1");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw Error(where, "p must be in [0,1]");
  if (cfg.samples < 1) throw Error(where, "need samples >= 1");
  if (cfg.function.kind == TestFunction::Kind::Linear &&
      int(cfg.function.coefficients.size()) != cfg.n)
    throw Error(where, "linear coefficient count must equal n");

  SplitMix64 rng(cfg.seed);
  detail::MeanAccumulator lhs, rhs;
  std::vector<detail::MeanAccumulator> inc(cfg.n);
  std::vector<double> z(cfg.n), y(cfg.n), g;
  const double flip_weight = 1.0 - cfg.p;

  for (std::uint64_t s = 0; s < cfg.samples; ++s) {
    for (int i = 0; i < cfg.n; ++i) z[i] = rng.normal();
    for (int i = 0; i < cfg.n; ++i)
      y[i] = (rng.uniform01() < cfg.p) ? z[i] : -z[i];
    const double fz = cfg.function(z);
    const double d = fz - cfg.function(y);
    lhs.add(d * d);
    cfg.function.gradient(z, g);
    double grad2 = 0.0;
    for (double v : g) grad2 += v * v;
    rhs.add(4.0 * flip_weight * grad2);
    for (int i = 0; i < cfg.n; ++i) {
      const double zi = z[i];
      z[i] = -zi;
      const double di = fz - cfg.function(z);
      z[i] = zi;
      inc[i].add(flip_weight * di * di);
    }
  }

  SignFlipReport report;
  report.lhs = lhs.estimate();
  report.poincare_rhs = rhs.estimate();
  report.increments.reserve(cfg.n);
  for (auto& a : inc) report.increments.push_back(a.estimate());
  const double combined = std::sqrt(report.lhs.std_error * report.lhs.std_error +
                                    report.poincare_rhs.std_error *
                                        report.poincare_rhs.std_error);
  report.bound_holds =
      report.lhs.mean <= report.poincare_rhs.mean + 3.0 * combined;
  return report;
}

struct RotationReport {
  McEstimate lhs;
  std::vector<McEstimate> rhs_terms;
  double closed_form_lhs = 0.0;       // 2 sin^2(n eps)
  double closed_form_rhs_term = 0.0;  // 2 sin^2(eps)
  double ratio_estimate = 0.0;        // lhs / sum of rhs terms (0 when 0/0)
  /// Conservative standard error for the ratio: the numerator and
  /// denominator errors are added, not root-summed, since the two
  /// estimates share samples.
  double ratio_std_error = 0.0;
};

/// Uniform-rotation experiment: X_i uniform on [0, 2 pi), Y_i = X_i + 2 eps
/// mod 2 pi, f = sin of the coordinate sum. Per sample x_1..x_n are drawn
/// in order via 2 pi * uniform01().
inline RotationReport estimate_rotation_sides(int n, double eps,
                                              std::uint64_t samples,
                                              std::uint64_t seed) {
  const char* where = "estimate_rotation_sides";
  if (n < 1) throw Error(where, "need n >= 1");
  if (samples < 1) throw Error(where, "need samples >= 1");
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

  SplitMix64 rng(seed);
  detail::MeanAccumulator lhs;
  std::vector<detail::MeanAccumulator> rhs(n);
  std::vector<double> x(n), y(n);

  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = kTwoPi * rng.uniform01();
    for (int i = 0; i < n; ++i) y[i] = std::fmod(x[i] + 2.0 * eps, kTwoPi);
    double arg = 0.0;
    for (int i = 0; i < n; ++i) arg += y[i];
    double z_prev = std::sin(arg);  // Z_0 = f(Y)
    const double z0 = z_prev;
    for (int i = 0; i < n; ++i) {
      arg += x[i] - y[i];
      const double z = std::sin(arg);
      const double d = z - z_prev;
      rhs[i].add(d * d);
      z_prev = z;
    }
    const double dn = z_prev - z0;
    lhs.add(dn * dn);
  }

  RotationReport report;
  report.lhs = lhs.estimate();
  report.rhs_terms.reserve(n);
  for (auto& a : rhs) report.rhs_terms.push_back(a.estimate());
  const double sn = std::sin(double(n) * eps), s1 = std::sin(eps);
  report.closed_form_lhs = 2.0 * sn * sn;
  report.closed_form_rhs_term = 2.0 * s1 * s1;

  double den = 0.0, den_se = 0.0;
  for (const auto& e : report.rhs_terms) {
    den += e.mean;
    den_se += e.std_error;
  }
  if (den > 0.0) {
    report.ratio_estimate = report.lhs.mean / den;
    report.ratio_std_error =
        report.lhs.std_error / den + report.lhs.mean * den_se / (den * den);
  }
  return report;
}

/// Largest relative error between the analytic gradient and central finite
/// differences (step h) over `points` standard-normal points.
inline double gradient_max_relative_error(const TestFunction& fn, int n,
                                          int points, std::uint64_t seed,
                                          double h = 1e-5) {
  SplitMix64 rng(seed);
  std::vector<double> z(n), g;
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    fn.gradient(z, g);
    for (int i = 0; i < n; ++i) {
      const double zi = z[i];
      z[i] = zi + h;
      const double up = fn(z);
      z[i] = zi - h;
      const double down = fn(z);
      z[i] = zi;
      const double numeric = (up - down) / (2.0 * h);
      const double scale = std::max({std::abs(g[i]), std::abs(numeric), 1.0});
      worst = std::max(worst, std::abs(numeric - g[i]) / scale);
    }
  }
  return worst;
}

}  // namespace espair
