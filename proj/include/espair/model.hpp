#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "espair/error.hpp"

namespace espair {

/// Entrywise tolerance for the exchangeable / identically-distributed flags.
inline constexpr double kFlagTolerance = 1e-12;
/// Parsers renormalize a joint law whose total mass deviates from 1 by at
/// most this much; a larger deviation is an input error.
inline constexpr double kRenormTolerance = 1e-9;

/// Joint law of one coordinate pair (X, Y) over a common finite value set.
///
/// values is strictly increasing; joint is row-major with entry (a, b) =
/// P(X = values[a], Y = values[b]). The flags are computed from the matrix:
/// exchangeable means symmetric, identically_distributed means equal row and
/// column sums, both entrywise at kFlagTolerance.
struct PairLaw {
  std::vector<double> values;
  std::vector<double> joint;  // size() x size(), row-major
  bool exchangeable = false;
  bool identically_distributed = false;

  int size() const { return int(values.size()); }
  double p(int a, int b) const { return joint[std::size_t(a) * size() + b]; }
  double& p(int a, int b) { return joint[std::size_t(a) * size() + b]; }

  /// Law of X (row sums).
  std::vector<double> x_marginal() const {
    std::vector<double> m(size(), 0.0);
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b) m[a] += p(a, b);
    return m;
  }
  /// Law of Y (column sums).
  std::vector<double> y_marginal() const {
    std::vector<double> m(size(), 0.0);
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b) m[b] += p(a, b);
    return m;
  }

  struct SupportEntry {
    int x, y;
    double w;
  };
  /// Strictly positive entries, row-major order.
  std::vector<SupportEntry> support() const {
    std::vector<SupportEntry> s;
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b)
        if (p(a, b) > 0.0) s.push_back({a, b, p(a, b)});
    return s;
  }
};

namespace detail {

inline void compute_flags(PairLaw& pl) {
  const int s = pl.size();
  bool sym = true;
  for (int a = 0; a < s && sym; ++a)
    for (int b = a + 1; b < s; ++b)
      if (std::abs(pl.p(a, b) - pl.p(b, a)) > kFlagTolerance) {
        sym = false;
        break;
      }
  pl.exchangeable = sym;
  auto rx = pl.x_marginal();
  auto ry = pl.y_marginal();
  bool id = true;
  for (int a = 0; a < s; ++a)
    if (std::abs(rx[a] - ry[a]) > kFlagTolerance) {
      id = false;
      break;
    }
  pl.identically_distributed = id;
}

}  // namespace detail

/// Validating factory. Sorts the values into canonical increasing order
/// (permuting the joint matrix accordingly), optionally renormalizes total
/// mass within kRenormTolerance, and computes the flags.
inline PairLaw make_pair_law(std::vector<double> values,
                             std::vector<double> joint) {
  const std::size_t s = values.size();
  if (s < 1) throw Error("make_pair_law", "empty value set");
  if (joint.size() != s * s)
    throw Error("make_pair_law", "joint matrix must be " + std::to_string(s) +
                                     "x" + std::to_string(s));
  for (double v : values)
    if (!std::isfinite(v)) throw Error("make_pair_law", "non-finite value");

  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return values[a] < values[b]; });

  PairLaw pl;
  pl.values.resize(s);
  pl.joint.resize(s * s);
  for (std::size_t a = 0; a < s; ++a) pl.values[a] = values[perm[a]];
  for (std::size_t a = 1; a < s; ++a)
    if (!(pl.values[a - 1] < pl.values[a]))
      throw Error("make_pair_law", "duplicate values in one coordinate");
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      pl.joint[a * s + b] = joint[std::size_t(perm[a]) * s + perm[b]];

  double sum = 0.0;
  for (double w : pl.joint) {
    if (!std::isfinite(w)) throw Error("make_pair_law", "non-finite probability");
    if (w < 0.0) throw Error("make_pair_law", "negative probability");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRenormTolerance)
    throw Error("make_pair_law", "joint mass sums to " + std::to_string(sum) +
                                     ", deviation exceeds 1e-9");
  // A deviation within the validity tolerance is left untouched, so parsing
  // a serialized canonical model reproduces it bit for bit.
  if (std::abs(sum - 1.0) > kFlagTolerance)
    for (double& w : pl.joint) w /= sum;

  detail::compute_flags(pl);
  return pl;
}

/// Ordered list of independent coordinate pairs and the product index space
/// functions live on. Coordinate 0 is the slowest-varying index everywhere.
struct ProductModel {
  std::vector<PairLaw> pairs;
  std::size_t dimension = 0;
  std::vector<std::size_t> strides;  // strides[i] = prod of sizes after i

  int coordinates() const { return int(pairs.size()); }

  std::size_t index_of(const std::vector<int>& digits) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      idx += std::size_t(digits[i]) * strides[i];
    return idx;
  }
  std::vector<int> digits_of(std::size_t index) const {
    std::vector<int> d(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      d[i] = int(index / strides[i]);
      index %= strides[i];
    }
    return d;
  }
  bool all_exchangeable() const {
    for (const auto& p : pairs)
      if (!p.exchangeable) return false;
    return true;
  }
  bool all_identically_distributed() const {
    for (const auto& p : pairs)
      if (!p.identically_distributed) return false;
    return true;
  }
  /// Per-coordinate value-set sizes (the k_i of the finite-support bound).
  std::vector<int> sizes() const {
    std::vector<int> k(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) k[i] = pairs[i].size();
    return k;
  }
};

inline ProductModel make_product_model(std::vector<PairLaw> pairs) {
  if (pairs.empty()) throw Error("make_product_model", "need at least one pair");
  ProductModel m;
  m.pairs = std::move(pairs);
  m.strides.assign(m.pairs.size(), 1);
  std::size_t dim = 1;
  for (int i = int(m.pairs.size()) - 1; i >= 0; --i) {
    m.strides[i] = dim;
    const std::size_t s = std::size_t(m.pairs[i].size());
    if (dim > (std::size_t(1) << 40) / s)
      throw Error("make_product_model", "product dimension too large");
    dim *= s;
  }
  m.dimension = dim;
  return m;
}

enum class ScalarKind { Real, Complex };

/// Table of f over the product of per-coordinate value sets, mixed-radix
/// order with coordinate 0 slowest. Real tables keep zero imaginary parts.
struct FunctionTable {
  std::vector<std::complex<double>> values;
  ScalarKind kind = ScalarKind::Real;

  std::size_t size() const { return values.size(); }
  bool is_real() const { return kind == ScalarKind::Real; }
};

inline FunctionTable make_real_table(std::vector<double> v) {
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.reserve(v.size());
  for (double x : v) f.values.emplace_back(x, 0.0);
  return f;
}

inline void validate_table(const FunctionTable& f, const ProductModel& m,
                           const char* where) {
  if (f.size() != m.dimension)
    throw Error(where, "function table length " + std::to_string(f.size()) +
                           " does not match model dimension " +
                           std::to_string(m.dimension));
  for (const auto& z : f.values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(where, "non-finite function value");
}

// ---------------------------------------------------------------------------
// Builtin models
// ---------------------------------------------------------------------------

/// n pairs with X uniform on {-1, 1} and Y = -X.
inline ProductModel rademacher_flip(int n) {
  if (n < 1) throw Error("rademacher_flip", "need n >= 1");
  PairLaw pl = make_pair_law({-1.0, 1.0}, {0.0, 0.5, 0.5, 0.0});
  return make_product_model(std::vector<PairLaw>(std::size_t(n), pl));
}

/// n pairs with X uniform on Z_m = {0, .., m-1} and Y = X + 1 mod m.
inline ProductModel cyclic_shift(int n, int m) {
  if (n < 1) throw Error("cyclic_shift", "need n >= 1");
  if (m < 1) throw Error("cyclic_shift", "need m >= 1");
  std::vector<double> values(m), joint(std::size_t(m) * m, 0.0);
  for (int a = 0; a < m; ++a) {
    values[a] = double(a);
    joint[std::size_t(a) * m + (a + 1) % m] = 1.0 / m;
  }
  PairLaw pl = make_pair_law(values, joint);
  return make_product_model(std::vector<PairLaw>(std::size_t(n), pl));
}

/// n pairs with Y an independent copy of X ~ pmf on values {0, .., s-1};
/// the joint matrix is the rank-one outer product pmf * pmf^T.
inline ProductModel independent_copy(int n, const std::vector<double>& pmf) {
  if (n < 1) throw Error("independent_copy", "need n >= 1");
  if (pmf.empty()) throw Error("independent_copy", "empty pmf");
  double sum = 0.0;
  for (double w : pmf) {
    if (!(w >= 0.0)) throw Error("independent_copy", "pmf not a distribution");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRenormTolerance)
    throw Error("independent_copy", "pmf not a distribution");
  const int s = int(pmf.size());
  std::vector<double> values(s), joint(std::size_t(s) * s);
  for (int a = 0; a < s; ++a) values[a] = double(a);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      joint[std::size_t(a) * s + b] = pmf[a] / sum * (pmf[b] / sum);
  PairLaw pl = make_pair_law(values, joint);
  return make_product_model(std::vector<PairLaw>(std::size_t(n), pl));
}

/// n pairs with X uniform on {-1, 1} and Y = 0 deterministically, on the
/// unified value set {-1, 0, 1}. X and Y do not share a law.
inline ProductModel three_point_different_law(int n) {
  if (n < 1) throw Error("three_point_different_law", "need n >= 1");
  std::vector<double> joint(9, 0.0);
  joint[0 * 3 + 1] = 0.5;  // (-1, 0)
  joint[2 * 3 + 1] = 0.5;  // (+1, 0)
  PairLaw pl = make_pair_law({-1.0, 0.0, 1.0}, joint);
  return make_product_model(std::vector<PairLaw>(std::size_t(n), pl));
}

namespace detail {

inline int int_param(double v, const char* where) {
  double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 0.0)
    throw Error(where, "parameter must be an integer");
  return int(r);
}

}  // namespace detail

/// Dispatch a builtin model by name. Parameter conventions:
///   rademacher_flip: [n]          cyclic_shift: [n, m]
///   independent_copy: [n, p_0, .., p_{s-1}]
///   three_point_different_law: [n]
inline ProductModel build_builtin(const std::string& name,
                                  const std::vector<double>& params) {
  if (name == "rademacher_flip") {
    if (params.size() != 1) throw Error("build_builtin", "rademacher_flip takes [n]");
    return rademacher_flip(detail::int_param(params[0], "build_builtin"));
  }
  if (name == "cyclic_shift") {
    if (params.size() != 2) throw Error("build_builtin", "cyclic_shift takes [n, m]");
    return cyclic_shift(detail::int_param(params[0], "build_builtin"),
                        detail::int_param(params[1], "build_builtin"));
  }
  if (name == "independent_copy") {
    if (params.size() < 2)
      throw Error("build_builtin", "independent_copy takes [n, p_0, ..]");
    return independent_copy(
        detail::int_param(params[0], "build_builtin"),
        std::vector<double>(params.begin() + 1, params.end()));
  }
  if (name == "three_point_different_law") {
    if (params.size() != 1)
      throw Error("build_builtin", "three_point_different_law takes [n]");
    return three_point_different_law(
        detail::int_param(params[0], "build_builtin"));
  }
  throw Error("build_builtin", "unknown builtin model '" + name + "'");
}

// ---------------------------------------------------------------------------
// Builtin functions
// ---------------------------------------------------------------------------

/// f(x) = sin(x_1 + .. + x_n).
inline FunctionTable sin_sum_table(const ProductModel& m) {
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.resize(m.dimension);
  std::vector<int> d(m.pairs.size(), 0);
  for (std::size_t idx = 0; idx < m.dimension; ++idx) {
    auto digits = m.digits_of(idx);
    double s = 0.0;
    for (std::size_t i = 0; i < m.pairs.size(); ++i)
      s += m.pairs[i].values[digits[i]];
    f.values[idx] = std::sin(s);
  }
  return f;
}

/// f(x) = x_1 * (|x_1| + .. + |x_n|).
inline FunctionTable product_sign_table(const ProductModel& m) {
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.resize(m.dimension);
  for (std::size_t idx = 0; idx < m.dimension; ++idx) {
    auto digits = m.digits_of(idx);
    double s = 0.0;
    for (std::size_t i = 0; i < m.pairs.size(); ++i)
      s += std::abs(m.pairs[i].values[digits[i]]);
    f.values[idx] = m.pairs[0].values[digits[0]] * s;
  }
  return f;
}

/// f(x) = sum_i a_i x_i.
inline FunctionTable linear_table(const ProductModel& m,
                                  const std::vector<double>& a) {
  if (a.size() != m.pairs.size())
    throw Error("linear_table", "coefficient count must equal n");
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.resize(m.dimension);
  for (std::size_t idx = 0; idx < m.dimension; ++idx) {
    auto digits = m.digits_of(idx);
    double s = 0.0;
    for (std::size_t i = 0; i < m.pairs.size(); ++i)
      s += a[i] * m.pairs[i].values[digits[i]];
    f.values[idx] = s;
  }
  return f;
}

/// f(x) = prod_{i in subset} x_i, subset given as 1-based coordinates.
inline FunctionTable parity_table(const ProductModel& m,
                                  const std::vector<int>& subset) {
  for (int i : subset)
    if (i < 1 || i > m.coordinates())
      throw Error("parity_table", "coordinate index out of range");
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.resize(m.dimension);
  for (std::size_t idx = 0; idx < m.dimension; ++idx) {
    auto digits = m.digits_of(idx);
    double prod = 1.0;
    for (int i : subset) prod *= m.pairs[i - 1].values[digits[i - 1]];
    f.values[idx] = prod;
  }
  return f;
}

/// chi_u(a) = prod_j exp(2 pi i u_j a_j / s_j) on the index space; the
/// character basis of the product of cyclic groups Z_{s_j}.
inline FunctionTable character_table(const ProductModel& m,
                                     const std::vector<int>& u) {
  if (u.size() != m.pairs.size())
    throw Error("character_table", "u must have one entry per coordinate");
  for (std::size_t j = 0; j < u.size(); ++j)
    if (u[j] < 0 || u[j] >= m.pairs[j].size())
      throw Error("character_table", "u_j out of range");
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  FunctionTable f;
  f.kind = ScalarKind::Complex;
  f.values.resize(m.dimension);
  for (std::size_t idx = 0; idx < m.dimension; ++idx) {
    auto digits = m.digits_of(idx);
    double phase = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
      phase += kTwoPi * u[j] * digits[j] / m.pairs[j].size();
    f.values[idx] = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return f;
}

/// Dispatch a builtin function by name. Parameter conventions:
///   sin_sum: []                  product_sign: []
///   linear: [a_1, .., a_n]       parity: [i_1, ..] (1-based coordinates)
///   character: [u_1, .., u_n]
inline FunctionTable build_function_builtin(const std::string& name,
                                            const std::vector<double>& params,
                                            const ProductModel& m) {
  const char* where = "build_function_builtin";
  if (name == "sin_sum") {
    if (!params.empty()) throw Error(where, "sin_sum takes no parameters");
    return sin_sum_table(m);
  }
  if (name == "product_sign") {
    if (!params.empty()) throw Error(where, "product_sign takes no parameters");
    return product_sign_table(m);
  }
  if (name == "linear") return linear_table(m, params);
  if (name == "parity") {
    std::vector<int> subset;
    subset.reserve(params.size());
    for (double v : params) subset.push_back(detail::int_param(v, where));
    return parity_table(m, subset);
  }
  if (name == "character") {
    std::vector<int> u;
    u.reserve(params.size());
    for (double v : params) u.push_back(detail::int_param(v, where));
    return character_table(m, u);
  }
  throw Error(where, "unknown builtin function '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON parsing / serialization
// ---------------------------------------------------------------------------

/// Model file: {"pairs":[{"values":[..],"joint":[[..],..]},..]}, or the
/// convenience form {"builtin":"name","params":[..]}.
inline ProductModel parse_model(const nlohmann::json& doc) {
  const char* where = "parse_model";
  if (!doc.is_object()) throw Error(where, "malformed document: not an object");
  if (doc.contains("builtin")) {
    std::vector<double> params;
    if (doc.contains("params"))
      for (const auto& v : doc.at("params")) params.push_back(v.get<double>());
    return build_builtin(doc.at("builtin").get<std::string>(), params);
  }
  if (!doc.contains("pairs") || !doc.at("pairs").is_array() ||
      doc.at("pairs").empty())
    throw Error(where, "malformed document: missing 'pairs' array");
  std::vector<PairLaw> pairs;
  for (const auto& jp : doc.at("pairs")) {
    if (!jp.is_object() || !jp.contains("values") || !jp.contains("joint"))
      throw Error(where, "malformed pair: need 'values' and 'joint'");
    std::vector<double> values = jp.at("values").get<std::vector<double>>();
    const auto& jj = jp.at("joint");
    if (!jj.is_array() || jj.size() != values.size())
      throw Error(where, "malformed pair: joint must be a square matrix over values");
    std::vector<double> joint;
    joint.reserve(values.size() * values.size());
    for (const auto& row : jj) {
      if (!row.is_array() || row.size() != values.size())
        throw Error(where, "malformed pair: joint must be a square matrix over values");
      for (const auto& v : row) joint.push_back(v.get<double>());
    }
    pairs.push_back(make_pair_law(std::move(values), std::move(joint)));
  }
  return make_product_model(std::move(pairs));
}

inline ProductModel parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_model", std::string("malformed document: ") + e.what());
  }
  return parse_model(doc);
}

inline ProductModel parse_model(const char* text) {
  return parse_model(std::string(text));
}

inline nlohmann::json serialize_model(const ProductModel& m) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& pl : m.pairs) {
    nlohmann::json joint = nlohmann::json::array();
    for (int a = 0; a < pl.size(); ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (int b = 0; b < pl.size(); ++b) row.push_back(pl.p(a, b));
      joint.push_back(std::move(row));
    }
    pairs.push_back({{"values", pl.values}, {"joint", std::move(joint)}});
  }
  return nlohmann::json{{"pairs", std::move(pairs)}};
}

/// Function file: {"table":[..]} with numbers or [re, im] pairs, or
/// {"builtin":"name","params":[..]}.
inline FunctionTable parse_function(const nlohmann::json& doc,
                                    const ProductModel& m) {
  const char* where = "parse_function";
  if (!doc.is_object()) throw Error(where, "malformed document: not an object");
  if (doc.contains("builtin")) {
    std::vector<double> params;
    if (doc.contains("params"))
      for (const auto& v : doc.at("params")) params.push_back(v.get<double>());
    return build_function_builtin(doc.at("builtin").get<std::string>(), params, m);
  }
  if (!doc.contains("table") || !doc.at("table").is_array())
    throw Error(where, "malformed document: need 'table' or 'builtin'");
  const auto& jt = doc.at("table");
  FunctionTable f;
  f.kind = ScalarKind::Real;
  f.values.reserve(jt.size());
  for (const auto& v : jt) {
    if (v.is_number()) {
      f.values.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2) {
      f.values.emplace_back(v[0].get<double>(), v[1].get<double>());
      f.kind = ScalarKind::Complex;
    } else {
      throw Error(where, "table entries must be numbers or [re, im] pairs");
    }
  }
  validate_table(f, m, where);
  return f;
}

inline FunctionTable parse_function(const std::string& text,
                                    const ProductModel& m) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_function", std::string("malformed document: ") + e.what());
  }
  return parse_function(doc, m);
}

inline FunctionTable parse_function(const char* text, const ProductModel& m) {
  return parse_function(std::string(text), m);
}

inline nlohmann::json serialize_function(const FunctionTable& f) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& z : f.values) {
    if (f.is_real())
      table.push_back(z.real());
    else
      table.push_back(nlohmann::json::array({z.real(), z.imag()}));
  }
  return nlohmann::json{{"table", std::move(table)}};
}

}  // namespace espair
