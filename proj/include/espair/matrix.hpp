#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "espair/error.hpp"

namespace espair {

/// Dense real matrix, row-major. Small and boring on purpose: every matrix
/// in this library is a quadratic form on a product space of dimension a
/// few hundred at most.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int dim) : n_(dim), a_(std::size_t(dim) * dim, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

  static DenseMatrix identity(int dim) {
    DenseMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  /// Column j as a vector.
  std::vector<double> column(int j) const {
    std::vector<double> c(n_);
    for (int i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Eigendecomposition of a real symmetric matrix: A * vectors.col(k) =
/// values[k] * vectors.col(k), values sorted in descending order.
struct EigenDecomposition {
  std::vector<double> values;
  DenseMatrix vectors;  // eigenvectors as columns, orthonormal
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm relative to ||A||_F
  int max_sweeps = 64;
  int dimension_cap = 2048;
};

namespace detail {

inline double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for dense symmetric matrices.
///
/// Sweeps the strict upper triangle row by row and annihilates each entry
/// with a Givens rotation (the smaller-angle root of the symmetric Schur
/// equation, which keeps the rotation angle below pi/4 and the iteration
/// provably convergent). Converged when the off-diagonal Frobenius norm
/// drops below tolerance * ||A||_F. Deterministic: no pivot search.
inline EigenDecomposition jacobi_eigen(DenseMatrix a,
                                       const JacobiOptions& opt = {}) {
  const int n = a.dim();
  if (n > opt.dimension_cap)
    throw Error("jacobi_eigen", "dimension " + std::to_string(n) +
                                    " exceeds cap " +
                                    std::to_string(opt.dimension_cap));
  DenseMatrix v = DenseMatrix::identity(n);
  const double anorm = a.frobenius_norm();

  bool converged = (anorm == 0.0) || (n < 2);
  for (int sweep = 0; !converged && sweep < opt.max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= opt.tolerance * anorm) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Entries this small cannot move the spectrum at double precision.
        if (std::abs(apq) <= 1e-300) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e154) {
          t = 1.0 / (2.0 * theta);  // avoids theta^2 overflow
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && detail::off_diagonal_norm(a) > opt.tolerance * anorm)
    throw Error("jacobi_eigen",
                "no convergence within " + std::to_string(opt.max_sweeps) +
                    " sweeps");

  // Sort eigenpairs by descending eigenvalue; equal values keep their
  // diagonal order so the output is deterministic.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 1; i < n; ++i) {  // insertion sort, stable
    int key = order[i];
    int j = i - 1;
    while (j >= 0 && a(order[j], order[j]) < a(key, key)) {
      order[j + 1] = order[j];
      --j;
    }
    order[j + 1] = key;
  }

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace espair
