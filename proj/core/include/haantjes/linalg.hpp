#pragma once

// Small dense linear algebra over a generic scalar. Matrices here are at most
// kMaxDim x kMaxDim, so plain loops beat anything clever; the generic versions
// are what lets derivatives flow through solves and inverses.

#include <cmath>
#include <span>
#include <vector>

#include "haantjes/dual.hpp"
#include "haantjes/errors.hpp"

namespace haantjes {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      T s(0.0);
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// y = A x
template <class T>
std::vector<T> multiply(const Matrix<T>& a, std::span<const T> x) {
  std::vector<T> y(static_cast<std::size_t>(a.rows()), T(0.0));
  for (int i = 0; i < a.rows(); ++i) {
    T s(0.0);
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

/// y = A^T x
template <class T>
std::vector<T> multiply_transposed(const Matrix<T>& a, std::span<const T> x) {
  std::vector<T> y(static_cast<std::size_t>(a.cols()), T(0.0));
  for (int j = 0; j < a.cols(); ++j) {
    T s(0.0);
    for (int i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
    y[j] = s;
  }
  return y;
}

/// LU factorisation with partial pivoting on primal magnitudes. Pivot
/// selection looks only at the primal part, so derivative parts follow the
/// same elimination sequence as the values.
template <class T>
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix<T> a) : lu_(std::move(a)), perm_(static_cast<std::size_t>(lu_.rows())) {
    const int n = lu_.rows();
    if (lu_.cols() != n) throw DimensionMismatch("LU of a non-square matrix");
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int k = 0; k < n; ++k) {
      int pivot = k;
      double best = std::abs(primal(lu_(k, k)));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::abs(primal(lu_(i, k)));
        if (v > best) {
          best = v;
          pivot = i;
        }
      }
      if (best == 0.0) {
        singular_ = true;
        return;
      }
      if (pivot != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
        std::swap(perm_[k], perm_[pivot]);
      }
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) = lu_(i, k) / lu_(k, k);
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= lu_(i, k) * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  std::vector<T> solve(std::span<const T> b) const {
    if (singular_) throw DimensionMismatch("solve with a singular matrix");
    const int n = lu_.rows();
    std::vector<T> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      T s = b[perm_[i]];
      for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      T s = x[i];
      for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

  Matrix<T> inverse() const {
    const int n = lu_.rows();
    Matrix<T> inv(n, n);
    std::vector<T> e(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) e[i] = T(i == j ? 1.0 : 0.0);
      const auto col = solve(e);
      for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

 private:
  Matrix<T> lu_;
  std::vector<int> perm_;
  bool singular_ = false;
};

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  LuDecomposition<T> lu(a);
  if (lu.singular()) throw DimensionMismatch("inverse of a singular matrix");
  return lu.inverse();
}

template <class T>
Matrix<double> primal_matrix(const Matrix<T>& a) {
  Matrix<double> m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = primal(a(i, j));
  return m;
}

/// 2-norm condition number (ratio of extreme singular values); +inf when singular.
double condition_number(const Matrix<double>& a);

/// Eigenvalues of a symmetric matrix in ascending order.
std::vector<double> symmetric_eigenvalues(const Matrix<double>& a);

/// Largest absolute entry.
template <class T>
double max_abs(std::span<const T> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(primal(v)));
  return m;
}

/// Residual measured against the scale 1 + max |participating component|.
inline double relative_residual(double absolute, double scale) { return absolute / (1.0 + scale); }

}  // namespace haantjes
