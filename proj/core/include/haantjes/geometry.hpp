#pragma once

// Pointwise tensor algebra and the basic differential operations, written
// against a generic scalar so that every result can itself be differentiated.
// Vectors and matrices at a point are plain std::vector<T> in the component
// layout documented on Field.

#include <cmath>
#include <vector>

#include "haantjes/field.hpp"
#include "haantjes/linalg.hpp"

namespace haantjes {

// ---------------------------------------------------------------------------
// Pointwise algebra.

/// (AB)^i_j = sum_k A^i_k B^k_j
template <class T>
std::vector<T> matmul(const std::vector<T>& a, const std::vector<T>& b, int n) {
  std::vector<T> c(static_cast<std::size_t>(n * n), T(0.0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const T& aik = a[i * n + k];
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

/// (KX)^i = sum_j K^i_j X^j
template <class T>
std::vector<T> act_vector(const std::vector<T>& k, const std::vector<T>& x, int n) {
  std::vector<T> y(static_cast<std::size_t>(n), T(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i] += k[i * n + j] * x[j];
  return y;
}

/// (K alpha)_l = sum_j K^j_l alpha_j
template <class T>
std::vector<T> act_form(const std::vector<T>& k, const std::vector<T>& alpha, int n) {
  std::vector<T> y(static_cast<std::size_t>(n), T(0.0));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) y[l] += k[j * n + l] * alpha[j];
  return y;
}

/// alpha(X)
template <class T>
T pair(const std::vector<T>& alpha, const std::vector<T>& x) {
  T s(0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * x[i];
  return s;
}

/// w(X, Y) for a 2-form (or any bilinear form) stored as w_{ij}.
template <class T>
T bilinear(const std::vector<T>& w, const std::vector<T>& x, const std::vector<T>& y, int n) {
  T s(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += w[i * n + j] * x[i] * y[j];
  return s;
}

/// Vector-valued 2-form B^j_{lm} evaluated on (X, Y).
template <class T>
std::vector<T> vector_form_on(const std::vector<T>& b, const std::vector<T>& x, const std::vector<T>& y, int n) {
  std::vector<T> out(static_cast<std::size_t>(n), T(0.0));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) out[j] += b[(j * n + l) * n + m] * x[l] * y[m];
  return out;
}

/// (a ^ b)_{ij} = a_i b_j - a_j b_i
template <class T>
std::vector<T> wedge(const std::vector<T>& a, const std::vector<T>& b, int n) {
  std::vector<T> w(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[i * n + j] = a[i] * b[j] - a[j] * b[i];
  return w;
}

template <class T>
Matrix<T> as_matrix(const std::vector<T>& k, int n) {
  Matrix<T> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = k[i * n + j];
  return m;
}

template <class T>
std::vector<T> from_matrix(const Matrix<T>& m) {
  return {m.data().begin(), m.data().end()};
}

template <class T>
double max_abs_diff(const std::vector<T>& a, const std::vector<T>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(primal(a[i]) - primal(b[i])));
  return m;
}

template <class T>
double max_abs(const std::vector<T>& a) {
  return max_abs(std::span<const T>(a));
}

// ---------------------------------------------------------------------------
// Differential operations at a point.

/// [X,Y]^i = sum_l X^l d_l Y^i - Y^l d_l X^i
template <class T>
std::vector<T> lie_bracket(const Field& x_field, const Field& y_field, const std::vector<T>& x) {
  if (x_field.dim() != y_field.dim()) throw DimensionMismatch("lie_bracket: fields live on different charts");
  if (x_field.valence() != Valence::Vector || y_field.valence() != Valence::Vector) {
    throw DimensionMismatch("lie_bracket: both arguments must be vector fields");
  }
  const int n = x_field.dim();
  const auto jx = jet1(x_field, std::span<const T>(x));
  const auto jy = jet1(y_field, std::span<const T>(x));
  std::vector<T> out(static_cast<std::size_t>(n), T(0.0));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) out[i] += jx.value[l] * jy.d(i, l) - jy.value[l] * jx.d(i, l);
  return out;
}

/// (d alpha)_{ij} = d_i alpha_j - d_j alpha_i
template <class T>
std::vector<T> exterior_d(const Field& alpha, const std::vector<T>& x) {
  if (alpha.valence() != Valence::OneForm) throw DimensionMismatch("exterior_d: argument must be a 1-form");
  const int n = alpha.dim();
  const auto j = jet1(alpha, std::span<const T>(x));
  std::vector<T> out(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[a * n + b] = j.d(b, a) - j.d(a, b);
  return out;
}

/// Lie derivative along X of a scalar, vector, 1-form or (1,1) field.
template <class T>
std::vector<T> lie_derivative(const Field& tensor, const Field& x_field, const std::vector<T>& x) {
  if (tensor.dim() != x_field.dim() || x_field.valence() != Valence::Vector) {
    throw DimensionMismatch("lie_derivative: needs a vector field on the same chart");
  }
  const int n = tensor.dim();
  const auto jt = jet1(tensor, std::span<const T>(x));
  const auto jx = jet1(x_field, std::span<const T>(x));
  std::vector<T> out(static_cast<std::size_t>(tensor.size()), T(0.0));
  switch (tensor.valence()) {
    case Valence::Scalar:
      for (int l = 0; l < n; ++l) out[0] += jx.value[l] * jt.d(0, l);
      break;
    case Valence::Vector:
      return lie_bracket(x_field, tensor, x);
    case Valence::OneForm:
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) out[i] += jx.value[l] * jt.d(i, l) + jt.value[l] * jx.d(l, i);
      break;
    case Valence::Tensor11:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          T s(0.0);
          for (int l = 0; l < n; ++l) {
            s += jx.value[l] * jt.d(i * n + j, l) - jt.value[l * n + j] * jx.d(i, l) + jt.value[i * n + l] * jx.d(l, j);
          }
          out[i * n + j] = s;
        }
      break;
    case Valence::Tensor12:
      throw DimensionMismatch("lie_derivative: (1,2) fields are not supported");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Composite fields.

/// dA as a 1-form field.
FieldPtr differential(FieldPtr scalar);
/// K X as a vector field.
FieldPtr act_on_vector(FieldPtr k, FieldPtr x);
/// K alpha as a 1-form field.
FieldPtr act_on_form(FieldPtr k, FieldPtr alpha);
/// Product K1 K2 of (1,1) fields.
FieldPtr compose(FieldPtr k1, FieldPtr k2);
/// a + c b for fields of equal valence.
FieldPtr add_scaled(FieldPtr a, FieldPtr b, double c);
/// Constant coordinate vector field d/du_k.
FieldPtr coordinate_vector(int dim, int k);

// ---------------------------------------------------------------------------
// Chart changes.

/// Numbers of upper and lower indices of a valence.
std::pair<int, int> index_counts(Valence v);

/// Transforms components with `upper` contravariant indices followed by
/// `lower` covariant ones: each upper index is contracted with J = dv/du,
/// each lower index with J^{-1}.
template <class T>
std::vector<T> transform_components(const std::vector<T>& comps, int n, int upper, int lower,
                                    const Matrix<T>& j, const Matrix<T>& jinv) {
  std::vector<T> cur = comps;
  const int rank = upper + lower;
  int stride_total = 1;
  for (int r = 0; r < rank; ++r) stride_total *= n;
  for (int pos = 0; pos < rank; ++pos) {
    int stride = 1;
    for (int r = pos + 1; r < rank; ++r) stride *= n;
    std::vector<T> next(cur.size(), T(0.0));
    for (int flat = 0; flat < stride_total; ++flat) {
      const int digit = (flat / stride) % n;
      const int base = flat - digit * stride;
      T s(0.0);
      for (int m = 0; m < n; ++m) {
        const T& factor = pos < upper ? j(digit, m) : jinv(m, digit);
        s += factor * cur[base + m * stride];
      }
      next[flat] = s;
    }
    cur = std::move(next);
  }
  return cur;
}

/// Diffeomorphism v = phi(u) given by both directions as vector-valued fields
/// (valence Vector, n components each).
struct ChartMap {
  FieldPtr forward;  // u -> v
  FieldPtr inverse;  // v -> u
};

ChartMap make_chart_map(int dim, const std::vector<std::string>& forward, const std::vector<std::string>& inverse);

/// The field f expressed in the v-chart, as a field of v.
FieldPtr pushforward(FieldPtr f, const ChartMap& map);

/// Components of f in the v-chart at the image of p. Throws SingularJacobian
/// when the Jacobian of phi at p has condition number above 1e8.
std::vector<double> change_chart(const Field& f, const ChartMap& map, std::span<const double> p);

/// Components given in the u-chart at p re-expressed in the v-chart.
std::vector<double> change_chart_components(const std::vector<double>& comps, int upper, int lower,
                                            const ChartMap& map, std::span<const double> p);

}  // namespace haantjes
