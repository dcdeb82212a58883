#pragma once

// Nijenhuis and Haantjes torsions, the Yano-Ako bracket of a (1,2) field and
// the d_K differential on functions and 1-forms.
//
// Conventions: vector-valued 2-forms B(d_l, d_m)^j are stored at (j*n+l)*n+m;
// 2-forms w(d_i, d_j) at i*n+j; the Yano-Ako bracket [C,C]^m_{jklr} at
// (((m*n+j)*n+k)*n+l)*n+r.

#include <vector>

#include "haantjes/field.hpp"
#include "haantjes/geometry.hpp"

namespace haantjes {

/// T^j_{lm} = sum_s (d_s K^j_m K^s_l - d_s K^j_l K^s_m - K^j_s d_l K^s_m + K^j_s d_m K^s_l)
template <class T>
std::vector<T> nijenhuis_torsion(const Field& k, const std::vector<T>& x) {
  const int n = k.dim();
  const auto jk = jet1(k, std::span<const T>(x));
  auto kv = [&](int i, int j) -> const T& { return jk.value[i * n + j]; };
  auto dk = [&](int i, int j, int s) -> const T& { return jk.d(i * n + j, s); };
  std::vector<T> out(static_cast<std::size_t>(n * n * n), T(0.0));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = l + 1; m < n; ++m) {
        T s(0.0);
        for (int q = 0; q < n; ++q) {
          s += dk(j, m, q) * kv(q, l) - dk(j, l, q) * kv(q, m) - kv(j, q) * dk(q, m, l) + kv(j, q) * dk(q, l, m);
        }
        out[(j * n + l) * n + m] = s;
        out[(j * n + m) * n + l] = -s;
      }
  return out;
}

/// H(X,Y) = T(KX,KY) - K T(KX,Y) - K T(X,KY) + K^2 T(X,Y) in components.
template <class T>
std::vector<T> haantjes_from_torsion(const std::vector<T>& tor, const std::vector<T>& k, int n) {
  auto tv = [&](int j, int l, int m) -> const T& { return tor[(j * n + l) * n + m]; };
  auto kv = [&](int i, int j) -> const T& { return k[i * n + j]; };
  const auto k2 = matmul(k, k, n);
  // a = T(K d_l, d_m), b = T(d_l, K d_m)
  std::vector<T> a(tor.size(), T(0.0));
  std::vector<T> b(tor.size(), T(0.0));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
          a[(i * n + l) * n + m] += tv(i, q, m) * kv(q, l);
          b[(i * n + l) * n + m] += tv(i, l, q) * kv(q, m);
        }
  std::vector<T> out(tor.size(), T(0.0));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = l + 1; m < n; ++m) {
        T s(0.0);
        for (int q = 0; q < n; ++q) s += a[(j * n + l) * n + q] * kv(q, m);
        for (int i = 0; i < n; ++i) {
          s -= kv(j, i) * (a[(i * n + l) * n + m] + b[(i * n + l) * n + m]);
          s += k2[j * n + i] * tv(i, l, m);
        }
        out[(j * n + l) * n + m] = s;
        out[(j * n + m) * n + l] = -s;
      }
  return out;
}

template <class T>
std::vector<T> haantjes_torsion(const Field& k, const std::vector<T>& x) {
  return haantjes_from_torsion(nijenhuis_torsion(k, x), k(x), k.dim());
}

/// Torsion oracle: T(d_l, d_m) = [K d_l, K d_m] - K[K d_l, d_m] - K[d_l, K d_m]
/// evaluated with lie_bracket on coordinate vector fields.
std::vector<double> nijenhuis_bracket_form(FieldPtr k, std::span<const double> p);

/// Haantjes oracle: the defining combination assembled by evaluating the
/// bracket-form torsion on the vectors K d_l, d_m, ...
std::vector<double> haantjes_bracket_form(FieldPtr k, std::span<const double> p);

/// [C,C]^m_{jklr}, all six terms of the Yano-Ako combination summed over s.
template <class T>
std::vector<T> yano_ako(const Field& c, const std::vector<T>& x) {
  const int n = c.dim();
  const auto jc = jet1(c, std::span<const T>(x));
  auto cv = [&](int m, int j, int k) -> const T& { return jc.value[(m * n + j) * n + k]; };
  auto dc = [&](int m, int j, int k, int s) -> const T& { return jc.d((m * n + j) * n + k, s); };
  const int n2 = n * n;
  std::vector<T> out(static_cast<std::size_t>(n2 * n2 * n), T(0.0));
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int r = 0; r < n; ++r) {
            T s(0.0);
            for (int q = 0; q < n; ++q) {
              s += cv(m, q, j) * dc(q, l, r, k) + cv(m, q, k) * dc(q, l, r, j) - cv(m, q, r) * dc(q, j, k, l) -
                   cv(m, q, l) * dc(q, j, k, r) + dc(m, j, k, q) * cv(q, l, r) - dc(m, l, r, q) * cv(q, j, k);
            }
            out[(((m * n + j) * n + k) * n + l) * n + r] = s;
          }
  return out;
}

/// Worst violation of an algebraic condition on C at a point.
struct AlgebraDefect {
  double residual = 0.0;      // relative to 1 + max|C|
  std::vector<int> index;     // 0-based index tuple of the worst component
};

/// C^l_{jk} = C^l_{kj}; index tuple (l, j, k).
AlgebraDefect symmetry_defect(const std::vector<double>& c, int n);
/// sum_l C^l_{jk} C^s_{lm} = sum_l C^l_{mk} C^s_{lj}; index tuple (s, j, k, m).
AlgebraDefect associativity_defect(const std::vector<double>& c, int n);

struct YanoAkoValue {
  std::vector<double> components;
  bool precondition_warning = false;
  double symmetry_residual = 0.0;
  double associativity_residual = 0.0;
};

/// Yano-Ako bracket at p. With enforce_pre, symmetry or associativity defects
/// above 10*tol raise PreconditionViolated; smaller defects (and any defect
/// without enforce_pre) only set the warning flag.
YanoAkoValue yano_ako_bracket(const Field& c, std::span<const double> p, bool enforce_pre, double tol);

/// (d_K A)_l = sum_j K^j_l d_j A
template <class T>
std::vector<T> dK_scalar(const Field& k, const Field& a, const std::vector<T>& x) {
  const auto ja = jet1(a, std::span<const T>(x));
  return act_form(k(x), ja.grad, k.dim());
}

/// (d_K alpha)_{mp} = sum_j (K^j_m d_j alpha_p - K^j_p d_j alpha_m) - sum_l alpha_l (d_m K^l_p - d_p K^l_m)
template <class T>
std::vector<T> dK_oneform(const Field& k, const Field& alpha, const std::vector<T>& x) {
  const int n = k.dim();
  const auto jk = jet1(k, std::span<const T>(x));
  const auto ja = jet1(alpha, std::span<const T>(x));
  std::vector<T> out(static_cast<std::size_t>(n * n), T(0.0));
  for (int m = 0; m < n; ++m)
    for (int p = m + 1; p < n; ++p) {
      T s(0.0);
      for (int j = 0; j < n; ++j) s += jk.value[j * n + m] * ja.d(p, j) - jk.value[j * n + p] * ja.d(m, j);
      for (int l = 0; l < n; ++l) s -= ja.value[l] * (jk.d(l * n + p, m) - jk.d(l * n + m, p));
      out[m * n + p] = s;
      out[p * n + m] = -s;
    }
  return out;
}

/// d_K A as a 1-form field.
FieldPtr dK_scalar_field(FieldPtr k, FieldPtr a);

/// d_K d_K A at a point as a 2-form.
std::vector<double> dK_squared(FieldPtr k, FieldPtr a, std::span<const double> p);

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / (1 + max(|lhs|, |rhs|))
};

/// d_K^2 A(X,Y) against dA(T_K(X,Y)).
IdentityResidual dK_squared_identity(FieldPtr k, FieldPtr a, std::span<const double> p,
                                     const std::vector<double>& xi, const std::vector<double>& eta);

/// The two identities relating d and d_K of alpha and alpha' = K alpha:
///   d alpha'(X,Y)   = d alpha(KX,Y) + d alpha(X,KY) - d_K alpha(X,Y)
///   d_K alpha'(X,Y) = d alpha(KX,KY) + alpha(T_K(X,Y))
struct PairIdentityResidual {
  IdentityResidual first;
  IdentityResidual second;
};
PairIdentityResidual check_alpha_prime_identities(FieldPtr k, FieldPtr alpha, std::span<const double> p,
                                                  const std::vector<double>& xi, const std::vector<double>& eta);

struct IdealMembership {
  double residual = 0.0;                  // max |d_K^2 B - dA ^ dB| relative
  double generator_self_residual = 0.0;   // max |d_K^2 A| relative
};

/// Tests d_K^2 B = dA ^ dB at p.
IdealMembership ideal_membership_single_generator(FieldPtr k, FieldPtr a, FieldPtr b, std::span<const double> p);

/// Scalars B probing ideal membership: every coordinate and every pairwise product.
std::vector<FieldPtr> ideal_probe_family(int dim);

}  // namespace haantjes
