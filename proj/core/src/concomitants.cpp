#include "haantjes/concomitants.hpp"

#include <algorithm>
#include <cmath>

namespace haantjes {

namespace {

IdentityResidual compare(double lhs, double rhs, std::initializer_list<double> terms) {
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return {lhs, rhs, std::abs(lhs - rhs) / (1.0 + scale)};
}

std::vector<double> unit(int n, int k) {
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  e[static_cast<std::size_t>(k)] = 1.0;
  return e;
}

}  // namespace

std::vector<double> nijenhuis_bracket_form(FieldPtr k, std::span<const double> p) {
  const int n = k->dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto kv = (*k)(x);
  std::vector<FieldPtr> e, ke;
  for (int i = 0; i < n; ++i) {
    e.push_back(coordinate_vector(n, i));
    ke.push_back(act_on_vector(k, e.back()));
  }
  std::vector<double> out(static_cast<std::size_t>(n * n * n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      const auto b1 = lie_bracket(*ke[l], *ke[m], x);
      const auto b2 = act_vector(kv, lie_bracket(*ke[l], *e[m], x), n);
      const auto b3 = act_vector(kv, lie_bracket(*e[l], *ke[m], x), n);
      for (int j = 0; j < n; ++j) out[(j * n + l) * n + m] = b1[j] - b2[j] - b3[j];
    }
  return out;
}

std::vector<double> haantjes_bracket_form(FieldPtr k, std::span<const double> p) {
  const int n = k->dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto tor = nijenhuis_bracket_form(k, p);
  const auto kv = (*k)(x);
  std::vector<double> out(tor.size(), 0.0);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      const auto el = unit(n, l), em = unit(n, m);
      const auto kl = act_vector(kv, el, n), km = act_vector(kv, em, n);
      const auto t1 = vector_form_on(tor, kl, km, n);
      const auto t2 = act_vector(kv, vector_form_on(tor, kl, em, n), n);
      const auto t3 = act_vector(kv, vector_form_on(tor, el, km, n), n);
      const auto t4 = act_vector(kv, act_vector(kv, vector_form_on(tor, el, em, n), n), n);
      for (int j = 0; j < n; ++j) out[(j * n + l) * n + m] = t1[j] - t2[j] - t3[j] + t4[j];
    }
  return out;
}

AlgebraDefect symmetry_defect(const std::vector<double>& c, int n) {
  const double scale = 1.0 + max_abs(c);
  AlgebraDefect d;
  d.index = {0, 0, 0};
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double r = std::abs(c[(l * n + j) * n + k] - c[(l * n + k) * n + j]) / scale;
        if (r > d.residual) d = {r, {l, j, k}};
      }
  return d;
}

AlgebraDefect associativity_defect(const std::vector<double>& c, int n) {
  const double cmax = max_abs(c);
  const double scale = 1.0 + cmax * cmax;
  AlgebraDefect d;
  d.index = {0, 0, 0, 0};
  auto cv = [&](int m, int j, int k) { return c[(m * n + j) * n + k]; };
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double lhs = 0.0, rhs = 0.0;
          for (int l = 0; l < n; ++l) {
            lhs += cv(l, j, k) * cv(s, l, m);
            rhs += cv(l, m, k) * cv(s, l, j);
          }
          const double r = std::abs(lhs - rhs) / scale;
          if (r > d.residual) d = {r, {s, j, k, m}};
        }
  return d;
}

YanoAkoValue yano_ako_bracket(const Field& c, std::span<const double> p, bool enforce_pre, double tol) {
  if (c.valence() != Valence::Tensor12) throw DimensionMismatch("yano_ako_bracket: argument must be a (1,2) field");
  const int n = c.dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto cv = c(x);
  const auto sym = symmetry_defect(cv, n);
  const auto assoc = associativity_defect(cv, n);
  YanoAkoValue result;
  result.symmetry_residual = sym.residual;
  result.associativity_residual = assoc.residual;
  if (sym.residual > tol || assoc.residual > tol) {
    if (enforce_pre && sym.residual > 10.0 * tol) {
      throw PreconditionViolated("symmetry C^l_jk = C^l_kj", sym.index, sym.residual);
    }
    if (enforce_pre && assoc.residual > 10.0 * tol) {
      throw PreconditionViolated("associativity sum_l C^l_jk C^s_lm = sum_l C^l_mk C^s_lj", assoc.index,
                                 assoc.residual);
    }
    result.precondition_warning = true;
  }
  result.components = yano_ako(c, x);
  return result;
}

FieldPtr dK_scalar_field(FieldPtr k, FieldPtr a) { return act_on_form(k, differential(a)); }

std::vector<double> dK_squared(FieldPtr k, FieldPtr a, std::span<const double> p) {
  const std::vector<double> x(p.begin(), p.end());
  return dK_oneform(*k, *dK_scalar_field(k, a), x);
}

IdentityResidual dK_squared_identity(FieldPtr k, FieldPtr a, std::span<const double> p,
                                     const std::vector<double>& xi, const std::vector<double>& eta) {
  const int n = k->dim();
  const std::vector<double> x(p.begin(), p.end());
  const double lhs = bilinear(dK_squared(k, a, p), xi, eta, n);
  const auto da = jet1(*a, p).grad;
  const double rhs = pair(da, vector_form_on(nijenhuis_torsion(*k, x), xi, eta, n));
  return compare(lhs, rhs, {});
}

PairIdentityResidual check_alpha_prime_identities(FieldPtr k, FieldPtr alpha, std::span<const double> p,
                                                  const std::vector<double>& xi, const std::vector<double>& eta) {
  const int n = k->dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto alpha_prime = act_on_form(k, alpha);
  const auto kv = (*k)(x);
  const auto av = (*alpha)(x);
  const auto da = exterior_d(*alpha, x);
  const auto dap = exterior_d(*alpha_prime, x);
  const auto dka = dK_oneform(*k, *alpha, x);
  const auto dkap = dK_oneform(*k, *alpha_prime, x);
  const auto tor = nijenhuis_torsion(*k, x);
  const auto kxi = act_vector(kv, xi, n);
  const auto keta = act_vector(kv, eta, n);

  PairIdentityResidual r;
  {
    const double t1 = bilinear(da, kxi, eta, n);
    const double t2 = bilinear(da, xi, keta, n);
    const double t3 = bilinear(dka, xi, eta, n);
    r.first = compare(bilinear(dap, xi, eta, n), t1 + t2 - t3, {t1, t2, t3});
  }
  {
    const double t1 = bilinear(da, kxi, keta, n);
    const double t2 = pair(av, vector_form_on(tor, xi, eta, n));
    r.second = compare(bilinear(dkap, xi, eta, n), t1 + t2, {t1, t2});
  }
  return r;
}

IdealMembership ideal_membership_single_generator(FieldPtr k, FieldPtr a, FieldPtr b, std::span<const double> p) {
  const int n = k->dim();
  const auto db = jet1(*b, p).grad;
  const auto da = jet1(*a, p).grad;
  const auto lhs = dK_squared(k, b, p);
  const auto rhs = wedge(da, db, n);
  const auto self = dK_squared(k, a, p);
  IdealMembership m;
  m.residual = max_abs_diff(lhs, rhs) / (1.0 + std::max(max_abs(lhs), max_abs(rhs)));
  m.generator_self_residual = max_abs(self) / (1.0 + max_abs(da) * max_abs(da));
  return m;
}

std::vector<FieldPtr> ideal_probe_family(int dim) {
  std::vector<FieldPtr> family;
  for (int i = 0; i < dim; ++i) family.push_back(make_expr_field(dim, Valence::Scalar, {"u" + std::to_string(i + 1)}));
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      family.push_back(make_expr_field(
          dim, Valence::Scalar, {"u" + std::to_string(i + 1) + "*u" + std::to_string(j + 1)}));
    }
  return family;
}

}  // namespace haantjes
