#pragma once

#include <string>
#include <vector>

#include "haantjes/chart.hpp"
#include "haantjes/field.hpp"
#include "haantjes/geometry.hpp"
#include "haantjes/manifest.hpp"

namespace haantjes {

/// The data to certify: a potential A (dA is its differential), operators
/// K_1 = Id, K_2, ..., K_n, an optional Lenard chain generator and an
/// optional Hessian potential F on t-coordinates.
struct HaantjesCandidate {
  ChartBox chart;
  FieldPtr potential;
  std::vector<FieldPtr> operators;
  std::vector<std::string> operator_names;
  FieldPtr generator;          // may be null
  FieldPtr hessian_potential;  // may be null

  int dim() const { return chart.dim; }
};

HaantjesCandidate candidate_from_manifest(const Manifest& m);

/// dA_m = K_m dA, one row per m (row-major n x n).
template <class T>
std::vector<T> frame_forms(const HaantjesCandidate& c, const std::vector<T>& x) {
  const int n = c.dim();
  const auto da = jet1(*c.potential, std::span<const T>(x)).grad;
  std::vector<T> rows;
  rows.reserve(static_cast<std::size_t>(n * n));
  for (int m = 0; m < n; ++m) {
    const auto row = act_form((*c.operators[m])(x), da, n);
    rows.insert(rows.end(), row.begin(), row.end());
  }
  return rows;
}

/// beta_{jl} = K_j K_l dA for all pairs: component a of beta_{jl} at (j*n+l)*n+a.
template <class T>
std::vector<T> square_forms(const HaantjesCandidate& c, const std::vector<T>& x) {
  const int n = c.dim();
  const auto da = jet1(*c.potential, std::span<const T>(x)).grad;
  std::vector<std::vector<T>> k;
  for (int j = 0; j < n; ++j) k.push_back((*c.operators[j])(x));
  std::vector<T> out(static_cast<std::size_t>(n * n * n));
  for (int l = 0; l < n; ++l) {
    const auto kl = act_form(k[l], da, n);
    for (int j = 0; j < n; ++j) {
      const auto b = act_form(k[j], kl, n);
      for (int a = 0; a < n; ++a) out[(j * n + l) * n + a] = b[a];
    }
  }
  return out;
}

/// The square of 1-forms as a single field of n^3 components (valence
/// recorded as (1,2); only the layout matters).
FieldPtr square_forms_field(const HaantjesCandidate& c);

/// Vector fields xi_j = K_j xi as columns of an n x n matrix: component a of
/// xi_j at a*n+j.
template <class T>
std::vector<T> lenard_frame(const HaantjesCandidate& c, const Field& xi, const std::vector<T>& x) {
  const int n = c.dim();
  const auto xv = xi(x);
  std::vector<T> frame(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    const auto col = act_vector((*c.operators[j])(x), xv, n);
    for (int a = 0; a < n; ++a) frame[a * n + j] = col[a];
  }
  return frame;
}

/// xi_j = K_j xi as a vector field.
FieldPtr frame_vector(const HaantjesCandidate& c, FieldPtr xi, int j);

}  // namespace haantjes
