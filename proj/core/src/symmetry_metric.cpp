#include "haantjes/symmetry_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "haantjes/parallel.hpp"

namespace haantjes {

namespace {

double vmax(const std::vector<double>& v) { return max_abs(v); }

void merge(Sampled& s, double v, int index) {
  if (s.worst_point < 0 || v > s.max_residual) {
    s.max_residual = v;
    s.worst_point = index;
  }
}

FieldPtr metric_field(const HaantjesCandidate& c, FieldPtr xi) {
  const int n = c.dim();
  return make_field(n, Valence::Tensor11, [c, xi](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    std::vector<T> g, cc;
    metric_components(c, *xi, std::vector<T>(x.begin(), x.end()), g, cc);
    std::copy(g.begin(), g.end(), out.begin());
  });
}

FieldPtr third_derivative_field(const HaantjesCandidate& c, FieldPtr xi) {
  const int n = c.dim();
  return make_field(n, Valence::Tensor12, [c, xi](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    std::vector<T> g, cc;
    metric_components(c, *xi, std::vector<T>(x.begin(), x.end()), g, cc);
    std::copy(cc.begin(), cc.end(), out.begin());
  });
}

/// xi_j(f_e) for every component e of a jet: out[e*n + j].
std::vector<double> frame_derivatives(const Jet1<double>& jet, const std::vector<double>& frame, int n) {
  const int comps = static_cast<int>(jet.value.size());
  std::vector<double> out(static_cast<std::size_t>(comps * n), 0.0);
  for (int e = 0; e < comps; ++e)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += jet.d(e, a) * frame[a * n + j];
      out[e * n + j] = s;
    }
  return out;
}

struct PointFit {
  bool included = false;
  double alpha = 0.0;
  std::vector<double> gamma;
  double residual = 0.0;
};

/// Least-squares ratio s with lhs ~ s * base; nullopt when base vanishes.
std::optional<double> ratio(const std::vector<double>& lhs, const std::vector<double>& base, double& residual) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    num += lhs[i] * base[i];
    den += base[i] * base[i];
  }
  if (!(std::sqrt(den) > 1e-14)) return std::nullopt;
  const double s = num / den;
  double defect = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) defect = std::max(defect, std::abs(lhs[i] - s * base[i]));
  residual = std::max(residual, defect / (1.0 + std::max(vmax(lhs), vmax(base))));
  return s;
}

}  // namespace

// --- conformal fit ------------------------------------------------------------

ConformalSymmetryFit fit_conformal_symmetry(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points) {
  const int n = c.dim();
  const auto da = differential(c.potential);
  std::vector<PointFit> fits(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const auto& p = points[i];
    PointFit& f = fits[i];
    const auto a = ratio(lie_derivative(*da, *xi, p), (*da)(p), f.residual);
    if (!a) return;
    f.alpha = *a;
    for (int j = 0; j < n; ++j) {
      const auto& k = *c.operators[j];
      const auto g = ratio(lie_derivative(k, *xi, p), k(p), f.residual);
      if (!g) return;
      f.gamma.push_back(*g);
    }
    f.included = true;
  });

  ConformalSymmetryFit fit;
  fit.gamma.assign(static_cast<std::size_t>(n), 0.0);
  fit.residual.points = static_cast<int>(points.size());
  std::vector<double> lo(static_cast<std::size_t>(n + 1), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(n + 1), -std::numeric_limits<double>::infinity());
  int used = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    if (!f.included) {
      ++fit.excluded;
      continue;
    }
    ++used;
    merge(fit.residual, f.residual, static_cast<int>(i));
    fit.alpha += f.alpha;
    lo[0] = std::min(lo[0], f.alpha);
    hi[0] = std::max(hi[0], f.alpha);
    for (int j = 0; j < n; ++j) {
      fit.gamma[j] += f.gamma[j];
      lo[j + 1] = std::min(lo[j + 1], f.gamma[j]);
      hi[j + 1] = std::max(hi[j + 1], f.gamma[j]);
    }
  }
  fit.residual.excluded = fit.excluded;
  if (used == 0) {
    fit.constancy_defect = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.alpha /= used;
  for (auto& g : fit.gamma) g /= used;
  for (int e = 0; e <= n; ++e) {
    const double scale = 1.0 + std::max(std::abs(lo[e]), std::abs(hi[e]));
    fit.constancy_defect = std::max(fit.constancy_defect, (hi[e] - lo[e]) / scale);
  }
  return fit;
}

// --- metric -----------------------------------------------------------------

MetricData build_metric(const HaantjesCandidate& c, FieldPtr xi, std::span<const double> p) {
  const int n = c.dim();
  const std::vector<double> x(p.begin(), p.end());
  MetricData m;
  m.n = n;
  metric_components(c, *xi, x, m.g, m.c);
  m.frame = lenard_frame(c, *xi, x);
  const auto g = as_matrix(m.g, n);
  m.condition = condition_number(g);
  if (!(m.condition <= kMetricConditionLimit)) {
    throw SingularMetric("the matrix xi(A_jl) is singular (condition number " + std::to_string(m.condition) + ")");
  }
  m.g_inv = from_matrix(inverse(g));
  const double scale = 1.0 + vmax(m.c);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        const double v = m.c[(j * n + l) * n + k];
        const double d = std::max({std::abs(v - m.c[(l * n + j) * n + k]), std::abs(v - m.c[(j * n + k) * n + l]),
                                   std::abs(v - m.c[(k * n + l) * n + j])});
        m.c_symmetry = std::max(m.c_symmetry, d / scale);
      }
  return m;
}

Signature metric_signature(const MetricData& m) {
  const auto ev = symmetric_eigenvalues(as_matrix(m.g, m.n));
  double big = 0.0;
  for (double e : ev) big = std::max(big, std::abs(e));
  Signature s;
  for (double e : ev) {
    if (std::abs(e) <= 1e-10 * big) ++s.zero;
    else if (e > 0) ++s.positive;
    else ++s.negative;
  }
  return s;
}

// --- frame identities ---------------------------------------------------------

double commutator_scaling_residual(const HaantjesCandidate& c, FieldPtr xi, const ConformalSymmetryFit& fit,
                                   std::span<const double> p) {
  const int n = c.dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto m = build_metric(c, xi, p);
  const auto rows = frame_forms(c, x);
  const auto coords = inverse(as_matrix(rows, n));  // column m is d/dA_m
  std::vector<FieldPtr> frame;
  for (int j = 0; j < n; ++j) frame.push_back(frame_vector(c, xi, j));
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l) {
      const auto lhs = lie_bracket(*frame[j], *frame[l], x);
      std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
      const double k = fit.gamma[l] - fit.gamma[j];
      for (int a = 0; a < n; ++a)
        for (int s = 0; s < n; ++s) rhs[a] += k * m.c[(j * n + l) * n + s] * coords(a, s);
      worst = std::max(worst, max_abs_diff(lhs, rhs) / (1.0 + std::max(vmax(lhs), vmax(rhs))));
    }
  return worst;
}

Connection christoffel_koszul(const HaantjesCandidate& c, FieldPtr xi, const ConformalSymmetryFit& fit,
                              std::span<const double> p) {
  const int n = c.dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto m = build_metric(c, xi, p);
  Connection out;
  out.closed_form.resize(static_cast<std::size_t>(n * n * n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        out.closed_form[(j * n + l) * n + k] = (fit.alpha / 2 + fit.gamma[l]) * m.c[(j * n + l) * n + k];

  // dg[(l*n+k)*n + j] = xi_j(g_lk)
  const auto dg = frame_derivatives(jet1(*metric_field(c, xi), p), m.frame, n);
  auto xg = [&](int j, int l, int k) { return dg[(l * n + k) * n + j]; };

  // bracket coefficients [xi_l, xi_k] = sum_s b[(l*n+k)*n+s] xi_s
  std::vector<FieldPtr> frame;
  for (int j = 0; j < n; ++j) frame.push_back(frame_vector(c, xi, j));
  LuDecomposition<double> lu(as_matrix(m.frame, n));
  std::vector<double> b(static_cast<std::size_t>(n * n * n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      if (l == k) continue;
      const auto coef = lu.solve(lie_bracket(*frame[l], *frame[k], x));
      for (int s = 0; s < n; ++s) b[(l * n + k) * n + s] = coef[s];
    }
  // g(xi_j, [xi_l, xi_k])
  auto gb = [&](int j, int l, int k) {
    double s = 0.0;
    for (int q = 0; q < n; ++q) s += m.g[j * n + q] * b[(l * n + k) * n + q];
    return s;
  };
  out.koszul.resize(static_cast<std::size_t>(n * n * n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        out.koszul[(j * n + l) * n + k] =
            0.5 * (xg(j, l, k) + xg(l, j, k) - xg(k, j, l) - gb(j, l, k) + gb(l, k, j) + gb(k, j, l));
  return out;
}

MetricRelations metric_relations(const HaantjesCandidate& c, FieldPtr xi, const ConformalSymmetryFit& fit,
                                 std::span<const double> p) {
  const int n = c.dim();
  const auto m = build_metric(c, xi, p);
  const auto conn = christoffel_koszul(c, xi, fit, p);
  const auto dg = frame_derivatives(jet1(*metric_field(c, xi), p), m.frame, n);
  const auto dc = frame_derivatives(jet1(*third_derivative_field(c, xi), p), m.frame, n);
  const double cmax = vmax(m.c);
  double gmax = 0.0;
  for (double g : fit.gamma) gmax = std::max(gmax, std::abs(g));
  MetricRelations r;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        const double lhs = dg[(j * n + l) * n + k];  // xi_k(g_jl)
        const double rhs = (fit.alpha + fit.gamma[j] + fit.gamma[l]) * m.c[(j * n + l) * n + k];
        r.derivative = std::max(r.derivative, std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs))));
        const double con = conn.koszul[(k * n + j) * n + l] + conn.koszul[(k * n + l) * n + j];
        r.compatibility = std::max(r.compatibility, std::abs(lhs - con) / (1.0 + std::max(std::abs(lhs), std::abs(con))));
      }
  const double scale = 1.0 + std::max(vmax(dc), 2 * gmax * cmax * cmax * vmax(m.g_inv));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int mm = 0; mm < n; ++mm)
        for (int q = 0; q < n; ++q) {
          const double lhs = dc[((l * n + mm) * n + q) * n + j] - dc[((j * n + mm) * n + q) * n + l];
          double rhs = 0.0;
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
              rhs += m.c[(j * n + l) * n + s] * m.g_inv[s * n + t] * m.c[(mm * n + q) * n + t];
          rhs *= fit.gamma[l] - fit.gamma[j];
          r.proof_identity = std::max(r.proof_identity, std::abs(lhs - rhs) / scale);
        }
  return r;
}

// --- curvature --------------------------------------------------------------

RiemannClosedForm riemann_closed_form(const MetricData& m, const ConformalSymmetryFit& fit) {
  const int n = m.n;
  auto c = [&](int j, int l, int k) { return m.c[(j * n + l) * n + k]; };
  std::vector<double> cup(static_cast<std::size_t>(n * n * n), 0.0);  // C^t_jm at (t*n+j)*n+m
  for (int t = 0; t < n; ++t)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += m.g_inv[t * n + q] * c(j, k, q);
        cup[(t * n + j) * n + k] = s;
      }
  auto C = [&](int t, int j, int k) { return cup[(t * n + j) * n + k]; };

  RiemannClosedForm r;
  const std::size_t size = static_cast<std::size_t>(n) * n * n * n;
  r.c_form.assign(size, 0.0);
  r.structure_form.assign(size, 0.0);
  double pmax = 0.0;
  for (int a = 0; a < n; ++a) pmax = std::max(pmax, std::abs(fit.alpha / 2 + fit.gamma[a]));
  r.scale = pmax * pmax * vmax(m.g_inv) * vmax(m.c) * vmax(m.c);
  for (int mm = 0; mm < n; ++mm)
    for (int p = 0; p < n; ++p) {
      const double pre = (fit.alpha / 2 + fit.gamma[mm]) * (fit.alpha / 2 + fit.gamma[p]);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s1 = 0.0;
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
              s1 += m.g_inv[s * n + t] * (c(j, mm, s) * c(l, p, t) - c(j, p, t) * c(l, mm, s));
          double s2 = 0.0;
          for (int q = 0; q < n; ++q)
            for (int t = 0; t < n; ++t)
              s2 += m.g[p * n + q] * (C(q, l, t) * C(t, j, mm) - C(q, j, t) * C(t, l, mm));
          const std::size_t idx = ((static_cast<std::size_t>(mm) * n + p) * n + j) * n + l;
          r.c_form[idx] = pre * s1;
          r.structure_form[idx] = pre * s2;
        }
    }
  return r;
}

CoordinateRiemann coordinate_riemann(FieldPtr metric, std::span<const double> p) {
  const int n = metric->dim();
  const auto christoffel = make_field(n, Valence::Tensor12, [metric, n](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    const auto jg = jet1(*metric, std::span<const T>(x.data(), x.size()));
    const auto ginv = inverse(as_matrix(jg.value, n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          T s(0.0);
          for (int d = 0; d < n; ++d)
            s += ginv(a, d) * (jg.d(d * n + c, b) + jg.d(d * n + b, c) - jg.d(b * n + c, d));
          out[(a * n + b) * n + c] = 0.5 * s;
        }
  });
  const auto jc = jet1(*christoffel, p);
  const auto g = (*metric)(p);
  auto G = [&](int a, int b, int c) { return jc.value[(a * n + b) * n + c]; };
  auto dG = [&](int a, int b, int c, int k) { return jc.d((a * n + b) * n + c, k); };

  std::vector<double> up(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = dG(a, d, b, c) - dG(a, c, b, d);
          for (int e = 0; e < n; ++e) s += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          up[((a * n + b) * n + c) * n + d] = s;
        }
  CoordinateRiemann r;
  r.lowered.assign(up.size(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int f = 0; f < n; ++f) s += g[a * n + f] * up[((f * n + b) * n + c) * n + d];
          r.lowered[((a * n + b) * n + c) * n + d] = s;
        }
  const double gam = vmax(jc.value);
  r.scale = vmax(g) * std::max(vmax(jc.grad), gam * gam);
  return r;
}

FieldPtr coordinate_metric_field(const HaantjesCandidate& c, FieldPtr xi) {
  const int n = c.dim();
  return make_field(n, Valence::Tensor11, [c, xi, n](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    const std::vector<T> xv(x.begin(), x.end());
    std::vector<T> g, cc;
    metric_components(c, *xi, xv, g, cc);
    const auto inv = inverse(as_matrix(lenard_frame(c, *xi, xv), n));
    const auto gm = transpose(inv) * as_matrix(g, n) * inv;
    std::copy(gm.data().begin(), gm.data().end(), out.begin());
  });
}

FrameRiemann riemann_from_metric_oracle(const HaantjesCandidate& c, FieldPtr xi, std::span<const double> p) {
  const int n = c.dim();
  const auto m = build_metric(c, xi, p);
  const auto coord = coordinate_riemann(coordinate_metric_field(c, xi), p);
  auto X = [&](int a, int j) { return m.frame[a * n + j]; };
  const std::size_t size = static_cast<std::size_t>(n) * n * n * n;
  // Contract one index at a time: R_{a b c d} -> R_{p m j l}.
  std::vector<double> t1(size, 0.0), t2(size, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int d = 0; d < n; ++d) s += coord.lowered[((a * n + b) * n + cc) * n + d] * X(d, l);
          t1[((a * n + b) * n + cc) * n + l] = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int cc = 0; cc < n; ++cc) s += t1[((a * n + b) * n + cc) * n + l] * X(cc, j);
          t2[((a * n + b) * n + j) * n + l] = s;
        }
  std::fill(t1.begin(), t1.end(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int mm = 0; mm < n; ++mm)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int b = 0; b < n; ++b) s += t2[((a * n + b) * n + j) * n + l] * X(b, mm);
          t1[((a * n + mm) * n + j) * n + l] = s;
        }
  FrameRiemann r;
  r.values.assign(size, 0.0);
  for (int mm = 0; mm < n; ++mm)
    for (int pp = 0; pp < n; ++pp)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += t1[((a * n + mm) * n + j) * n + l] * X(a, pp);
          r.values[((mm * n + pp) * n + j) * n + l] = s;
        }
  const double xmax = vmax(m.frame);
  r.scale = coord.scale * xmax * xmax * xmax * xmax;
  return r;
}

// --- certificate ------------------------------------------------------------

std::string flatness_name(Flatness f) {
  switch (f) {
    case Flatness::Flat: return "FLAT";
    case Flatness::NotFlat: return "NOT_FLAT";
    case Flatness::HypothesesUnmet: return "HYPOTHESES_UNMET";
  }
  return "?";
}

SymmetryCertificate certify_symmetry(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points, double tol) {
  SymmetryCertificate out;
  out.fit = fit_conformal_symmetry(c, xi, points);

  struct PointValues {
    bool singular = false;
    double condition = 0.0;
    double c_symmetry = 0.0, commutator = 0.0, connection = 0.0;
    MetricRelations relations;
    double closed = 0.0, dual = 0.0, oracle = 0.0, agreement = 0.0;
  };
  std::vector<PointValues> values(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    PointValues& v = values[i];
    const auto& p = points[i];
    MetricData m;
    try {
      m = build_metric(c, xi, p);
    } catch (const SingularMetric&) {
      v.singular = true;
      v.condition = std::numeric_limits<double>::infinity();
      return;
    }
    v.condition = m.condition;
    v.c_symmetry = m.c_symmetry;
    v.commutator = commutator_scaling_residual(c, xi, out.fit, p);
    const auto conn = christoffel_koszul(c, xi, out.fit, p);
    v.connection = max_abs_diff(conn.closed_form, conn.koszul) /
                   (1.0 + std::max(vmax(conn.closed_form), vmax(conn.koszul)));
    v.relations = metric_relations(c, xi, out.fit, p);
    const auto rc = riemann_closed_form(m, out.fit);
    const auto ro = riemann_from_metric_oracle(c, xi, p);
    v.closed = vmax(rc.c_form) / (1.0 + rc.scale);
    v.dual = max_abs_diff(rc.c_form, rc.structure_form) / (1.0 + rc.scale);
    v.oracle = vmax(ro.values) / (1.0 + ro.scale);
    v.agreement = max_abs_diff(rc.c_form, ro.values) / (1.0 + std::max(rc.scale, ro.scale));
  });

  std::vector<Sampled*> all = {&out.c_symmetry,      &out.commutator,     &out.derivative_relation,
                               &out.connection,      &out.compatibility,  &out.proof_identity,
                               &out.riemann_closed,  &out.riemann_dual_path, &out.riemann_oracle,
                               &out.riemann_agreement};
  for (auto* s : all) s->points = static_cast<int>(points.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = values[i];
    out.worst_condition = std::max(out.worst_condition, v.condition);
    if (v.singular) {
      ++out.singular_points;
      for (auto* s : all) ++s->excluded;
      continue;
    }
    const int idx = static_cast<int>(i);
    merge(out.c_symmetry, v.c_symmetry, idx);
    merge(out.commutator, v.commutator, idx);
    merge(out.derivative_relation, v.relations.derivative, idx);
    merge(out.connection, v.connection, idx);
    merge(out.compatibility, v.relations.compatibility, idx);
    merge(out.proof_identity, v.relations.proof_identity, idx);
    merge(out.riemann_closed, v.closed, idx);
    merge(out.riemann_dual_path, v.dual, idx);
    merge(out.riemann_oracle, v.oracle, idx);
    merge(out.riemann_agreement, v.agreement, idx);
  }
  try {
    out.signature = metric_signature(build_metric(c, xi, c.chart.base));
    out.signature_known = true;
  } catch (const SingularMetric&) {
    out.signature_known = false;
  }
  out.verdict = flatness_certificate(out, tol);
  return out;
}

Flatness flatness_certificate(const SymmetryCertificate& s, double tol) {
  if (s.singular_points > 0 || !s.fit.passes(tol)) return Flatness::HypothesesUnmet;
  const bool closed = s.riemann_closed.max_residual <= tol;
  const bool oracle = s.riemann_oracle.max_residual <= std::max(tol, kOracleTolerance);
  return closed && oracle ? Flatness::Flat : Flatness::NotFlat;
}

}  // namespace haantjes
