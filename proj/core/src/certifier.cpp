#include "haantjes/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "haantjes/frame_coordinates.hpp"
#include "haantjes/parallel.hpp"

namespace haantjes {

// --- helpers ----------------------------------------------------------------

namespace {

/// Evaluates `residual_at` on every point in parallel and merges by index.
/// A nullopt residual marks the point as excluded.
template <class F>
Sampled sample_max(const PointSet& points, F residual_at) {
  std::vector<std::optional<double>> values(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) { values[i] = residual_at(points[i]); });
  Sampled s;
  s.points = static_cast<int>(points.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      ++s.excluded;
      continue;
    }
    if (*values[i] > s.max_residual || s.worst_point < 0) {
      s.max_residual = std::max(s.max_residual, *values[i]);
      if (*values[i] >= s.max_residual) s.worst_point = static_cast<int>(i);
    }
  }
  return s;
}

/// Per-point vectors of residuals merged entrywise by max.
template <class F>
std::vector<double> sample_max_entries(const PointSet& points, int entries, F residuals_at) {
  std::vector<std::vector<double>> values(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) { values[i] = residuals_at(points[i]); });
  std::vector<double> out(static_cast<std::size_t>(entries), 0.0);
  for (const auto& v : values)
    for (int e = 0; e < entries; ++e) out[e] = std::max(out[e], v[e]);
  return out;
}

double max_abs_vec(const std::vector<double>& v) { return max_abs(v); }

std::vector<std::vector<double>> operator_values(const HaantjesCandidate& c, const std::vector<double>& x) {
  std::vector<std::vector<double>> k;
  for (const auto& op : c.operators) k.push_back((*op)(x));
  return k;
}

}  // namespace

// --- commutation and closedness -------------------------------------------

std::vector<double> check_commuting(const HaantjesCandidate& c, const PointSet& points) {
  const int n = c.dim();
  return sample_max_entries(points, n * n, [&](const std::vector<double>& p) {
    const auto k = operator_values(c, p);
    std::vector<double> r(static_cast<std::size_t>(n * n), 0.0);
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        const auto ab = matmul(k[j], k[l], n);
        const auto ba = matmul(k[l], k[j], n);
        const double v = max_abs_diff(ab, ba) / (1.0 + std::max(max_abs_vec(ab), max_abs_vec(ba)));
        r[j * n + l] = r[l * n + j] = v;
      }
    return r;
  });
}

std::vector<double> check_square_closed(const HaantjesCandidate& c, const PointSet& points) {
  const int n = c.dim();
  const auto beta = square_forms_field(c);
  return sample_max_entries(points, n * n, [&](const std::vector<double>& p) {
    const auto jet = jet1(*beta, std::span<const double>(p));
    std::vector<double> r(static_cast<std::size_t>(n * n), 0.0);
    for (int e = 0; e < n * n; ++e) {
      double defect = 0.0, scale = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double dab = jet.d(e * n + b, a);
          scale = std::max(scale, std::abs(dab));
          if (b > a) defect = std::max(defect, std::abs(dab - jet.d(e * n + a, b)));
        }
      r[e] = defect / (1.0 + scale);
    }
    return r;
  });
}

// --- structure constants ----------------------------------------------------

StructureConstants structure_constants(const HaantjesCandidate& c, std::span<const double> p) {
  const int n = c.dim();
  const std::vector<double> x(p.begin(), p.end());
  StructureConstants s;
  s.n = n;
  {
    const auto rows = frame_forms(c, x);
    Matrix<double> m(n, n);
    for (int i = 0; i < n * n; ++i) m.data()[i] = rows[i];
    s.frame_condition = condition_number(m);
  }
  s.c = structure_constants_at(c, x);
  const double cmax = max_abs_vec(s.c);
  s.symmetry = symmetry_defect(s.c, n).residual;
  s.associativity = associativity_defect(s.c, n).residual;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      const double expected = m == l ? 1.0 : 0.0;
      s.unity = std::max(s.unity, std::abs(s.c[(m * n + 0) * n + l] - expected) / (1.0 + cmax));
    }
  const auto k = operator_values(c, x);
  double kmax = 0.0;
  for (const auto& kk : k) kmax = std::max(kmax, max_abs_vec(kk));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const auto lhs = matmul(k[j], k[l], n);
      std::vector<double> rhs(static_cast<std::size_t>(n * n), 0.0);
      for (int m = 0; m < n; ++m)
        for (int e = 0; e < n * n; ++e) rhs[e] += s.c[(m * n + j) * n + l] * k[m][e];
      s.reconstruction = std::max(s.reconstruction, max_abs_diff(lhs, rhs) / (1.0 + std::max(max_abs_vec(lhs), cmax * kmax)));
    }
  return s;
}

StructureConstantSummary check_structure_constants(const HaantjesCandidate& c, const PointSet& points) {
  std::vector<std::optional<StructureConstants>> values(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    try {
      values[i] = structure_constants(c, points[i]);
    } catch (const DegenerateFrame&) {
      values[i] = std::nullopt;
    }
  });
  StructureConstantSummary out;
  auto merge = [](Sampled& s, double v, int i) {
    if (s.worst_point < 0 || v > s.max_residual) {
      s.max_residual = v;
      s.worst_point = i;
    }
  };
  for (Sampled* s : {&out.symmetry, &out.associativity, &out.unity, &out.reconstruction}) {
    s->points = static_cast<int>(points.size());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      for (Sampled* s : {&out.symmetry, &out.associativity, &out.unity, &out.reconstruction}) ++s->excluded;
      continue;
    }
    merge(out.symmetry, values[i]->symmetry, static_cast<int>(i));
    merge(out.associativity, values[i]->associativity, static_cast<int>(i));
    merge(out.unity, values[i]->unity, static_cast<int>(i));
    merge(out.reconstruction, values[i]->reconstruction, static_cast<int>(i));
  }
  return out;
}

FieldPtr induced_multiplication_field(const HaantjesCandidate& c, FieldPtr xi) {
  const int n = c.dim();
  return make_field(n, Valence::Tensor12, [c, xi, n](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    const std::vector<T> xv(x.begin(), x.end());
    const auto frame = as_matrix(lenard_frame(c, *xi, xv), n);
    const auto cm = structure_constants_at(c, xv);
    const auto comps = transform_components(cm, n, 1, 2, frame, inverse(frame));
    std::copy(comps.begin(), comps.end(), out.begin());
  });
}

Sampled check_yano_ako(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points) {
  const auto mult = induced_multiplication_field(c, xi);
  return sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    try {
      const auto jet = jet1(*mult, std::span<const double>(p));
      const auto ya = yano_ako(*mult, p);
      return max_abs_vec(ya) / (1.0 + max_abs_vec(jet.value) * max_abs_vec(jet.grad));
    } catch (const DegenerateFrame&) {
      return std::nullopt;
    }
  });
}

// --- weak Haantjes conditions -----------------------------------------------

WeakHaantjesResiduals check_weak_haantjes(FieldPtr a, FieldPtr k, const PointSet& points) {
  const auto dka = dK_scalar_field(k, a);
  WeakHaantjesResiduals w;
  w.torsion = sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    const auto jk = jet1(*k, std::span<const double>(p));
    const double kmax = max_abs_vec(jk.value);
    const auto h = haantjes_torsion(*k, p);
    return max_abs_vec(h) / (1.0 + kmax * kmax * kmax * max_abs_vec(jk.grad));
  });
  w.closed = sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    const auto jet = jet1(*dka, std::span<const double>(p));
    return max_abs_vec(exterior_d(*dka, p)) / (1.0 + max_abs_vec(jet.grad));
  });
  w.dk2 = sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    const auto jk = jet1(*k, std::span<const double>(p));
    const auto jd = jet1(*dka, std::span<const double>(p));
    const double scale = max_abs_vec(jk.value) * max_abs_vec(jd.grad) + max_abs_vec(jd.value) * max_abs_vec(jk.grad);
    return max_abs_vec(dK_oneform(*k, *dka, p)) / (1.0 + scale);
  });
  return w;
}

IdealProbe probe_single_generator_ideal(FieldPtr a, FieldPtr k, const PointSet& points, double tol) {
  const auto family = ideal_probe_family(k->dim());
  IdealProbe probe;
  probe.membership = sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    double worst = 0.0;
    for (const auto& b : family) worst = std::max(worst, ideal_membership_single_generator(k, a, b, p).residual);
    return worst;
  });
  probe.self = sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    return ideal_membership_single_generator(k, a, a, p).generator_self_residual;
  });
  probe.candidate = probe.membership.max_residual <= tol;
  return probe;
}

// --- Lenard chains, compatibility -------------------------------------------

LenardVerdict check_lenard_generator(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points) {
  const int n = c.dim();
  std::vector<FieldPtr> frame;
  for (int j = 0; j < n; ++j) frame.push_back(frame_vector(c, xi, j));
  LenardVerdict v;
  std::vector<double> conds(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const auto m = lenard_frame(c, *xi, points[i]);
    conds[i] = condition_number(as_matrix(m, n));
  });
  for (double cnd : conds) {
    if (std::isnan(cnd)) cnd = std::numeric_limits<double>::infinity();
    v.worst_condition = std::max(v.worst_condition, cnd);
  }
  v.independent = v.worst_condition <= kFrameConditionLimit;
  v.commutator = sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    double worst = 0.0;
    double scale = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto jet = jet1(*frame[j], std::span<const double>(p));
      scale = std::max(scale, max_abs_vec(jet.value) * max_abs_vec(jet.grad));
    }
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l) worst = std::max(worst, max_abs_vec(lie_bracket(*frame[j], *frame[l], p)));
    return worst / (1.0 + scale);
  });
  return v;
}

Sampled check_compatibility_identity(FieldPtr kj, FieldPtr kl, FieldPtr xi, const PointSet& points) {
  const int n = kj->dim();
  const auto xj = act_on_vector(kj, xi);
  const auto xl = act_on_vector(kl, xi);
  return sample_max(points, [&](const std::vector<double>& p) -> std::optional<double> {
    const auto t1 = lie_bracket(*xj, *xl, p);
    const auto t2 = act_vector((*kj)(p), lie_bracket(*xi, *xl, p), n);
    const auto t3 = act_vector((*kl)(p), lie_bracket(*xj, *xi, p), n);
    double defect = 0.0;
    for (int i = 0; i < n; ++i) defect = std::max(defect, std::abs(t1[i] - t2[i] - t3[i]));
    const double scale = std::max({max_abs_vec(t1), max_abs_vec(t2), max_abs_vec(t3)});
    return defect / (1.0 + scale);
  });
}

std::vector<FieldPtr> random_quadratic_vector_fields(const ChartBox& chart, int count, std::uint64_t seed) {
  const int n = chart.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<FieldPtr> out;
  for (int f = 0; f < count; ++f) {
    // Per component: constant, n linear and n*n quadratic coefficients.
    std::vector<double> a(static_cast<std::size_t>(n * (1 + n + n * n)));
    for (auto& v : a) v = coef(rng);
    out.push_back(make_field(n, Valence::Vector, [a, n](auto x, auto result) {
      using T = span_scalar_t<decltype(result)>;
      const int stride = 1 + n + n * n;
      for (int i = 0; i < n; ++i) {
        const double* ci = a.data() + i * stride;
        T s(ci[0]);
        for (int k = 0; k < n; ++k) s += ci[1 + k] * x[k];
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += ci[1 + n + k * n + l] * (x[k] * x[l]);
        result[i] = s;
      }
    }));
  }
  return out;
}

// --- WDVV ------------------------------------------------------------------

std::vector<double> third_derivatives(const HaantjesCandidate& c, FieldPtr xi, std::span<const double> p,
                                      const std::vector<PotentialPerturbation>& perturbations) {
  const int n = c.dim();
  const std::vector<double> x(p.begin(), p.end());
  const auto beta = square_forms(c, x);
  const auto frame = lenard_frame(c, *xi, x);
  std::vector<double> out(static_cast<std::size_t>(n * n * n), 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += beta[(j * n + l) * n + a] * frame[a * n + m];
        out[(j * n + l) * n + m] = s;
      }
  for (const auto& pert : perturbations) {
    const auto grad = jet1(*pert.delta, p).grad;
    for (int m = 0; m < n; ++m) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += grad[a] * frame[a * n + m];
      out[(pert.j * n + pert.l) * n + m] += s;
    }
  }
  return out;
}

WdvvResult wdvv_check(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points,
                      const std::vector<PotentialPerturbation>& perturbations) {
  if (!xi) throw NoGenerator("WDVV check needs a Lenard chain generator");
  const int n = c.dim();
  std::vector<FieldPtr> frame;
  for (int j = 0; j < n; ++j) frame.push_back(frame_vector(c, xi, j));
  const FrameCoordinates coords(c.chart, frame);

  WdvvResult r;
  std::vector<double> roundtrip(points.size(), 0.0);
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const auto t = coords.from_chart(points[i]);
    const auto back = coords.to_chart(t);
    roundtrip[i] = max_abs_diff(back, points[i]);
  });
  for (double v : roundtrip) r.coordinate_roundtrip = std::max(r.coordinate_roundtrip, v);

  struct PointResult {
    double symmetry = 0.0, commutation = 0.0, associativity = 0.0;
    bool degenerate = false;
  };
  std::vector<PointResult> values(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const auto cc = third_derivatives(c, xi, points[i], perturbations);
    auto at = [&](int j, int l, int m) { return cc[(j * n + l) * n + m]; };
    const double scale = 1.0 + max_abs_vec(cc);
    PointResult& out = values[i];
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          const double v = at(j, l, m);
          const double d = std::max({std::abs(v - at(l, j, m)), std::abs(v - at(j, m, l)), std::abs(v - at(m, l, j))});
          out.symmetry = std::max(out.symmetry, d / scale);
        }
    Matrix<double> eta(n, n);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) eta(m, k) = at(0, m, k);
    if (!(condition_number(eta) <= kFrameConditionLimit)) {
      out.degenerate = true;
      return;
    }
    const auto eta_inv = inverse(eta);
    std::vector<double> cm(static_cast<std::size_t>(n * n * n), 0.0);
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += at(j, l, k) * eta_inv(k, m);
          cm[(m * n + j) * n + l] = s;
        }
    std::vector<std::vector<double>> mats(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      mats[j].resize(static_cast<std::size_t>(n * n));
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l) mats[j][m * n + l] = cm[(m * n + j) * n + l];
    }
    const double cmax = max_abs_vec(cm);
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        const auto d = max_abs_diff(matmul(mats[j], mats[l], n), matmul(mats[l], mats[j], n));
        out.commutation = std::max(out.commutation, d / (1.0 + cmax * cmax));
      }
    out.associativity = associativity_defect(cm, n).residual;
  });
  for (Sampled* s : {&r.symmetry, &r.commutation, &r.associativity}) s->points = static_cast<int>(points.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto merge = [&](Sampled& s, double v) {
      if (s.worst_point < 0 || v > s.max_residual) {
        s.max_residual = v;
        s.worst_point = static_cast<int>(i);
      }
    };
    merge(r.symmetry, values[i].symmetry);
    if (values[i].degenerate) {
      ++r.commutation.excluded;
      ++r.associativity.excluded;
      continue;
    }
    merge(r.commutation, values[i].commutation);
    merge(r.associativity, values[i].associativity);
  }
  return r;
}

}  // namespace haantjes
