#include "haantjes/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "haantjes/certifier.hpp"
#include "haantjes/frame_coordinates.hpp"
#include "haantjes/parallel.hpp"
#include "haantjes/symmetry_metric.hpp"

namespace haantjes {

bool check_selected(const std::string& id, const std::vector<std::string>& only) {
  if (only.empty()) return true;
  for (const auto& prefix : only)
    if (id.compare(0, prefix.size(), prefix) == 0) return true;
  return false;
}

std::vector<double> hessian_at(FieldPtr f, std::span<const double> p) {
  const int n = f->dim();
  const auto grad = make_field(n, Valence::OneForm, [f](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    const auto j = jet1(*f, std::span<const T>(x.data(), x.size()));
    std::copy(j.grad.begin(), j.grad.end(), out.begin());
  });
  return jet1(*grad, p).grad;
}

namespace {

std::string fmt(double v) { return format_residual(v); }

std::string fmt_list(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << fmt(v[i]);
  os << "]";
  return os.str();
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

/// Record builder tied to the report being assembled.
class Recorder {
 public:
  Recorder(CertificateReport& report, const std::vector<std::string>& only) : report_(report), only_(only) {}

  bool wants(const std::string& id) const { return check_selected(id, only_); }
  bool wants_any(const std::vector<std::string>& ids) const {
    for (const auto& id : ids)
      if (wants(id)) return true;
    return false;
  }

  CheckRecord& add(const std::string& id, const std::string& anchor, double residual, double tol, int points,
                   int excluded = 0) {
    CheckRecord r;
    r.id = id;
    r.anchor = anchor;
    r.max_residual = residual;
    r.tolerance = tol;
    r.points = points;
    r.excluded = excluded;
    r.verdict = residual <= tol ? Verdict::Pass : Verdict::Fail;
    report_.records.push_back(r);
    return report_.records.back();
  }

  CheckRecord& add(const std::string& id, const std::string& anchor, const Sampled& s, double tol) {
    auto& r = add(id, anchor, s.max_residual, tol, s.points, s.excluded);
    if (s.points > 0 && s.excluded == s.points) {
      r.verdict = Verdict::Fail;
      r.max_residual = std::numeric_limits<double>::infinity();
      r.message = "every sample point was excluded";
    }
    return r;
  }

  CheckRecord& skip(const std::string& id, const std::string& anchor, const std::string& why, bool gating = false) {
    CheckRecord r;
    r.id = id;
    r.anchor = anchor;
    r.verdict = Verdict::Skipped;
    r.gating = gating;
    r.message = why;
    report_.records.push_back(r);
    return report_.records.back();
  }

  CheckRecord& fail(const std::string& id, const std::string& anchor, const std::string& why, double tol) {
    CheckRecord r;
    r.id = id;
    r.anchor = anchor;
    r.verdict = Verdict::Fail;
    r.tolerance = tol;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.message = why;
    report_.records.push_back(r);
    return report_.records.back();
  }

  /// Runs `body`, which adds records for `ids`; errors become FAIL records
  /// for the selected ids that were not added yet.
  void run(const std::vector<std::string>& ids, const std::vector<std::string>& anchors, double tol,
           const std::function<void()>& body) {
    if (!wants_any(ids)) return;
    const std::size_t before = report_.records.size();
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const Error& e) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!wants(ids[i]) || added_since(before, ids[i])) continue;
        fail(ids[i], anchors[i], e.what(), tol);
      }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const std::size_t added = report_.records.size() - before;
    for (std::size_t i = before; i < report_.records.size(); ++i) report_.records[i].millis = ms / added;
  }

 private:
  bool added_since(std::size_t before, const std::string& id) const {
    for (std::size_t i = before; i < report_.records.size(); ++i)
      if (report_.records[i].id == id) return true;
    return false;
  }

  CertificateReport& report_;
  const std::vector<std::string>& only_;
};

const char* kAnchorCommute = "pairwise commuting operators";
const char* kAnchorClosed = "square of 1-forms closed";
const char* kAnchorPotentials = "potential functions of the square";
const char* kAnchorHessian = "matrix potential is a Hessian";
const char* kAnchorConstants = "structure constants of the operator algebra";
const char* kAnchorYanoAko = "Yano-Ako equations";
const char* kAnchorWeak = "weak Haantjes conditions";
const char* kAnchorIdeal = "single exact generator ideal (diagnostic)";
const char* kAnchorLenard = "Lenard chain generator";
const char* kAnchorCompat = "compatibility identity of hydrodynamic flows";
const char* kAnchorWdvv = "WDVV (generalized, Hessian symmetry + associativity)";
const char* kAnchorMetric = "metric of a conformal symmetry";
const char* kAnchorFlat = "flat semiriemannian metric";

}  // namespace

CertificateReport run_checks(const Manifest& m, const CheckOptions& options) {
  const double tol = options.tol.value_or(m.checks.tol);
  const int npoints = options.points.value_or(m.checks.points);
  const std::uint64_t seed = options.seed.value_or(m.checks.seed);
  if (npoints < 1) throw SchemaError("checks.points: must be positive");
  if (!(tol > 0)) throw SchemaError("checks.tol: must be positive");

  CertificateReport report;
  report.tool_version = tool_version();
  report.manifest_name = m.name;
  report.manifest_source = m.source;
  report.manifest_hash = hex64(fnv1a64(m.text));
  report.chart = m.chart;
  report.points = npoints;
  report.seed = seed;
  report.tolerance = tol;
  const auto start = std::chrono::steady_clock::now();

  const auto c = candidate_from_manifest(m);
  const int n = c.dim();
  const auto points = sample_points(m.chart, npoints, seed);
  Recorder rec(report, options.only);

  // commute
  rec.run({"commute"}, {kAnchorCommute}, tol, [&] {
    const auto r = check_commuting(c, points);
    rec.add("commute", kAnchorCommute, max_of(r), tol, npoints);
  });

  // closed (also a prerequisite of the potentials)
  std::optional<std::vector<double>> closed;
  auto closed_residuals = [&]() -> const std::vector<double>& {
    if (!closed) closed = check_square_closed(c, points);
    return *closed;
  };
  rec.run({"closed"}, {kAnchorClosed}, tol, [&] {
    const auto& r = closed_residuals();
    auto& record = rec.add("closed", kAnchorClosed, max_of(r), tol, npoints);
    for (int j = 0; j < n; ++j)
      for (int l = j; l < n; ++l)
        if (r[j * n + l] > tol) {
          record.details["worst_pair"] = std::to_string(j + 1) + "," + std::to_string(l + 1);
        }
  });

  // potentials and the Hessian round trip
  rec.run({"potentials", "hessian-roundtrip"}, {kAnchorPotentials, kAnchorHessian}, tol, [&] {
    const bool is_closed = max_of(closed_residuals()) <= tol;
    if (!is_closed) {
      if (rec.wants("potentials")) rec.skip("potentials", kAnchorPotentials, "the square of 1-forms is not closed");
      if (rec.wants("hessian-roundtrip"))
        rec.skip("hessian-roundtrip", kAnchorHessian, "the square of 1-forms is not closed");
      return;
    }
    const auto pot = integrate_potentials(c, closed_residuals(), tol);
    std::vector<int> reversed(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) reversed[i] = n - 1 - i;
    std::vector<std::vector<double>> table(points.size()), table_rev(points.size());
    parallel_for(static_cast<int>(points.size()), [&](int i) {
      table[i] = pot.evaluate(points[i]);
      table_rev[i] = pot.evaluate(points[i], reversed);
    });
    if (rec.wants("potentials")) {
      double path = 0.0, sym = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double scale = 1.0 + max_abs(table[i]);
        path = std::max(path, max_abs_diff(table[i], table_rev[i]) / scale);
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) sym = std::max(sym, std::abs(table[i][j * n + l] - table[i][l * n + j]) / scale);
      }
      auto& r = rec.add("potentials", kAnchorPotentials, std::max(path, sym), tol, npoints);
      r.details["path_independence"] = fmt(path);
      r.details["symmetry"] = fmt(sym);
    }
    if (!rec.wants("hessian-roundtrip")) return;
    if (!c.hessian_potential) {
      rec.skip("hessian-roundtrip", kAnchorHessian, "no potential F in the manifest");
      return;
    }
    if (!c.generator) {
      rec.skip("hessian-roundtrip", kAnchorHessian, "F needs a Lenard chain generator for its t-coordinates");
      return;
    }
    std::vector<FieldPtr> frame;
    for (int j = 0; j < n; ++j) frame.push_back(frame_vector(c, c.generator, j));
    const FrameCoordinates coords(c.chart, frame);
    const auto h0 = hessian_at(c.hessian_potential, coords.from_chart(c.chart.base));
    std::vector<double> worst(points.size(), 0.0);
    parallel_for(static_cast<int>(points.size()), [&](int i) {
      auto h = hessian_at(c.hessian_potential, coords.from_chart(points[i]));
      for (std::size_t e = 0; e < h.size(); ++e) h[e] -= h0[e];
      worst[i] = max_abs_diff(h, table[i]) / (1.0 + std::max(max_abs(h), max_abs(table[i])));
    });
    rec.add("hessian-roundtrip", kAnchorHessian, max_of(worst), tol, npoints);
  });

  // structure constants
  const std::vector<std::string> constant_ids = {"constants.symmetry", "constants.associativity", "constants.unity",
                                                 "constants.reconstruction"};
  std::optional<StructureConstantSummary> constants;
  rec.run(constant_ids, std::vector<std::string>(4, kAnchorConstants), tol, [&] {
    constants = check_structure_constants(c, points);
    const Sampled* parts[] = {&constants->symmetry, &constants->associativity, &constants->unity,
                              &constants->reconstruction};
    for (int i = 0; i < 4; ++i)
      if (rec.wants(constant_ids[i])) rec.add(constant_ids[i], kAnchorConstants, *parts[i], tol);
  });

  // Yano-Ako
  rec.run({"yano-ako"}, {kAnchorYanoAko}, tol, [&] {
    if (!c.generator) {
      rec.skip("yano-ako", kAnchorYanoAko, "needs a Lenard chain generator to place the constants on the chart");
      return;
    }
    const auto s = check_yano_ako(c, c.generator, points);
    auto& r = rec.add("yano-ako", kAnchorYanoAko, s, tol);
    if (constants) {
      const bool pre = constants->symmetry.max_residual <= tol && constants->associativity.max_residual <= tol;
      r.details["preconditions"] = pre ? "met" : "not met (computed unconditionally)";
    }
  });

  // weak Haantjes conditions, one operator at a time
  for (const auto& name : m.candidate.weak) {
    const auto k = m.field(name);
    const std::string t = "weak-haantjes.torsion@" + name, cl = "weak-haantjes.closed@" + name,
                      dk = "weak-haantjes.dk2@" + name;
    rec.run({t, cl, dk}, {kAnchorWeak, kAnchorWeak, kAnchorWeak}, tol, [&] {
      const auto w = check_weak_haantjes(c.potential, k, points);
      if (rec.wants(t)) rec.add(t, kAnchorWeak, w.torsion, tol);
      if (rec.wants(cl)) rec.add(cl, kAnchorWeak, w.closed, tol);
      if (rec.wants(dk)) rec.add(dk, kAnchorWeak, w.dk2, tol);
    });
    const std::string id = "ideal@" + name;
    rec.run({id}, {kAnchorIdeal}, tol, [&] {
      const auto probe = probe_single_generator_ideal(c.potential, k, points, tol);
      auto& r = rec.add(id, kAnchorIdeal, probe.membership, tol);
      r.gating = false;
      r.verdict = Verdict::Info;
      r.details["single_generator_candidate"] = probe.candidate ? "yes" : "no";
      r.details["self_residual"] = fmt(probe.self.max_residual);
    });
  }

  // Lenard chain generator
  std::optional<LenardVerdict> lenard;
  rec.run({"lenard.independent", "lenard.commute"}, {kAnchorLenard, kAnchorLenard}, tol, [&] {
    if (!c.generator) {
      if (rec.wants("lenard.independent")) rec.skip("lenard.independent", kAnchorLenard, "no generator xi");
      if (rec.wants("lenard.commute")) rec.skip("lenard.commute", kAnchorLenard, "no generator xi");
      return;
    }
    lenard = check_lenard_generator(c, c.generator, points);
    if (rec.wants("lenard.independent")) {
      auto& r = rec.add("lenard.independent", kAnchorLenard, lenard->worst_condition, kFrameConditionLimit, npoints);
      r.details["measure"] = "condition number of the frame";
    }
    if (rec.wants("lenard.commute")) rec.add("lenard.commute", kAnchorLenard, lenard->commutator, tol);
  });

  // compatibility identity for random xi
  rec.run({"compatibility"}, {kAnchorCompat}, tol, [&] {
    const auto xis = random_quadratic_vector_fields(c.chart, 3, seed);
    Sampled worst;
    worst.points = npoints;
    for (const auto& xi : xis)
      for (int j = 0; j < n; ++j)
        for (int l = j + 1; l < n; ++l) {
          const auto s = check_compatibility_identity(c.operators[j], c.operators[l], xi, points);
          if (s.max_residual >= worst.max_residual) {
            worst.max_residual = s.max_residual;
            worst.worst_point = s.worst_point;
          }
        }
    auto& r = rec.add("compatibility", kAnchorCompat, worst, tol);
    r.details["random_fields"] = "3";
  });

  // WDVV
  rec.run({"wdvv.symmetry", "wdvv.associativity"}, {kAnchorWdvv, kAnchorWdvv}, tol, [&] {
    std::string why;
    if (!c.generator) why = "no generator xi";
    else if (lenard && !lenard->independent) why = "the Lenard frame is degenerate";
    if (!why.empty()) {
      if (rec.wants("wdvv.symmetry")) rec.skip("wdvv.symmetry", kAnchorWdvv, why);
      if (rec.wants("wdvv.associativity")) rec.skip("wdvv.associativity", kAnchorWdvv, why);
      return;
    }
    const auto w = wdvv_check(c, c.generator, points);
    if (rec.wants("wdvv.symmetry")) {
      auto& r = rec.add("wdvv.symmetry", kAnchorWdvv, w.symmetry, tol);
      r.details["coordinate_roundtrip"] = fmt(w.coordinate_roundtrip);
    }
    if (rec.wants("wdvv.associativity")) {
      Sampled s = w.associativity;
      s.max_residual = std::max(s.max_residual, w.commutation.max_residual);
      auto& r = rec.add("wdvv.associativity", kAnchorWdvv, s, tol);
      r.details["commutation"] = fmt(w.commutation.max_residual);
      r.details["associativity"] = fmt(w.associativity.max_residual);
    }
  });

  // conformal symmetries, metric and flatness
  for (const auto& name : m.candidate.symmetries) {
    const auto xi = m.field(name);
    const std::vector<std::string> stems = {"metric.fit",         "metric.nonsingular",  "metric.c-symmetry",
                                            "metric.commutators", "metric.derivatives",  "metric.connection",
                                            "metric.compatibility", "metric.proof-identity", "metric.riemann",
                                            "metric.riemann-dual-path", "metric.riemann-oracle",
                                            "metric.riemann-agreement", "metric.flatness"};
    std::vector<std::string> ids;
    for (const auto& s : stems) ids.push_back(s + "@" + name);
    auto id = [&](int i) { return ids[static_cast<std::size_t>(i)]; };
    rec.run(ids, std::vector<std::string>(ids.size(), kAnchorMetric), tol, [&] {
      const auto cert = certify_symmetry(c, xi, points, tol);
      const double oracle_tol = std::max(tol, kOracleTolerance);
      if (rec.wants(id(0))) {
        auto& r = rec.add(id(0), "conformal symmetry", std::max(cert.fit.residual.max_residual, cert.fit.constancy_defect),
                          tol, npoints, cert.fit.excluded);
        r.details["alpha"] = fmt(cert.fit.alpha);
        r.details["gamma"] = fmt_list(cert.fit.gamma);
        r.details["proportionality"] = fmt(cert.fit.residual.max_residual);
        r.details["constancy_defect"] = fmt(cert.fit.constancy_defect);
      }
      if (rec.wants(id(1))) {
        auto& r = rec.add(id(1), kAnchorMetric, cert.worst_condition, kMetricConditionLimit, npoints);
        r.details["measure"] = "condition number of xi(A_jl)";
        r.details["singular_points"] = std::to_string(cert.singular_points);
      }
      const Sampled* parts[] = {&cert.c_symmetry,   &cert.commutator,     &cert.derivative_relation,
                                &cert.connection,   &cert.compatibility,  &cert.proof_identity,
                                &cert.riemann_closed, &cert.riemann_dual_path, &cert.riemann_oracle,
                                &cert.riemann_agreement};
      const char* anchors[] = {"metric: third derivatives symmetric", "metric: frame commutators",
                               "metric: derivatives of the metric",  "Levi-Civita connection on the frame",
                               "metric compatibility of the connection", "metric: third derivative identity",
                               "Riemann tensor on the frame",        "Riemann tensor: two closed forms agree",
                               "Riemann tensor from the coordinate metric", "Riemann tensor: closed form vs oracle"};
      for (int i = 0; i < 10; ++i) {
        if (!rec.wants(id(2 + i))) continue;
        if (parts[i]->excluded == parts[i]->points) {
          rec.skip(id(2 + i), anchors[i], "the metric is singular at every point");
          continue;
        }
        const double t = (i >= 8) ? oracle_tol : tol;
        rec.add(id(2 + i), anchors[i], *parts[i], t);
      }
      if (rec.wants(id(12))) {
        CheckRecord& r = rec.add(id(12), kAnchorFlat, std::max(cert.riemann_closed.max_residual, cert.riemann_oracle.max_residual),
                                 oracle_tol, npoints, cert.singular_points);
        r.verdict = cert.verdict == Flatness::Flat      ? Verdict::Pass
                    : cert.verdict == Flatness::NotFlat ? Verdict::Fail
                                                        : Verdict::HypothesesUnmet;
        r.details["flatness"] = flatness_name(cert.verdict);
        if (cert.signature_known) {
          r.details["signature"] = "(" + std::to_string(cert.signature.positive) + "," +
                                   std::to_string(cert.signature.negative) + "," +
                                   std::to_string(cert.signature.zero) + ")";
        }
      }
    });
  }

  report.overall = overall_verdict(report.records);
  report.total_millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace haantjes
