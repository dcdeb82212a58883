// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "haantjes/candidate.hpp"
#include "haantjes/certifier.hpp"
#include "haantjes/concomitants.hpp"
#include "haantjes/errors.hpp"
#include "haantjes/geometry.hpp"
#include "haantjes/hydro.hpp"
#include "haantjes/manifest.hpp"
#include "haantjes/pipeline.hpp"
#include "haantjes/potentials.hpp"
#include "haantjes/report.hpp"
#include "haantjes/symmetry_metric.hpp"

using namespace haantjes;

namespace {

using Vec = std::vector<double>;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kIdentityTol = 1e-9;
constexpr double kIdentitySeconds = 10.0;
constexpr int kIdentityInputs = 60;
constexpr double kTensorialTol = 1e-8;
constexpr double kDiagonalTol = 1e-10;
constexpr int kDiagonalCases = 20;
constexpr double kCertifyTol = 1e-8;
constexpr int kCertifyPoints = 50;
constexpr double kCertifySeconds = 60.0;
constexpr double kRoundTripTol = 1e-8;
constexpr double kCurvatureTol = 1e-7;
constexpr double kDualPathTol = 1e-9;
constexpr double kCompatTol = 1e-8;
constexpr double kOrderMin = 3.0;
constexpr double kDriftTol = 1e-6;
constexpr double kAdvectionTol = 1e-6;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

double rel_max(const Vec& got, const Vec& want) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    d = std::max(d, std::abs(got[i] - want[i]));
    s = std::max(s, std::abs(want[i]));
  }
  return d / (1.0 + s);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string("(") + buf + ")";
}

// ---------------------------------------------------------------------------
// Quadratic polynomials with exact derivatives, for the identity oracle.

struct Quadratic {
  int n = 0;
  double c = 0.0;
  Vec b;  // linear
  Vec a;  // symmetric n x n, value = c + b.x + x^T a x

  double value(const Vec& x) const {
    double v = c;
    for (int i = 0; i < n; ++i) {
      v += b[i] * x[i];
      for (int j = 0; j < n; ++j) v += a[i * n + j] * x[i] * x[j];
    }
    return v;
  }
  double d(const Vec& x, int k) const {
    double v = b[k];
    for (int j = 0; j < n; ++j) v += 2.0 * a[k * n + j] * x[j];
    return v;
  }
  double dd(int k, int l) const { return 2.0 * a[k * n + l]; }

  std::string source() const {
    std::string s = num(c);
    for (int i = 0; i < n; ++i) s += " + " + num(b[i]) + "*u" + std::to_string(i + 1);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double coef = i == j ? a[i * n + i] : 2.0 * a[i * n + j];
        s += " + " + num(coef) + "*u" + std::to_string(i + 1) + "*u" + std::to_string(j + 1);
      }
    return s;
  }
};

Quadratic random_quadratic(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Quadratic q;
  q.n = n;
  q.c = u(rng);
  q.b.resize(n);
  q.a.assign(n * n, 0.0);
  for (double& v : q.b) v = u(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) q.a[i * n + j] = q.a[j * n + i] = 0.5 * u(rng);
  return q;
}

std::vector<std::string> sources(const std::vector<Quadratic>& qs) {
  std::vector<std::string> s;
  for (const auto& q : qs) s.push_back(q.source());
  return s;
}

Vec random_vector(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (double& x : v) x = u(rng);
  return v;
}

struct OracleValues {
  double dk2a = 0.0;        // d_K d_K A (X, Y)
  double da_torsion = 0.0;  // dA(T(X, Y))
  double d_alpha_prime = 0.0, first_rhs = 0.0;
  double dk_alpha_prime = 0.0, second_rhs = 0.0;
};

// Everything from the bracket definitions on coordinate fields, with exact
// polynomial derivatives.
OracleValues identity_oracle(const std::vector<Quadratic>& k, const Quadratic& a, const std::vector<Quadratic>& alpha,
                             const Vec& x, const Vec& xi, const Vec& eta) {
  const int n = a.n;
  auto K = [&](int i, int j) { return k[i * n + j].value(x); };
  auto dK = [&](int i, int j, int s) { return k[i * n + j].d(x, s); };

  // T^j_{lm} = [K d_l, K d_m]^j - (K [K d_l, d_m])^j - (K [d_l, K d_m])^j
  std::vector<double> tor(n * n * n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += K(q, l) * dK(j, m, q) - K(q, m) * dK(j, l, q);
        for (int i = 0; i < n; ++i) s -= K(j, i) * (-dK(i, l, m)) + K(j, i) * dK(i, m, l);
        tor[(j * n + l) * n + m] = s;
      }
  auto t_on = [&](const Vec& X, const Vec& Y) {
    Vec out(n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) out[j] += tor[(j * n + l) * n + m] * X[l] * Y[m];
    return out;
  };

  // d_K of a 1-form given its values and first partials:
  // (d_K b)(d_m, d_p) = (K d_m) b_p - (K d_p) b_m - b([K d_m, d_p] + [d_m, K d_p]).
  auto dK_form = [&](const Vec& bv, const std::vector<Vec>& db) {
    Vec w(n * n, 0.0);
    for (int m = 0; m < n; ++m)
      for (int p = 0; p < n; ++p) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += K(j, m) * db[p][j] - K(j, p) * db[m][j];
        for (int l = 0; l < n; ++l) s -= bv[l] * (dK(l, p, m) - dK(l, m, p));
        w[m * n + p] = s;
      }
    return w;
  };
  auto bil = [&](const Vec& w, const Vec& X, const Vec& Y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += w[i * n + j] * X[i] * Y[j];
    return s;
  };
  auto apply = [&](const Vec& v) {
    Vec out(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i] += K(i, j) * v[j];
    return out;
  };

  OracleValues o;
  // beta = d_K A, beta_l = K^j_l d_j A; db[l][m] = d_m beta_l.
  Vec beta(n, 0.0);
  std::vector<Vec> dbeta(n, Vec(n, 0.0));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      beta[l] += K(j, l) * a.d(x, j);
      for (int m = 0; m < n; ++m) dbeta[l][m] += dK(j, l, m) * a.d(x, j) + K(j, l) * a.dd(m, j);
    }
  o.dk2a = bil(dK_form(beta, dbeta), xi, eta);
  Vec da(n);
  for (int i = 0; i < n; ++i) da[i] = a.d(x, i);
  const auto txy = t_on(xi, eta);
  for (int i = 0; i < n; ++i) o.da_torsion += da[i] * txy[i];

  // alpha and alpha' = K alpha.
  Vec av(n), ap(n, 0.0);
  std::vector<Vec> dal(n, Vec(n)), dap(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) {
    av[i] = alpha[i].value(x);
    for (int m = 0; m < n; ++m) dal[i][m] = alpha[i].d(x, m);
  }
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      ap[l] += K(j, l) * av[j];
      for (int m = 0; m < n; ++m) dap[l][m] += dK(j, l, m) * av[j] + K(j, l) * dal[j][m];
    }
  auto ext = [&](const std::vector<Vec>& db) {
    Vec w(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i * n + j] = db[j][i] - db[i][j];
    return w;
  };
  const auto d_alpha = ext(dal);
  const auto kxi = apply(xi), keta = apply(eta);
  o.d_alpha_prime = bil(ext(dap), xi, eta);
  o.first_rhs = bil(d_alpha, kxi, eta) + bil(d_alpha, xi, keta) - bil(dK_form(av, dal), xi, eta);
  o.dk_alpha_prime = bil(dK_form(ap, dap), xi, eta);
  o.second_rhs = bil(d_alpha, kxi, keta);
  for (int i = 0; i < n; ++i) o.second_rhs += av[i] * txy[i];
  return o;
}

void criterion_identities() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  int inputs = 0;
  for (int trial = 0; trial < kIdentityInputs; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<Quadratic> k, alpha;
    for (int i = 0; i < n * n; ++i) k.push_back(random_quadratic(n, rng));
    for (int i = 0; i < n; ++i) alpha.push_back(random_quadratic(n, rng));
    const Quadratic a = random_quadratic(n, rng);
    const Vec x = random_vector(n, rng), xi = random_vector(n, rng), eta = random_vector(n, rng);

    const auto kf = make_expr_field(n, Valence::Tensor11, sources(k));
    const auto af = make_expr_field(n, Valence::Scalar, {a.source()});
    const auto alf = make_expr_field(n, Valence::OneForm, sources(alpha));
    const auto o = identity_oracle(k, a, alpha, x, xi, eta);

    const auto sq = dK_squared_identity(kf, af, x, xi, eta);
    const auto pr = check_alpha_prime_identities(kf, alf, x, xi, eta);
    for (double r : {sq.residual, pr.first.residual, pr.second.residual, rel(sq.lhs, o.dk2a), rel(sq.rhs, o.da_torsion),
                     rel(o.dk2a, o.da_torsion), rel(pr.first.lhs, o.d_alpha_prime), rel(pr.first.rhs, o.first_rhs),
                     rel(o.d_alpha_prime, o.first_rhs), rel(pr.second.lhs, o.dk_alpha_prime),
                     rel(pr.second.rhs, o.second_rhs), rel(o.dk_alpha_prime, o.second_rhs)}) {
      worst = std::max(worst, r);
    }
    // Torsion against the bracket form as a further cross-check.
    worst = std::max(worst, rel_max(nijenhuis_torsion(*kf, x), nijenhuis_bracket_form(kf, x)));
    ++inputs;
  }
  const double secs = seconds_since(t0);
  report(1, "differential identities on random polynomial data", worst <= kIdentityTol && secs < kIdentitySeconds,
         std::to_string(inputs) + " inputs in dims 2-4, worst relative " + fmt("%.3e", worst) + " (tol " +
             fmt("%.0e", kIdentityTol) + "), " + fmt("%.2f", secs) + " s (limit " + fmt("%.0f", kIdentitySeconds) +
             " s)");
}

// ---------------------------------------------------------------------------

// v_i = u_i + sum_{j>i} c_ij u_j^2 with its exact inverse.
ChartMap random_triangular_map(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<double> c(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c[i * n + j] = u(rng);
  std::vector<std::string> fwd(n), inv(n);
  for (int i = n - 1; i >= 0; --i) {
    fwd[i] = "u" + std::to_string(i + 1);
    inv[i] = "u" + std::to_string(i + 1);
    for (int j = i + 1; j < n; ++j) {
      fwd[i] += " + " + num(c[i * n + j]) + "*u" + std::to_string(j + 1) + "^2";
      inv[i] += " - " + num(c[i * n + j]) + "*(" + inv[j] + ")^2";
    }
  }
  return make_chart_map(n, fwd, inv);
}

void criterion_tensoriality() {
  std::mt19937_64 rng(777);
  double worst = 0.0;
  int cases = 0;
  for (int trial = 0; trial < 9; ++trial) {
    const int n = 2 + trial % 3;
    const auto map = random_triangular_map(n, rng);
    std::vector<Quadratic> k;
    for (int i = 0; i < n * n; ++i) k.push_back(random_quadratic(n, rng));
    const auto kf = make_expr_field(n, Valence::Tensor11, sources(k));
    const Vec p = random_vector(n, rng, -0.8, 0.8);
    const auto v = (*map.forward)(p);
    const auto pushed = pushforward(kf, map);
    worst = std::max(worst, rel_max(nijenhuis_torsion(*pushed, v),
                                    change_chart_components(nijenhuis_torsion(*kf, p), 1, 2, map, p)));
    worst = std::max(worst, rel_max(haantjes_torsion(*pushed, v),
                                    change_chart_components(haantjes_torsion(*kf, p), 1, 2, map, p)));
    cases += 2;
  }
  // Yano-Ako on the structure constants of the three-dimensional exact candidate.
  const auto cand = candidate_from_manifest(load_manifest("a3-frobenius"));
  const auto cfield = induced_multiplication_field(cand, cand.generator);
  for (int trial = 0; trial < 3; ++trial) {
    const auto map = random_triangular_map(3, rng);
    const auto p = sample_points(cand.chart, 3, 100 + trial)[trial];
    const auto v = (*map.forward)(p);
    const auto direct = yano_ako(*pushforward(cfield, map), v);
    const auto moved = change_chart_components(yano_ako(*cfield, p), 1, 4, map, p);
    worst = std::max(worst, rel_max(direct, moved));
    ++cases;
  }
  report(2, "tensoriality under random nonlinear chart changes", worst <= kTensorialTol,
         std::to_string(cases) + " comparisons (Nijenhuis, Haantjes, Yano-Ako), worst relative " + fmt("%.3e", worst) +
             " (tol " + fmt("%.0e", kTensorialTol) + ")");
}

void criterion_diagonal() {
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  double worst_torsion = 0.0;
  for (int trial = 0; trial < kDiagonalCases; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<std::string> src(n * n, "0");
    for (int i = 0; i < n; ++i) src[i * n + i] = random_quadratic(n, rng).source();
    const auto kf = make_expr_field(n, Valence::Tensor11, src);
    const Vec p = random_vector(n, rng);
    const auto jk = jet1(*kf, std::span<const double>(p));
    const double scale = 1.0 + std::pow(max_abs(jk.value), 3) * max_abs(jk.grad);
    worst = std::max(worst, max_abs(haantjes_torsion(*kf, p)) / scale);
    worst_torsion = std::max(worst_torsion, max_abs(nijenhuis_torsion(*kf, p)));
  }
  report(3, "Haantjes torsion of diagonal operators", worst <= kDiagonalTol && worst_torsion > 1e-3,
         std::to_string(kDiagonalCases) + " random diagonal operators, worst relative " + fmt("%.3e", worst) + " (tol " +
             fmt("%.0e", kDiagonalTol) + "), largest Nijenhuis component " + fmt("%.3f", worst_torsion));
}

void criterion_certification() {
  const Manifest m = load_manifest("a3-frobenius");
  CheckOptions o;
  o.points = kCertifyPoints;
  o.tol = kCertifyTol;
  const auto t0 = Clock::now();
  const auto r = run_checks(m, o);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  int checked = 0;
  bool all_pass = r.overall == Verdict::Pass;
  for (const auto& rec : r.records) {
    if (!rec.gating) continue;
    if (rec.verdict != Verdict::Pass) all_pass = false;
    if (rec.tolerance == kCertifyTol) {
      worst = std::max(worst, rec.max_residual);
      ++checked;
    }
  }
  report(4, "full certification of the three-dimensional exact candidate",
         all_pass && worst <= kCertifyTol && secs < kCertifySeconds,
         std::to_string(r.records.size()) + " records at " + std::to_string(kCertifyPoints) + " points, " +
             std::to_string(checked) + " held to " + fmt("%.0e", kCertifyTol) + ", worst " + fmt("%.3e", worst) +
             ", overall " + verdict_name(r.overall) + ", " + fmt("%.2f", secs) + " s (limit " +
             fmt("%.0f", kCertifySeconds) + " s)");
}

void criterion_hessian_roundtrip() {
  // F = t1^2 t3/2 + t1 t2^2/2 + t2^2 t3^2/4 + t3^5/60, Hessian by hand.
  auto hess = [](const Vec& t) {
    return Vec{t[2], t[1], t[0],
               t[1], t[0] + 0.5 * t[2] * t[2], t[1] * t[2],
               t[0], t[1] * t[2], 0.5 * t[1] * t[1] + t[2] * t[2] * t[2] / 3.0};
  };
  const Manifest m = load_manifest("a3-frobenius");
  const auto cand = candidate_from_manifest(m);
  const PotentialSquare pot(cand);
  const auto h0 = hess(m.chart.base);
  double worst = 0.0;
  for (const auto& p : sample_points(m.chart, kCertifyPoints, 42)) {
    const auto a = pot.evaluate(p);
    auto h = hess(p);
    for (int i = 0; i < 9; ++i) h[i] -= h0[i];
    worst = std::max(worst, rel_max(a, h));
  }
  CheckOptions o;
  o.only = {"hessian-roundtrip"};
  const auto rec = run_checks(m, o).find("hessian-roundtrip");
  const double tool = rec ? rec->max_residual : INFINITY;
  report(5, "potentials against the Hessian of the generating function",
         worst <= kRoundTripTol && tool <= kRoundTripTol && rec && rec->verdict == Verdict::Pass,
         "hand Hessian oracle worst " + fmt("%.3e", worst) + ", tool check " + fmt("%.3e", tool) + " (tol " +
             fmt("%.0e", kRoundTripTol) + ")");
}

void criterion_flatness() {
  std::string detail;
  bool ok = true;
  for (const auto& [name, sym] : {std::pair<std::string, std::string>{"a3-frobenius", "e"}, {"scaling", "E"}}) {
    const Manifest m = load_manifest(name);
    const auto cand = candidate_from_manifest(m);
    const auto cert = certify_symmetry(cand, m.field(sym), sample_points(m.chart, 20, 42), kCertifyTol);
    const bool flat = cert.verdict == Flatness::Flat && cert.riemann_closed.max_residual <= kCurvatureTol &&
                      cert.riemann_oracle.max_residual <= kCurvatureTol &&
                      cert.riemann_dual_path.max_residual <= kDualPathTol;
    ok = ok && flat;
    detail += name + ": " + flatness_name(cert.verdict) + " closed " + fmt("%.2e", cert.riemann_closed.max_residual) +
              " oracle " + fmt("%.2e", cert.riemann_oracle.max_residual) + " dual " +
              fmt("%.2e", cert.riemann_dual_path.max_residual) + "; ";
  }
  const Manifest s = load_manifest("scaling");
  const auto cand = candidate_from_manifest(s);
  const auto bent = make_expr_field(3, Valence::Vector, {"(1 + t1)*t1", "(1 + t1)*0.75*t2", "(1 + t1)*0.5*t3"});
  const auto cert = certify_symmetry(cand, bent, sample_points(s.chart, 20, 42), kCertifyTol);
  ok = ok && cert.verdict == Flatness::HypothesesUnmet;
  detail += "non-constant factors: " + flatness_name(cert.verdict);
  report(6, "flatness on both curvature paths (tol " + std::string(fmt("%.0e", kCurvatureTol)) + ", dual " +
                fmt("%.0e", kDualPathTol) + ")",
         ok, detail);
}

void criterion_hydro() {
  const Manifest m = load_manifest("a3-frobenius");
  const auto cand = candidate_from_manifest(m);
  bool ok = true;

  const auto pts = sample_points(m.chart, 20, 42);
  double compat = 0.0;
  for (const auto& xi : random_quadratic_vector_fields(m.chart, 3, 42))
    for (int j = 0; j < 3; ++j)
      for (int l = j + 1; l < 3; ++l)
        compat = std::max(compat, check_compatibility_identity(cand.operators[j], cand.operators[l], xi, pts).max_residual);
  ok = ok && compat <= kCompatTol;

  SimulationSettings wide = m.simulate;
  wide.length = 2.0 * std::numbers::pi;
  wide.amplitude = 0.3;
  const auto u_wide = initial_state(m.chart, wide, 128);
  const auto flows = commuting_flows_check(u_wide, *cand.operators[1], *cand.operators[2], m.chart,
                                           {1e-2, 5e-3, 2.5e-3}, SpatialOperator::Fourier);
  ok = ok && flows.min_order >= kOrderMin;

  const PotentialSquare pot(cand);
  const auto u0 = initial_state(m.chart, m.simulate, 256);
  const auto cons = conservation_check(u0, *cand.operators[1], pot, m.chart, 1e-3, 500, 50);
  ok = ok && cons.max_drift <= kDriftTol && !cons.flow.blew_up && !cons.flow.left_chart;

  GridState line{256, 1, 1.0, 0.0, Vec(256)};
  for (int i = 0; i < line.points; ++i) line.u[i] = std::sin(2.0 * std::numbers::pi * line.x(i));
  const ChartBox box{1, "u", {-2.0}, {2.0}, {0.0}};
  const auto adv = integrate_flow(line, *identity_field(1), box, 1e-3, 1000);
  double adv_err = 0.0;
  for (int i = 0; i < line.points; ++i)
    adv_err = std::max(adv_err, std::abs(adv.state.u[i] - std::sin(2.0 * std::numbers::pi * (line.x(i) + adv.state.time))));
  ok = ok && adv_err <= kAdvectionTol;

  report(7, "hydrodynamic flows", ok,
         "compatibility " + fmt("%.2e", compat) + " (tol " + fmt("%.0e", kCompatTol) + "), commuting-flow order " +
             fmt("%.2f", flows.min_order) + " (min " + fmt("%.1f", kOrderMin) + "), drift " +
             fmt("%.2e", cons.max_drift) + " (tol " + fmt("%.0e", kDriftTol) + "), advection " + fmt("%.2e", adv_err) +
             " (tol " + fmt("%.0e", kAdvectionTol) + ")");
}

void criterion_negative_controls() {
  bool ok = true;
  std::string detail;
  {
    CheckOptions o;
    o.only = {"closed"};
    const auto r = run_checks(load_manifest("perturbed-a3"), o);
    const auto* rec = r.find("closed");
    const bool failed = rec && rec->verdict == Verdict::Fail;
    ok = ok && failed;
    detail += "perturbed closedness " + (rec ? fmt("%.2e", rec->max_residual) : std::string("missing")) + " " +
              (failed ? "FAIL" : "not rejected") + "; ";
  }
  {
    CheckOptions o;
    o.only = {"weak-haantjes.torsion"};
    const auto r = run_checks(load_manifest("companion-3d"), o);
    const auto* rec = r.find("weak-haantjes.torsion@K");
    const bool failed = rec && rec->verdict == Verdict::Fail;
    ok = ok && failed;
    detail += "companion torsion " + (rec ? fmt("%.2e", rec->max_residual) : std::string("missing")) + " " +
              (failed ? "FAIL" : "not rejected") + "; ";
  }
  {
    const auto c = make_expr_field(2, Valence::Tensor12, {"0", "0", "0", "1", "0", "u1", "u1", "0"});
    bool raised = false;
    try {
      yano_ako_bracket(*c, Vec{0.5, 0.5}, true, 1e-8);
    } catch (const PreconditionViolated&) {
      raised = true;
    }
    ok = ok && raised;
    detail += std::string("non-associative structure constants ") + (raised ? "rejected" : "accepted");
  }
  report(8, "negative controls", ok, detail);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  auto guarded = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, "unexpected error", false, e.what());
    }
  };
  guarded(1, criterion_identities);
  guarded(2, criterion_tensoriality);
  guarded(3, criterion_diagonal);
  guarded(4, criterion_certification);
  guarded(5, criterion_hessian_roundtrip);
  guarded(6, criterion_flatness);
  guarded(7, criterion_hydro);
  guarded(8, criterion_negative_controls);
  std::printf("%d of 8 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
