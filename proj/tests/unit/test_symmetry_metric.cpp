#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "haantjes/candidate.hpp"
#include "haantjes/errors.hpp"
#include "haantjes/manifest.hpp"
#include "haantjes/symmetry_metric.hpp"

namespace haantjes {
namespace {

using Vec = std::vector<double>;

HaantjesCandidate scenario(const std::string& name) { return candidate_from_manifest(load_manifest(name)); }

int at4(int n, int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; }

TEST(CoordinateRiemann, RoundSphere) {
  const auto g = make_expr_field(2, Valence::Tensor11, {"1", "0", "0", "sin(u1)^2"});
  for (double th : {0.4, 1.0, 2.2}) {
    const Vec p = {th, 0.3};
    const auto r = coordinate_riemann(g, p);
    const double s2 = std::sin(th) * std::sin(th);
    EXPECT_NEAR(r.lowered[at4(2, 0, 1, 0, 1)], s2, 1e-12);
    EXPECT_NEAR(r.lowered[at4(2, 1, 0, 1, 0)], s2, 1e-12);
    EXPECT_NEAR(r.lowered[at4(2, 0, 1, 1, 0)], -s2, 1e-12);
    EXPECT_NEAR(r.lowered[at4(2, 0, 0, 0, 1)], 0.0, 1e-12);
  }
}

TEST(CoordinateRiemann, FlatMetricInCurvilinearCoordinates) {
  // Euclidean plane in polar coordinates.
  const auto g = make_expr_field(2, Valence::Tensor11, {"1", "0", "0", "u1^2"});
  const auto r = coordinate_riemann(g, Vec{1.3, 0.2});
  for (double v : r.lowered) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(ConformalSymmetry, ScalingWeights) {
  // E = (t1, 3/4 t2, 1/2 t3) on weighted-homogeneous data: L_E dt3 = 1/2 dt3 and
  // L_E K = (w_j - w_i) K^i_j entrywise for quasi-homogeneous entries.
  const auto c = scenario("scaling");
  const auto xi = load_manifest("scaling").field("E");
  const auto fit = fit_conformal_symmetry(c, xi, sample_points(c.chart, 10, 2));
  EXPECT_NEAR(fit.alpha, 0.5, 1e-12);
  ASSERT_EQ(fit.gamma.size(), 3u);
  EXPECT_NEAR(fit.gamma[0], 0.0, 1e-12);
  EXPECT_NEAR(fit.gamma[1], 0.25, 1e-12);
  EXPECT_NEAR(fit.gamma[2], 0.5, 1e-12);
  EXPECT_TRUE(fit.passes(1e-10));
}

TEST(Metric, SymmetricWithKnownSignature) {
  const auto c = scenario("a3-frobenius");
  const auto m = build_metric(c, c.generator, c.chart.base);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) EXPECT_DOUBLE_EQ(m.g[j * 3 + l], m.g[l * 3 + j]);
  const auto sig = metric_signature(m);
  EXPECT_EQ(sig.positive + sig.negative, 3);
  EXPECT_EQ(sig.zero, 0);
}

TEST(Metric, SingularMetricIsReported) {
  const auto c = scenario("a3-frobenius");
  const auto zero = zero_field(3, Valence::Vector);
  EXPECT_THROW(build_metric(c, zero, c.chart.base), SingularMetric);
}

TEST(Flatness, ScalingIsFlatOnBothPaths) {
  const auto c = scenario("scaling");
  const auto xi = load_manifest("scaling").field("E");
  const auto cert = certify_symmetry(c, xi, sample_points(c.chart, 10, 6), 1e-8);
  EXPECT_EQ(cert.verdict, Flatness::Flat);
  EXPECT_LT(cert.riemann_closed.max_residual, 1e-8);
  EXPECT_LT(cert.riemann_oracle.max_residual, kOracleTolerance);
  EXPECT_LT(cert.riemann_dual_path.max_residual, 1e-9);
  EXPECT_LT(cert.connection.max_residual, 1e-10);
  EXPECT_LT(cert.compatibility.max_residual, 1e-10);
}

TEST(Flatness, NonConstantFactorsAreHypothesesUnmet) {
  const auto c = scenario("scaling");
  const auto xi = make_expr_field(3, Valence::Vector, {"(1 + t1)*t1", "(1 + t1)*0.75*t2", "(1 + t1)*0.5*t3"});
  const auto cert = certify_symmetry(c, xi, sample_points(c.chart, 10, 6), 1e-8);
  EXPECT_FALSE(cert.fit.passes(1e-8));
  EXPECT_EQ(cert.verdict, Flatness::HypothesesUnmet);
  EXPECT_EQ(flatness_name(cert.verdict), "HYPOTHESES_UNMET");
}

TEST(Flatness, ClosedFormAgreesWithOracleAtAPoint) {
  const auto c = scenario("a3-frobenius");
  const auto pts = sample_points(c.chart, 3, 8);
  const auto fit = fit_conformal_symmetry(c, c.generator, pts);
  for (const auto& p : pts) {
    const auto m = build_metric(c, c.generator, p);
    const auto closed = riemann_closed_form(m, fit);
    const auto oracle = riemann_from_metric_oracle(c, c.generator, p);
    ASSERT_EQ(closed.c_form.size(), oracle.values.size());
    for (std::size_t i = 0; i < oracle.values.size(); ++i) {
      EXPECT_NEAR(closed.c_form[i], oracle.values[i], 1e-7 * (1 + oracle.scale));
      EXPECT_NEAR(closed.c_form[i], closed.structure_form[i], 1e-9 * (1 + closed.scale));
    }
  }
}

}  // namespace
}  // namespace haantjes
