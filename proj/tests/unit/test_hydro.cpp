#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "haantjes/candidate.hpp"
#include "haantjes/errors.hpp"
#include "haantjes/hydro.hpp"
#include "haantjes/manifest.hpp"
#include "haantjes/potentials.hpp"

namespace haantjes {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ChartBox line_chart() { return ChartBox{1, "u", {-2.0}, {2.0}, {0.0}}; }

GridState sine_grid(int n, double length = 1.0) {
  GridState s{n, 1, length, 0.0, std::vector<double>(n)};
  for (int i = 0; i < n; ++i) s.u[i] = std::sin(kTwoPi * s.x(i) / length);
  return s;
}

double max_error_against_translate(const GridState& s) {
  double e = 0.0;
  for (int i = 0; i < s.points; ++i) e = std::max(e, std::abs(s.u[i] - std::sin(kTwoPi * (s.x(i) + s.time))));
  return e;
}

TEST(Hydro, SpatialOperatorsOnASine) {
  const auto s = sine_grid(64);
  const auto fourier = spatial_derivative(s, SpatialOperator::Fourier);
  const auto cd4 = spatial_derivative(s, SpatialOperator::CentralDifference4);
  double ef = 0.0, ec = 0.0;
  for (int i = 0; i < s.points; ++i) {
    const double exact = kTwoPi * std::cos(kTwoPi * s.x(i));
    ef = std::max(ef, std::abs(fourier[i] - exact));
    ec = std::max(ec, std::abs(cd4[i] - exact));
  }
  EXPECT_LT(ef, 1e-11);
  // Leading CD4 error: k^5 dx^4 / 30.
  const double bound = std::pow(kTwoPi, 5) * std::pow(s.dx(), 4) / 30.0;
  EXPECT_LT(ec, 1.1 * bound);
  EXPECT_GT(ec, 0.5 * bound);
}

TEST(Hydro, RhsOfQuasilinearSystem) {
  // K = u: RHS = u u_x.
  const auto k = make_expr_field(1, Valence::Tensor11, {"u1"});
  const auto s = sine_grid(64);
  const auto rhs = build_rhs(*k, s, SpatialOperator::Fourier);
  for (int i = 0; i < s.points; ++i) {
    EXPECT_NEAR(rhs[i], std::sin(kTwoPi * s.x(i)) * kTwoPi * std::cos(kTwoPi * s.x(i)), 1e-10);
  }
  // Two components, K = [[0, 1], [1, 0]]: RHS swaps the derivatives.
  const auto swap = make_expr_field(2, Valence::Tensor11, {"0", "1", "1", "0"});
  GridState g{32, 2, 1.0, 0.0, std::vector<double>(64)};
  for (int i = 0; i < 32; ++i) {
    g.u[2 * i] = std::sin(kTwoPi * g.x(i));
    g.u[2 * i + 1] = 0.0;
  }
  const auto r2 = build_rhs(*swap, g, SpatialOperator::Fourier);
  for (int i = 0; i < 32; ++i) {
    EXPECT_NEAR(r2[2 * i], 0.0, 1e-12);
    EXPECT_NEAR(r2[2 * i + 1], kTwoPi * std::cos(kTwoPi * g.x(i)), 1e-10);
  }
}

TEST(Hydro, AdvectionMatchesTranslation) {
  const auto k = identity_field(1);
  const auto r = integrate_flow(sine_grid(256), *k, line_chart(), 1e-3, 1000);
  EXPECT_NEAR(r.state.time, 1.0, 1e-12);
  EXPECT_FALSE(r.blew_up);
  EXPECT_LT(max_error_against_translate(r.state), 1e-6);
}

TEST(Hydro, Rk4TemporalOrder) {
  // Fourier differentiation is exact for one mode, so only the time error remains.
  const auto k = identity_field(1);
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto r = integrate_flow(sine_grid(16), *k, line_chart(), dt, static_cast<int>(std::lround(1.0 / dt)),
                                  SpatialOperator::Fourier);
    err.push_back(max_error_against_translate(r.state));
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 3.8);
  EXPECT_GE(std::log2(err[1] / err[2]), 3.8);
}

TEST(Hydro, ConstantDataIsStationary) {
  const auto m = load_manifest("a3-frobenius");
  SimulationSettings flat = m.simulate;
  flat.amplitude = 0.0;
  const auto u0 = initial_state(m.chart, flat, 32);
  const auto r = integrate_flow(u0, *m.field("K2"), m.chart, 1e-3, 20);
  EXPECT_EQ(grid_l2_distance(r.state, u0), 0.0);
}

TEST(Hydro, CflAndGridChecks) {
  const auto m = load_manifest("a3-frobenius");
  const auto u0 = initial_state(m.chart, m.simulate, 64);
  EXPECT_GT(cfl_number(*m.field("K2"), u0, 1.0), 0.5);
  EXPECT_THROW(integrate_flow(u0, *m.field("K2"), m.chart, 1.0, 1), CflViolation);
  EXPECT_THROW(initial_state(m.chart, m.simulate, 8), SchemaError);
  SimulationSettings big = m.simulate;
  big.amplitude = 5.0;
  EXPECT_THROW(initial_state(m.chart, big, 64), DomainError);
}

TEST(Hydro, ExactCandidateConservesDensities) {
  const auto m = load_manifest("a3-frobenius");
  const auto c = candidate_from_manifest(m);
  const PotentialSquare pot(c);
  const auto u0 = initial_state(m.chart, m.simulate, 128);
  const auto res = conservation_check(u0, *c.operators[1], pot, m.chart, 1e-3, 100, 20);
  EXPECT_LT(res.max_drift, 1e-10);
  EXPECT_EQ(res.times.size(), res.integrals.size());
}

TEST(Hydro, CommutingFlowsOrders) {
  const auto m = load_manifest("a3-frobenius");
  const auto c = candidate_from_manifest(m);
  SimulationSettings s = m.simulate;
  s.length = kTwoPi;
  s.amplitude = 0.3;
  const auto u0 = initial_state(m.chart, s, 128);
  const auto r = commuting_flows_check(u0, *c.operators[1], *c.operators[2], m.chart, {1e-2, 5e-3, 2.5e-3});
  ASSERT_EQ(r.orders.size(), 2u);
  EXPECT_GE(r.min_order, 3.0);
}

TEST(Hydro, BlowUpIsReported) {
  // Burgers steepening: u_t = u u_x breaks at t = 1 / max|u0'| = 1 / (2 pi).
  const auto k = make_expr_field(1, Valence::Tensor11, {"u1"});
  const auto r = integrate_flow(sine_grid(64), *k, line_chart(), 2e-3, 2000);
  EXPECT_TRUE(r.blew_up || r.left_chart);
  EXPECT_GT(r.breakdown_time, 0.1);
}

}  // namespace
}  // namespace haantjes
