#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "haantjes/errors.hpp"
#include "haantjes/field.hpp"
#include "haantjes/geometry.hpp"

namespace haantjes {
namespace {

using Vec = std::vector<double>;

TEST(Geometry, LieBracketOfCoordinateFields) {
  // X = u2 d1, Y = u1 d2: [X,Y] = u2 d2 - u1 d1.
  const auto x = make_expr_field(2, Valence::Vector, {"u2", "0"});
  const auto y = make_expr_field(2, Valence::Vector, {"0", "u1"});
  const Vec p = {1.0, 1.0};
  const auto b = lie_bracket(*x, *y, p);
  EXPECT_DOUBLE_EQ(b[0], -1.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
}

TEST(Geometry, JacobiIdentity) {
  const auto x = make_expr_field(3, Valence::Vector, {"u2*u3", "sin(u1)", "u1^2"});
  const auto y = make_expr_field(3, Valence::Vector, {"u3", "u1*u2", "exp(u2)"});
  const auto z = make_expr_field(3, Valence::Vector, {"1 + u1", "u3^2", "u1*u2*u3"});
  auto bracket = [](FieldPtr a, FieldPtr b) {
    return make_field(3, Valence::Vector, [a, b](auto v, auto out) {
      using T = span_scalar_t<decltype(out)>;
      const auto r = lie_bracket(*a, *b, std::vector<T>(v.begin(), v.end()));
      std::copy(r.begin(), r.end(), out.begin());
    });
  };
  const Vec p = {0.3, -0.4, 0.8};
  const auto t1 = lie_bracket(*x, *bracket(y, z), p);
  const auto t2 = lie_bracket(*y, *bracket(z, x), p);
  const auto t3 = lie_bracket(*z, *bracket(x, y), p);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(t1[i] + t2[i] + t3[i], 0.0, 1e-13);
}

TEST(Geometry, ExteriorDerivative) {
  // alpha = u1^2 u2 du1 + u1^3 du2 -> (d alpha)_{12} = d1 alpha_2 - d2 alpha_1 = 3u1^2 - u1^2 = 2 at u1 = 1.
  const auto alpha = make_expr_field(2, Valence::OneForm, {"u1^2*u2", "u1^3"});
  const Vec p = {1.0, 5.0};
  const auto w = exterior_d(*alpha, p);
  EXPECT_DOUBLE_EQ(w[0 * 2 + 1], 2.0);
  EXPECT_DOUBLE_EQ(w[1 * 2 + 0], -2.0);
  EXPECT_DOUBLE_EQ(w[0], 0.0);
}

TEST(Geometry, ExactFormIsClosed) {
  const auto a = make_expr_field(3, Valence::Scalar, {"sin(u1*u2) + u3^3*u1"});
  const auto w = exterior_d(*differential(a), Vec{0.2, 0.5, -0.3});
  for (double c : w) EXPECT_NEAR(c, 0.0, 1e-14);
}

TEST(Geometry, LieDerivativeOfScalarAndForm) {
  const auto x = make_expr_field(2, Valence::Vector, {"u1", "u2"});
  const auto f = make_expr_field(2, Valence::Scalar, {"u1^2*u2"});
  const Vec p = {2.0, 3.0};
  // Euler field on a cubic: L_X f = 3 f.
  EXPECT_DOUBLE_EQ(lie_derivative(*f, *x, p)[0], 3.0 * 12.0);
  // L_X (u2 du1) = u2 du1 + u2 du1 = 2 u2 du1.
  const auto alpha = make_expr_field(2, Valence::OneForm, {"u2", "0"});
  const auto la = lie_derivative(*alpha, *x, p);
  EXPECT_DOUBLE_EQ(la[0], 6.0);
  EXPECT_DOUBLE_EQ(la[1], 0.0);
}

TEST(Geometry, LieDerivativeOfTensorScalesDiagonalOperator) {
  // L_X diag(u1, u2) along the Euler field is gamma * diag(u1, u2) with gamma = 1.
  const auto x = make_expr_field(2, Valence::Vector, {"u1", "u2"});
  const auto k = make_expr_field(2, Valence::Tensor11, {"u1", "0", "0", "u2"});
  const Vec p = {0.7, -1.3};
  const auto lk = lie_derivative(*k, *x, p);
  const auto kv = (*k)(p);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(lk[i], kv[i], 1e-15);
  // A constant field along a translation does not change.
  const auto e = make_expr_field(2, Valence::Vector, {"1", "0"});
  const auto c = make_expr_field(2, Valence::Tensor11, {"1", "2", "3", "4"});
  for (double v : lie_derivative(*c, *e, p)) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Geometry, LieDerivativeOfTensorAgainstCommutatorRule) {
  // L_X (K Y) = (L_X K) Y + K [X, Y].
  const auto x = make_expr_field(2, Valence::Vector, {"u1*u2", "sin(u1)"});
  const auto y = make_expr_field(2, Valence::Vector, {"u2^2", "1 + u1"});
  const auto k = make_expr_field(2, Valence::Tensor11, {"u1", "u2^2", "exp(u1)", "u1*u2"});
  const Vec p = {0.4, 0.9};
  const auto lhs = lie_bracket(*x, *act_on_vector(k, y), p);
  const auto lk = lie_derivative(*k, *x, p);
  const auto xy = lie_bracket(*x, *y, p);
  const auto rhs1 = act_vector(lk, (*y)(p), 2);
  const auto rhs2 = act_vector((*k)(p), xy, 2);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(lhs[i], rhs1[i] + rhs2[i], 1e-13);
}

TEST(Geometry, ChartChangeIsTensorial) {
  // v = (u1 + u2, u1 - u2): J = [[1, 1], [1, -1]].
  const auto map = make_chart_map(2, {"u1 + u2", "u1 - u2"}, {"(u1 + u2)/2", "(u1 - u2)/2"});
  const auto x = make_expr_field(2, Valence::Vector, {"u1", "u2^2"});
  const Vec p = {1.0, 2.0};
  const auto xv = change_chart(*x, map, p);
  EXPECT_DOUBLE_EQ(xv[0], 5.0);
  EXPECT_DOUBLE_EQ(xv[1], -3.0);
  // The pairing of a form with a vector is chart independent.
  const auto alpha = make_expr_field(2, Valence::OneForm, {"u2", "u1*u1"});
  const auto av = change_chart(*alpha, map, p);
  EXPECT_NEAR(pair(av, xv), pair((*alpha)(p), (*x)(p)), 1e-14);
  // Brackets commute with the push-forward.
  const auto y = make_expr_field(2, Valence::Vector, {"u1*u2", "1"});
  const Vec q = {3.0, -1.0};  // image of p
  const auto pushed = lie_bracket(*pushforward(x, map), *pushforward(y, map), q);
  const auto direct = change_chart_components(lie_bracket(*x, *y, p), 1, 0, map, p);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(pushed[i], direct[i], 1e-13);
}

TEST(Geometry, SingularChartChangeIsRejected) {
  const auto map = make_chart_map(2, {"u1^3", "u2"}, {"u1", "u2"});
  const auto x = make_expr_field(2, Valence::Vector, {"1", "0"});
  EXPECT_THROW(change_chart(*x, map, Vec{0.0, 1.0}), SingularJacobian);
}

TEST(Geometry, DimensionChecks) {
  const auto x = make_expr_field(2, Valence::Vector, {"1", "0"});
  const auto y = make_expr_field(3, Valence::Vector, {"1", "0", "0"});
  EXPECT_THROW(lie_bracket(*x, *y, Vec{0.0, 0.0}), DimensionMismatch);
  const auto f = make_expr_field(2, Valence::Scalar, {"u1"});
  EXPECT_THROW(exterior_d(*f, Vec{0.0, 0.0}), DimensionMismatch);
}

}  // namespace
}  // namespace haantjes
