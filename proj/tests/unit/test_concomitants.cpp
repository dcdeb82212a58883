#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "haantjes/concomitants.hpp"
#include "haantjes/errors.hpp"

namespace haantjes {
namespace {

using Vec = std::vector<double>;

int at3(int n, int j, int l, int m) { return (j * n + l) * n + m; }

TEST(Nijenhuis, DiagonalExample) {
  // K = diag(u2, u1): T^1_12 = T^2_12 = u2 - u1.
  const auto k = make_expr_field(2, Valence::Tensor11, {"u2", "0", "0", "u1"});
  const Vec p = {0.0, 1.0};
  const auto t = nijenhuis_torsion(*k, p);
  EXPECT_DOUBLE_EQ(t[at3(2, 0, 0, 1)], 1.0);
  EXPECT_DOUBLE_EQ(t[at3(2, 1, 0, 1)], 1.0);
  EXPECT_DOUBLE_EQ(t[at3(2, 0, 1, 0)], -1.0);
  const auto oracle = nijenhuis_bracket_form(k, p);
  EXPECT_LT(max_abs_diff(t, oracle), 1e-14);
}

TEST(Nijenhuis, ConstantAndIdentityOperatorsAreTorsionFree) {
  const auto c = make_expr_field(3, Valence::Tensor11, {"1", "2", "0", "0", "3", "1", "5", "0", "2"});
  for (double v : nijenhuis_torsion(*c, Vec{0.1, 0.2, 0.3})) EXPECT_EQ(v, 0.0);
  for (double v : nijenhuis_torsion(*identity_field(3), Vec{0.1, 0.2, 0.3})) EXPECT_EQ(v, 0.0);
}

TEST(Haantjes, VanishesForDiagonalOperators) {
  const auto k = make_expr_field(3, Valence::Tensor11,
                                 {"u2*u3", "0", "0", "0", "sin(u1) + u3", "0", "0", "0", "exp(u1*u2)"});
  const Vec p = {0.3, -0.6, 0.9};
  EXPECT_GT(max_abs(nijenhuis_torsion(*k, p)), 0.1);
  EXPECT_LT(max_abs(haantjes_torsion(*k, p)), 1e-13);
}

TEST(Haantjes, CompanionMatrixHasTorsion) {
  // Values from a symbolic evaluation of the defining bracket combination.
  const auto k = make_expr_field(3, Valence::Tensor11, {"0", "1", "0", "0", "0", "1", "u1", "u2", "u3"});
  const Vec p = {0.5, -0.3, 0.7};
  const auto t = nijenhuis_torsion(*k, p);
  EXPECT_NEAR(t[at3(3, 2, 0, 1)], -1.0, 1e-14);
  EXPECT_NEAR(t[at3(3, 2, 0, 2)], 0.5, 1e-14);
  EXPECT_NEAR(t[at3(3, 2, 1, 2)], -1.3, 1e-14);
  const auto h = haantjes_torsion(*k, p);
  EXPECT_NEAR(h[at3(3, 0, 0, 1)], -1.0, 1e-14);
  EXPECT_NEAR(h[at3(3, 1, 0, 1)], -1.2, 1e-14);
  EXPECT_NEAR(h[at3(3, 2, 0, 1)], -0.79, 1e-14);
  EXPECT_NEAR(h[at3(3, 1, 0, 2)], 1.0, 1e-14);
  EXPECT_NEAR(h[at3(3, 0, 1, 2)], -1.3, 1e-14);
  EXPECT_LT(max_abs_diff(h, haantjes_bracket_form(k, p)), 1e-13);
}

TEST(Haantjes, SquareOfNijenhuisOperatorStaysTorsionFree) {
  // Each eigenvalue depends on its own coordinate only.
  const auto k = make_expr_field(2, Valence::Tensor11, {"u1^2 + 1", "0", "0", "sin(u2)"});
  const auto k2 = compose(k, k);
  const Vec p = {0.4, 1.1};
  EXPECT_LT(max_abs(nijenhuis_torsion(*k, p)), 1e-14);
  EXPECT_LT(max_abs(nijenhuis_torsion(*k2, p)), 1e-13);
}

TEST(YanoAko, OneDimensionalBracketVanishes) {
  const auto c = make_expr_field(1, Valence::Tensor12, {"exp(u1)*u1^2"});
  const auto v = yano_ako_bracket(*c, Vec{0.7}, true, 1e-10);
  for (double x : v.components) EXPECT_NEAR(x, 0.0, 1e-13);
  EXPECT_FALSE(v.precondition_warning);
}

TEST(YanoAko, ConstantStructureConstantsVanish) {
  // The algebra R[x]/(x^2): e1 unit, e2 e2 = 0.
  const auto c = make_expr_field(2, Valence::Tensor12, {"1", "0", "0", "0", "0", "1", "1", "0"});
  const auto v = yano_ako_bracket(*c, Vec{0.2, 0.3}, true, 1e-10);
  for (double x : v.components) EXPECT_EQ(x, 0.0);
}

TEST(YanoAko, PreconditionViolated) {
  // Symmetric but not associative at u1 != 0.
  const auto c = make_expr_field(2, Valence::Tensor12, {"0", "0", "0", "1", "0", "u1", "u1", "0"});
  const Vec p = {0.5, 0.5};
  try {
    yano_ako_bracket(*c, p, true, 1e-8);
    FAIL() << "expected PreconditionViolated";
  } catch (const PreconditionViolated& e) {
    EXPECT_NE(e.condition().find("associativity"), std::string::npos);
    EXPECT_GT(e.residual(), 1e-7);
    EXPECT_EQ(e.worst_index().size(), 4u);
  }
  const auto v = yano_ako_bracket(*c, p, false, 1e-8);
  EXPECT_TRUE(v.precondition_warning);
  EXPECT_GT(v.associativity_residual, 0.0);
  EXPECT_EQ(v.symmetry_residual, 0.0);
}

TEST(AlgebraDefects, SymmetryAndAssociativity) {
  // Non-symmetric: C^1_{12} = 1, C^1_{21} = 0.
  Vec c(8, 0.0);
  c[at3(2, 0, 0, 1)] = 1.0;
  const auto s = symmetry_defect(c, 2);
  EXPECT_NEAR(s.residual, 0.5, 1e-15);
  EXPECT_EQ(s.index.size(), 3u);
  // Complex numbers as a real algebra: associative and symmetric.
  Vec cz(8, 0.0);
  cz[at3(2, 0, 0, 0)] = 1;
  cz[at3(2, 1, 0, 1)] = 1;
  cz[at3(2, 1, 1, 0)] = 1;
  cz[at3(2, 0, 1, 1)] = -1;
  EXPECT_EQ(symmetry_defect(cz, 2).residual, 0.0);
  EXPECT_EQ(associativity_defect(cz, 2).residual, 0.0);
}

TEST(DK, ScalarAndOneFormExamples) {
  // K = diag(u2, u1), A = u1: d_K A = u2 du1, d_K d_K A = (u2 - u1) du1 ^ du2.
  const auto k = make_expr_field(2, Valence::Tensor11, {"u2", "0", "0", "u1"});
  const auto a = make_expr_field(2, Valence::Scalar, {"u1"});
  const Vec p = {0.3, 1.7};
  const auto dka = dK_scalar(*k, *a, p);
  EXPECT_DOUBLE_EQ(dka[0], 1.7);
  EXPECT_DOUBLE_EQ(dka[1], 0.0);
  const auto w = dK_squared(k, a, p);
  EXPECT_NEAR(w[0 * 2 + 1], 1.4, 1e-15);
  EXPECT_NEAR(w[1 * 2 + 0], -1.4, 1e-15);
}

TEST(DK, IdentityOperatorReducesToExteriorDerivative) {
  const auto alpha = make_expr_field(3, Valence::OneForm, {"u2*u3", "sin(u1)", "u1*u2^2"});
  const Vec p = {0.2, 0.4, 0.6};
  const auto dk = dK_oneform(*identity_field(3), *alpha, p);
  const auto d = exterior_d(*alpha, p);
  EXPECT_LT(max_abs_diff(dk, d), 1e-15);
}

TEST(DK, SquareIdentityAndPairIdentities) {
  const auto k = make_expr_field(3, Valence::Tensor11,
                                 {"u2", "u1*u3", "0", "1", "u3^2", "u1", "u2*u1", "0", "u3"});
  const auto a = make_expr_field(3, Valence::Scalar, {"u1^2*u3 + u2^3"});
  const auto alpha = make_expr_field(3, Valence::OneForm, {"u1*u2", "u3", "u2^2 - u1"});
  const Vec p = {0.3, -0.8, 0.5};
  const Vec xi = {1.0, 0.5, -2.0};
  const Vec eta = {0.2, -1.0, 0.7};
  const auto sq = dK_squared_identity(k, a, p, xi, eta);
  EXPECT_GT(std::abs(sq.lhs), 1e-3);
  EXPECT_LT(sq.residual, 1e-12);
  const auto pair = check_alpha_prime_identities(k, alpha, p, xi, eta);
  EXPECT_LT(pair.first.residual, 1e-12);
  EXPECT_LT(pair.second.residual, 1e-12);
}

TEST(Ideal, SingleGeneratorMembership) {
  // K = diag(u2, u1), A = u1 + u2: probes report a number for every member.
  const auto k = make_expr_field(2, Valence::Tensor11, {"u2", "0", "0", "u1"});
  const auto a = make_expr_field(2, Valence::Scalar, {"u1 + u2"});
  EXPECT_EQ(ideal_probe_family(2).size(), 2u + 3u);
  for (const auto& b : ideal_probe_family(2)) {
    const auto r = ideal_membership_single_generator(k, a, b, Vec{0.3, 0.9});
    EXPECT_TRUE(std::isfinite(r.residual));
  }
}

}  // namespace
}  // namespace haantjes
