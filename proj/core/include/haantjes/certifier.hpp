#pragma once

// Certification of a Haantjes candidate: commutation of the operators,
// closedness of the square of 1-forms, structure constants of the operator
// algebra, the weak conditions on a single operator, Lenard chain generators,
// the compatibility identity of the hydrodynamic flows and the WDVV checks.
//
// Every residual is relative: |defect| / (1 + max |participating component|).

#include <string>
#include <vector>

#include "haantjes/candidate.hpp"
#include "haantjes/concomitants.hpp"
#include "haantjes/potentials.hpp"

namespace haantjes {

using PointSet = std::vector<std::vector<double>>;

/// Largest residual over a point set, with where it happened.
struct Sampled {
  double max_residual = 0.0;
  int worst_point = -1;
  int points = 0;
  int excluded = 0;
};

// --- commutation and closedness -------------------------------------------

/// Per pair (j,l), max over points of ||K_j K_l - K_l K_j||, row-major n x n.
std::vector<double> check_commuting(const HaantjesCandidate& c, const PointSet& points);

/// Per pair (j,l), max over points of ||d(K_j K_l dA)||, row-major n x n.
std::vector<double> check_square_closed(const HaantjesCandidate& c, const PointSet& points);

// --- structure constants ----------------------------------------------------

/// Frame condition number above which dA_1..dA_n is treated as no basis.
inline constexpr double kFrameConditionLimit = 1e8;

/// C^m_{jl} from K_j K_l dA = sum_m C^m_{jl} dA_m, stored at (m*n+j)*n+l.
/// Throws DegenerateFrame when dA_m is not a basis at x.
template <class T>
std::vector<T> structure_constants_at(const HaantjesCandidate& c, const std::vector<T>& x) {
  const int n = c.dim();
  const auto rows = frame_forms(c, x);
  const auto beta = square_forms(c, x);
  Matrix<T> dt(n, n);  // dt(a, m) = (dA_m)_a
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a) dt(a, m) = rows[m * n + a];
  if (!(condition_number(primal_matrix(dt)) <= kFrameConditionLimit)) {
    throw DegenerateFrame("the 1-forms K_m dA are not a basis at this point");
  }
  LuDecomposition<T> lu(dt);
  std::vector<T> out(static_cast<std::size_t>(n * n * n));
  std::vector<T> rhs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      for (int a = 0; a < n; ++a) rhs[a] = beta[(j * n + l) * n + a];
      const auto sol = lu.solve(rhs);
      for (int m = 0; m < n; ++m) out[(m * n + j) * n + l] = sol[m];
    }
  return out;
}

struct StructureConstants {
  int n = 0;
  std::vector<double> c;            // C^m_{jl}
  double frame_condition = 0.0;
  double symmetry = 0.0;            // C^m_{jl} = C^m_{lj}
  double associativity = 0.0;       // sum C^l_{jk} C^s_{lm} = sum C^l_{mk} C^s_{lj}
  double unity = 0.0;               // C^m_{1l} = delta^m_l
  double reconstruction = 0.0;      // K_j K_l = sum C^m_{jl} K_m
};

StructureConstants structure_constants(const HaantjesCandidate& c, std::span<const double> p);

struct StructureConstantSummary {
  Sampled symmetry, associativity, unity, reconstruction;
};

/// Structure constants at every point; degenerate frames are excluded and counted.
StructureConstantSummary check_structure_constants(const HaantjesCandidate& c, const PointSet& points);

/// The multiplication xi_j o xi_l = sum_m C^m_{jl} xi_m as a (1,2) field on the
/// chart, built from the frame xi_j = K_j xi of a generator.
FieldPtr induced_multiplication_field(const HaantjesCandidate& c, FieldPtr xi);

/// Max Yano-Ako bracket of the induced multiplication over the points.
Sampled check_yano_ako(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points);

// --- weak Haantjes conditions -----------------------------------------------

struct WeakHaantjesResiduals {
  Sampled torsion;   // Haantjes torsion of K
  Sampled closed;    // d d_K A
  Sampled dk2;       // d_K d_K A
};

WeakHaantjesResiduals check_weak_haantjes(FieldPtr a, FieldPtr k, const PointSet& points);

/// Probe-family test of d_K^2 B = dA ^ dB (diagnostic only).
struct IdealProbe {
  Sampled membership;       // worst over the probe family
  Sampled self;             // d_K^2 A
  bool candidate = false;   // every probe within tolerance
};
IdealProbe probe_single_generator_ideal(FieldPtr a, FieldPtr k, const PointSet& points, double tol);

// --- Lenard chains, compatibility -------------------------------------------

struct LenardVerdict {
  double worst_condition = 0.0;   // largest condition number of (xi_1 .. xi_n)
  Sampled commutator;             // max ||[xi_j, xi_l]||
  bool independent = false;
};

LenardVerdict check_lenard_generator(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points);

/// [K_j xi, K_l xi] - K_j [xi, K_l xi] - K_l [K_j xi, xi], max over points.
Sampled check_compatibility_identity(FieldPtr kj, FieldPtr kl, FieldPtr xi, const PointSet& points);

/// Seeded random vector fields with quadratic polynomial components.
std::vector<FieldPtr> random_quadratic_vector_fields(const ChartBox& chart, int count, std::uint64_t seed);

// --- WDVV ------------------------------------------------------------------

struct WdvvResult {
  Sampled symmetry;        // d A_jl / d t_m totally symmetric
  Sampled commutation;     // C_j C_l = C_l C_j
  Sampled associativity;   // structure constants from the Hessian algebra
  double coordinate_roundtrip = 0.0;  // max |u(t(u)) - u| over points
};

/// Third derivatives c_{jlm} = xi_m(A_jl) on the Lenard frame, with optional
/// perturbations of individual potentials. Stored at (j*n+l)*n+m.
std::vector<double> third_derivatives(const HaantjesCandidate& c, FieldPtr xi, std::span<const double> p,
                                      const std::vector<PotentialPerturbation>& perturbations = {});

/// Throws NoGenerator when xi is null; FrameIntegrationFailure when the
/// t-coordinates cannot be built.
WdvvResult wdvv_check(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points,
                      const std::vector<PotentialPerturbation>& perturbations = {});

}  // namespace haantjes
