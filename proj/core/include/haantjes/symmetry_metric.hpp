#pragma once

// Conformal symmetries xi of a Haantjes candidate and the metric they induce
// on the frame xi_j = K_j xi:
//
//   g(xi_j, xi_l) = xi(A_jl),   c_jlm = xi_m(A_jl).
//
// Both are read off the square of 1-forms directly (d A_jl = K_j K_l dA), so
// no quadrature enters. Curvature is computed twice: the frame closed form
// and a coordinate oracle built from the chart components of g.

#include <string>
#include <vector>

#include "haantjes/certifier.hpp"

namespace haantjes {

// --- conformal fit ------------------------------------------------------------

/// L_xi dA = alpha dA, L_xi K_j = gamma_j K_j, fitted per point by least
/// squares. Points where dA vanishes are excluded.
struct ConformalSymmetryFit {
  double alpha = 0.0;            // mean over included points
  std::vector<double> gamma;     // mean over included points
  Sampled residual;              // worst deviation from exact proportionality
  double constancy_defect = 0.0; // spread of the pointwise alpha, gamma_j
  int excluded = 0;

  bool passes(double tol) const { return residual.max_residual <= tol && constancy_defect <= tol; }
};

ConformalSymmetryFit fit_conformal_symmetry(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points);

// --- metric -----------------------------------------------------------------

/// g_jl at j*n+l and c_jlm at (j*n+l)*n+m for the frame xi_j = K_j xi.
template <class T>
void metric_components(const HaantjesCandidate& c, const Field& xi, const std::vector<T>& x, std::vector<T>& g,
                       std::vector<T>& cc) {
  const int n = c.dim();
  const auto beta = square_forms(c, x);
  const auto xv = xi(x);
  const auto frame = lenard_frame(c, xi, x);
  g.assign(static_cast<std::size_t>(n * n), T(0.0));
  cc.assign(static_cast<std::size_t>(n * n * n), T(0.0));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int a = 0; a < n; ++a) {
        const T& b = beta[(j * n + l) * n + a];
        g[j * n + l] += b * xv[a];
        for (int m = 0; m < n; ++m) cc[(j * n + l) * n + m] += b * frame[a * n + m];
      }
}

struct MetricData {
  int n = 0;
  std::vector<double> g;       // g_jl
  std::vector<double> g_inv;   // g^st
  std::vector<double> c;       // c_jlm
  std::vector<double> frame;   // xi_j in chart components, a*n+j
  double condition = 0.0;
  double c_symmetry = 0.0;     // total symmetry defect of c, relative
};

inline constexpr double kMetricConditionLimit = 1e8;

/// Throws SingularMetric when the condition number of g exceeds 1e8.
MetricData build_metric(const HaantjesCandidate& c, FieldPtr xi, std::span<const double> p);

/// Signature (positive, negative, zero eigenvalue counts); eigenvalues below
/// 1e-10 times the largest magnitude count as zero.
struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};
Signature metric_signature(const MetricData& m);

// --- frame identities ---------------------------------------------------------

/// [xi_j, xi_l] against (gamma_l - gamma_j) sum_m c_jlm d/dA_m, worst pair.
double commutator_scaling_residual(const HaantjesCandidate& c, FieldPtr xi, const ConformalSymmetryFit& fit,
                                   std::span<const double> p);

/// Frame connection coefficients G_jlm = g(nabla_{xi_j} xi_l, xi_m) at (j*n+l)*n+m.
struct Connection {
  std::vector<double> closed_form;  // (alpha/2 + gamma_l) c_jlm
  std::vector<double> koszul;       // Koszul formula with actual derivatives and brackets
};
Connection christoffel_koszul(const HaantjesCandidate& c, FieldPtr xi, const ConformalSymmetryFit& fit,
                              std::span<const double> p);

/// Residuals of the derivative relations that feed the connection, at p.
struct MetricRelations {
  double derivative = 0.0;     // xi_m(g_jl) = (alpha + gamma_j + gamma_l) c_jlm
  double compatibility = 0.0;  // xi_m(g_jl) = G_mjl + G_mlj (Koszul connection)
  double proof_identity = 0.0; // xi_j(c_lmp) - xi_l(c_jmp) = (gamma_l - gamma_j) sum c_jls g^st c_mpt
};
MetricRelations metric_relations(const HaantjesCandidate& c, FieldPtr xi, const ConformalSymmetryFit& fit,
                                   std::span<const double> p);

// --- curvature --------------------------------------------------------------

/// R_mpjl at ((m*n+p)*n+j)*n+l, from the closed form in c and from the
/// equivalent form in C^t_jm = sum_s g^ts c_jms.
struct RiemannClosedForm {
  std::vector<double> c_form;
  std::vector<double> structure_form;
  double scale = 0.0;  // max |participating product|, for relative residuals
};
RiemannClosedForm riemann_closed_form(const MetricData& m, const ConformalSymmetryFit& fit);

/// Fully covariant coordinate Riemann tensor R_abcd = G_af R^f_bcd of a metric
/// field G (n*n components, a*n+b) with
/// R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb.
struct CoordinateRiemann {
  std::vector<double> lowered;
  double scale = 0.0;
};
CoordinateRiemann coordinate_riemann(FieldPtr metric, std::span<const double> p);

/// The chart components of the frame metric, G = Xi^-T g Xi^-1.
FieldPtr coordinate_metric_field(const HaantjesCandidate& c, FieldPtr xi);

/// R_mpjl = g(R(xi_j, xi_l) xi_m, xi_p) from the coordinate oracle.
struct FrameRiemann {
  std::vector<double> values;
  double scale = 0.0;
};
FrameRiemann riemann_from_metric_oracle(const HaantjesCandidate& c, FieldPtr xi, std::span<const double> p);

// --- certificate ------------------------------------------------------------

enum class Flatness { Flat, NotFlat, HypothesesUnmet };
std::string flatness_name(Flatness f);

/// Everything certified for one symmetry, merged over the points.
struct SymmetryCertificate {
  ConformalSymmetryFit fit;
  int singular_points = 0;
  double worst_condition = 0.0;
  Sampled c_symmetry;
  Sampled commutator;
  Sampled derivative_relation;
  Sampled connection;        // closed form vs Koszul
  Sampled compatibility;
  Sampled proof_identity;
  Sampled riemann_closed;    // closed form, relative to its scale
  Sampled riemann_dual_path; // c-form vs C-form
  Sampled riemann_oracle;    // coordinate oracle in the frame
  Sampled riemann_agreement; // closed form vs oracle
  Signature signature;       // at the base point
  bool signature_known = false;
  Flatness verdict = Flatness::HypothesesUnmet;
};

/// Tolerance for the oracle curvature; the oracle differentiates the metric
/// twice through the frame inverse, so it is held to a looser bound.
inline constexpr double kOracleTolerance = 1e-7;

SymmetryCertificate certify_symmetry(const HaantjesCandidate& c, FieldPtr xi, const PointSet& points, double tol);

/// FLAT needs a nonsingular metric at every point, a fit with constant
/// alpha and gamma, and both curvature paths within tolerance.
Flatness flatness_certificate(const SymmetryCertificate& s, double tol);

}  // namespace haantjes
