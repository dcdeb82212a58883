#pragma once

#include <span>
#include <vector>

#include "haantjes/candidate.hpp"

namespace haantjes {

/// Additive change A_jl += delta, used to build controls that break the
/// Hessian structure on purpose. Only the (j,l) entry moves.
struct PotentialPerturbation {
  int j = 0;
  int l = 0;
  FieldPtr delta;  // scalar field on the chart
};

/// The potentials A_jl with d A_jl = K_j K_l dA, normalised to vanish at the
/// base point and recovered by line integrals along axis-aligned polylines.
class PotentialSquare {
 public:
  explicit PotentialSquare(HaantjesCandidate candidate, std::vector<PotentialPerturbation> perturbations = {});

  int dim() const { return candidate_.dim(); }
  const HaantjesCandidate& candidate() const { return candidate_; }
  const std::vector<PotentialPerturbation>& perturbations() const { return perturbations_; }

  /// A_jl(p), row-major. The polyline visits the axes in `axis_order`
  /// (default 0, 1, ..., n-1). Composite Simpson per segment, halving the
  /// step until successive estimates agree to 1e-10 relative; throws
  /// QuadratureStall after 20 halvings.
  std::vector<double> evaluate(std::span<const double> p, const std::vector<int>& axis_order = {}) const;

  /// Table of A_jl over a set of points.
  std::vector<std::vector<double>> tabulate(const std::vector<std::vector<double>>& points) const;

 private:
  HaantjesCandidate candidate_;
  std::vector<PotentialPerturbation> perturbations_;
};

/// Builds the potentials after checking closedness: throws NotClosed when any
/// entry of `closed_residuals` (from check_square_closed) exceeds tol.
PotentialSquare integrate_potentials(const HaantjesCandidate& c, const std::vector<double>& closed_residuals,
                                     double tol, std::vector<PotentialPerturbation> perturbations = {});

}  // namespace haantjes
