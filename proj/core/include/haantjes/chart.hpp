#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace haantjes {

/// Coordinate box carrying every field of a manifest.
struct ChartBox {
  int dim = 0;
  std::string label = "u";
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> base;

  /// Throws SchemaError unless bounds are ordered and the base point is interior.
  void validate() const;

  bool strictly_inside(std::span<const double> p) const;

  /// Throws DomainError when p is not strictly inside.
  void require_inside(std::span<const double> p) const;

  /// Point at fractional position s in [0,1]^n of the box.
  std::vector<double> at_fraction(std::span<const double> s) const;
};

/// Deterministic quasi-random points in the middle 80% of the box: a Halton
/// sequence shifted by a Cranley-Patterson rotation drawn from `seed`.
std::vector<std::vector<double>> sample_points(const ChartBox& chart, int count, std::uint64_t seed);

}  // namespace haantjes
