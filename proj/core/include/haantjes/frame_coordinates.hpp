#pragma once

#include <span>
#include <vector>

#include "haantjes/chart.hpp"
#include "haantjes/field.hpp"

namespace haantjes {

/// Coordinates t with d/dt_j = xi_j for a commuting frame xi_1..xi_n. The
/// point with chart coordinates u(t) is reached from the base point by
/// flowing along xi_1 for t_1 - b_1, then xi_2 for t_2 - b_2, and so on,
/// where b is the base point; so t(base) = base.
class FrameCoordinates {
 public:
  FrameCoordinates(ChartBox chart, std::vector<FieldPtr> frame);

  /// Chart point u(t). Adaptive RK4 with step doubling, local tolerance 1e-10.
  /// Throws FrameIntegrationFailure when a flow leaves the chart or stalls.
  std::vector<double> to_chart(std::span<const double> t) const;

  /// t(u) by Newton iteration on to_chart. Throws FrameIntegrationFailure.
  std::vector<double> from_chart(std::span<const double> u) const;

 private:
  std::vector<double> flow(std::vector<double> y, int j, double time) const;
  std::vector<double> frame_at(std::span<const double> u) const;

  ChartBox chart_;
  std::vector<FieldPtr> frame_;
};

}  // namespace haantjes
