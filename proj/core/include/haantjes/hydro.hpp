#pragma once

// Method-of-lines integration of u_t = K(u) u_x on a periodic grid, with the
// conservation and flow-commutation checks.

#include <functional>
#include <optional>
#include <vector>

#include "haantjes/chart.hpp"
#include "haantjes/field.hpp"
#include "haantjes/manifest.hpp"
#include "haantjes/potentials.hpp"

namespace haantjes {

enum class SpatialOperator {
  CentralDifference4,  // 4th-order central differences, the default
  Fourier,             // dense Fourier differentiation matrix, spectral accuracy
};

/// N periodic points on [0, L); u[i*dim + j] is component j at x_i.
struct GridState {
  int points = 0;
  int dim = 0;
  double length = 1.0;
  double time = 0.0;
  std::vector<double> u;

  double dx() const { return length / points; }
  double x(int i) const { return i * dx(); }
  std::vector<double> at(int i) const { return {u.begin() + i * dim, u.begin() + (i + 1) * dim}; }
};

/// u^j = base_j + amplitude * sin(2 pi m_j x / L + phi_j). Throws DomainError
/// when the data leaves the chart box, SchemaError when N < 16.
GridState initial_state(const ChartBox& chart, const SimulationSettings& s, int points);

/// d/dx of every component.
std::vector<double> spatial_derivative(const GridState& s, SpatialOperator op);

/// RHS_j = sum_l K^j_l(u) du^l/dx at every grid point.
std::vector<double> build_rhs(const Field& k, const GridState& s, SpatialOperator op);

/// dt * max_x ||K(u)||_inf / dx.
double cfl_number(const Field& k, const GridState& s, double dt);

struct FlowResult {
  GridState state;
  int steps_taken = 0;
  bool blew_up = false;        // max |u_x| exceeded 1e6
  bool left_chart = false;     // some u left the chart box
  double breakdown_time = 0.0; // time of blow-up or chart exit
};

/// Called after every step with the current state; return false to stop.
using StepObserver = std::function<bool(const GridState&)>;

/// Classical RK4. Throws CflViolation when dt * max||K||/dx > 0.5 on the
/// initial state.
FlowResult integrate_flow(const GridState& initial, const Field& k, const ChartBox& chart, double dt, int steps,
                          SpatialOperator op = SpatialOperator::CentralDifference4,
                          const StepObserver& observer = {});

/// Periodic trapezoidal integral of each density over the grid.
std::vector<double> grid_integrals(const GridState& s, const std::vector<std::vector<double>>& densities);

/// Densities A_m(u(x)) = A_1m at every grid point: densities[i][m].
std::vector<std::vector<double>> conserved_densities(const PotentialSquare& potentials, const GridState& s);

struct ConservationResult {
  std::vector<double> drift;     // per A_m: max |I_m(t) - I_m(0)| / (integral of |A_m(u0) - mean|)
  std::vector<double> times;
  std::vector<std::vector<double>> integrals;  // per output time, per m
  double max_drift = 0.0;
  FlowResult flow;
};

/// Integrates `steps` steps of dt and samples the integrals every
/// `sample_every` steps.
ConservationResult conservation_check(const GridState& initial, const Field& k, const PotentialSquare& potentials,
                                      const ChartBox& chart, double dt, int steps, int sample_every,
                                      SpatialOperator op = SpatialOperator::CentralDifference4);

struct CommutingFlowsResult {
  std::vector<double> dts;
  std::vector<double> discrepancy;  // L2 norm of (flow_l o flow_j - flow_j o flow_l)(u0)
  std::vector<double> orders;       // log2 ratio between successive dts
  double min_order = 0.0;
};

/// One RK4 step of flow j then flow l, against the opposite order, for each
/// dt (successively halved is the intended use).
CommutingFlowsResult commuting_flows_check(const GridState& u0, const Field& kj, const Field& kl, const ChartBox& chart,
                                           const std::vector<double>& dts,
                                           SpatialOperator op = SpatialOperator::Fourier);

/// sqrt(dx * sum |a - b|^2) over all components.
double grid_l2_distance(const GridState& a, const GridState& b);

}  // namespace haantjes
