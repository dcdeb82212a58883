#include "haantjes/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "haantjes/parallel.hpp"

namespace haantjes {

namespace {

constexpr double kBlowupGradient = 1e6;

/// Fourier differentiation matrix on [0, L) with N points (even or odd N).
std::vector<double> fourier_matrix(int n, double length) {
  std::vector<double> d(static_cast<std::size_t>(n * n), 0.0);
  const double h = 2 * std::numbers::pi / n;
  const double scale = 2 * std::numbers::pi / length;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double v = n % 2 == 0 ? 0.5 * sign / std::tan(k * h / 2) : 0.5 * sign / std::sin(k * h / 2);
      d[i * n + j] = scale * v;
    }
  return d;
}

bool inside(const ChartBox& chart, const GridState& s) {
  for (int i = 0; i < s.points; ++i)
    for (int j = 0; j < s.dim; ++j) {
      const double v = s.u[i * s.dim + j];
      if (!(v > chart.lower[j] && v < chart.upper[j])) return false;
    }
  return true;
}

GridState axpy(const GridState& s, const std::vector<double>& k, double h) {
  GridState out = s;
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] += h * k[i];
  return out;
}

GridState rk4_step(const GridState& s, const Field& k, double dt, SpatialOperator op) {
  const auto k1 = build_rhs(k, s, op);
  const auto k2 = build_rhs(k, axpy(s, k1, dt / 2), op);
  const auto k3 = build_rhs(k, axpy(s, k2, dt / 2), op);
  const auto k4 = build_rhs(k, axpy(s, k3, dt), op);
  GridState out = s;
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  out.time += dt;
  return out;
}

}  // namespace

GridState initial_state(const ChartBox& chart, const SimulationSettings& s, int points) {
  if (points < 16) throw SchemaError("simulate: the grid needs at least 16 points");
  GridState g;
  g.points = points;
  g.dim = chart.dim;
  g.length = s.length;
  g.u.resize(static_cast<std::size_t>(points * chart.dim));
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < chart.dim; ++j) {
      const int mode = j < static_cast<int>(s.modes.size()) ? s.modes[j] : j + 1;
      const double phase = j < static_cast<int>(s.phases.size()) ? s.phases[j] : 0.0;
      g.u[i * g.dim + j] =
          chart.base[j] + s.amplitude * std::sin(2 * std::numbers::pi * mode * g.x(i) / g.length + phase);
    }
  if (!inside(chart, g)) throw DomainError("simulate: initial data leaves the chart box; lower the amplitude");
  return g;
}

std::vector<double> spatial_derivative(const GridState& s, SpatialOperator op) {
  const int n = s.points, d = s.dim;
  std::vector<double> out(s.u.size(), 0.0);
  if (op == SpatialOperator::CentralDifference4) {
    const double inv = 1.0 / (12.0 * s.dx());
    for (int i = 0; i < n; ++i) {
      const int m2 = (i - 2 + n) % n, m1 = (i - 1 + n) % n, p1 = (i + 1) % n, p2 = (i + 2) % n;
      for (int j = 0; j < d; ++j)
        out[i * d + j] = (s.u[m2 * d + j] - 8 * s.u[m1 * d + j] + 8 * s.u[p1 * d + j] - s.u[p2 * d + j]) * inv;
    }
    return out;
  }
  const auto dm = fourier_matrix(n, s.length);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += dm[i * n + k] * s.u[k * d + j];
      out[i * d + j] = acc;
    }
  return out;
}

std::vector<double> build_rhs(const Field& k, const GridState& s, SpatialOperator op) {
  const int d = s.dim;
  const auto ux = spatial_derivative(s, op);
  std::vector<double> out(s.u.size(), 0.0);
  for (int i = 0; i < s.points; ++i) {
    const auto km = k(s.at(i));
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int l = 0; l < d; ++l) acc += km[j * d + l] * ux[i * d + l];
      out[i * d + j] = acc;
    }
  }
  return out;
}

double cfl_number(const Field& k, const GridState& s, double dt) {
  const int d = s.dim;
  double worst = 0.0;
  for (int i = 0; i < s.points; ++i) {
    const auto km = k(s.at(i));
    for (int j = 0; j < d; ++j) {
      double row = 0.0;
      for (int l = 0; l < d; ++l) row += std::abs(km[j * d + l]);
      worst = std::max(worst, row);
    }
  }
  return dt * worst / s.dx();
}

FlowResult integrate_flow(const GridState& initial, const Field& k, const ChartBox& chart, double dt, int steps,
                          SpatialOperator op, const StepObserver& observer) {
  const double cfl = cfl_number(k, initial, dt);
  if (cfl > 0.5) {
    throw CflViolation("dt * max|K| / dx = " + std::to_string(cfl) + " exceeds 0.5; reduce dt or the grid size");
  }
  FlowResult r;
  r.state = initial;
  for (int step = 0; step < steps; ++step) {
    GridState next = rk4_step(r.state, k, dt, op);
    if (!inside(chart, next)) {
      r.left_chart = true;
      r.breakdown_time = next.time;
      return r;
    }
    const auto ux = spatial_derivative(next, op);
    if (max_abs(std::span<const double>(ux)) > kBlowupGradient) {
      r.blew_up = true;
      r.breakdown_time = next.time;
      return r;
    }
    r.state = std::move(next);
    ++r.steps_taken;
    if (observer && !observer(r.state)) break;
  }
  return r;
}

std::vector<double> grid_integrals(const GridState& s, const std::vector<std::vector<double>>& densities) {
  const std::size_t m = densities.empty() ? 0 : densities.front().size();
  std::vector<double> out(m, 0.0);
  for (const auto& row : densities)
    for (std::size_t j = 0; j < m; ++j) out[j] += row[j];
  for (auto& v : out) v *= s.dx();
  return out;
}

std::vector<std::vector<double>> conserved_densities(const PotentialSquare& potentials, const GridState& s) {
  const int n = s.dim;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(s.points));
  parallel_for(s.points, [&](int i) {
    const auto a = potentials.evaluate(s.at(i));
    out[i].assign(a.begin(), a.begin() + n);  // row 1: A_1m = A_m
  });
  return out;
}

ConservationResult conservation_check(const GridState& initial, const Field& k, const PotentialSquare& potentials,
                                      const ChartBox& chart, double dt, int steps, int sample_every,
                                      SpatialOperator op) {
  const int n = initial.dim;
  ConservationResult r;
  const auto d0 = conserved_densities(potentials, initial);
  const auto i0 = grid_integrals(initial, d0);
  std::vector<double> spread(static_cast<std::size_t>(n), 0.0);
  for (int m = 0; m < n; ++m) {
    const double mean = i0[m] / initial.length;
    for (const auto& row : d0) spread[m] += std::abs(row[m] - mean);
    spread[m] *= initial.dx();
  }
  r.times.push_back(initial.time);
  r.integrals.push_back(i0);
  r.drift.assign(static_cast<std::size_t>(n), 0.0);
  int count = 0;
  auto record = [&](const GridState& s) {
    const auto im = grid_integrals(s, conserved_densities(potentials, s));
    r.times.push_back(s.time);
    r.integrals.push_back(im);
    for (int m = 0; m < n; ++m) {
      const double denom = spread[m] > 0.0 ? spread[m] : 1.0;
      r.drift[m] = std::max(r.drift[m], std::abs(im[m] - i0[m]) / denom);
    }
  };
  r.flow = integrate_flow(initial, k, chart, dt, steps, op, [&](const GridState& s) {
    if (++count % sample_every == 0) record(s);
    return true;
  });
  if (count % sample_every != 0) record(r.flow.state);
  r.max_drift = *std::max_element(r.drift.begin(), r.drift.end());
  return r;
}

double grid_l2_distance(const GridState& a, const GridState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) s += (a.u[i] - b.u[i]) * (a.u[i] - b.u[i]);
  return std::sqrt(a.dx() * s);
}

CommutingFlowsResult commuting_flows_check(const GridState& u0, const Field& kj, const Field& kl, const ChartBox& chart,
                                           const std::vector<double>& dts, SpatialOperator op) {
  CommutingFlowsResult r;
  for (double dt : dts) {
    for (const Field* k : {&kj, &kl}) {
      if (const double cfl = cfl_number(*k, u0, dt); cfl > 0.5) {
        throw CflViolation("dt * max|K| / dx = " + std::to_string(cfl) + " exceeds 0.5 in the commuting-flow check");
      }
    }
    const auto jl = rk4_step(rk4_step(u0, kj, dt, op), kl, dt, op);
    const auto lj = rk4_step(rk4_step(u0, kl, dt, op), kj, dt, op);
    if (!inside(chart, jl) || !inside(chart, lj)) throw DomainError("commuting-flow check left the chart box");
    r.dts.push_back(dt);
    r.discrepancy.push_back(grid_l2_distance(jl, lj));
  }
  r.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < r.dts.size(); ++i) {
    const double ratio = r.dts[i - 1] / r.dts[i];
    double order;
    if (r.discrepancy[i] == 0.0 || r.discrepancy[i - 1] == 0.0) {
      order = std::numeric_limits<double>::infinity();
    } else {
      order = std::log(r.discrepancy[i - 1] / r.discrepancy[i]) / std::log(ratio);
    }
    r.orders.push_back(order);
    r.min_order = std::min(r.min_order, order);
  }
  return r;
}

}  // namespace haantjes
