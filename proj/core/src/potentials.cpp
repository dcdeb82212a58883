#include "haantjes/potentials.hpp"

#include <cmath>
#include <numeric>

namespace haantjes {

namespace {

constexpr double kQuadratureTol = 1e-10;
constexpr int kMaxLevels = 20;

/// Integral of component `axis` of every square form along x(s), s in [a,b],
/// where x varies only in coordinate `axis`.
std::vector<double> integrate_segment(const HaantjesCandidate& c, std::vector<double> x, int axis, double a,
                                      double b) {
  const int n = c.dim();
  const int nn = n * n;
  std::vector<double> ends(static_cast<std::size_t>(nn), 0.0);
  if (a == b) return ends;
  auto sample = [&](double s, std::vector<double>& acc, double weight) {
    x[axis] = s;
    const auto beta = square_forms(c, x);
    for (int e = 0; e < nn; ++e) acc[e] += weight * beta[e * n + axis];
  };
  sample(a, ends, 1.0);
  sample(b, ends, 1.0);
  std::vector<double> evens(static_cast<std::size_t>(nn), 0.0);
  std::vector<double> odds(static_cast<std::size_t>(nn), 0.0);
  int intervals = 2;
  sample(0.5 * (a + b), odds, 1.0);
  auto simpson = [&](int m) {
    const double h = (b - a) / m;
    std::vector<double> s(static_cast<std::size_t>(nn));
    for (int e = 0; e < nn; ++e) s[e] = h / 3.0 * (ends[e] + 4.0 * odds[e] + 2.0 * evens[e]);
    return s;
  };
  auto previous = simpson(intervals);
  for (int level = 1; level <= kMaxLevels; ++level) {
    for (int e = 0; e < nn; ++e) {
      evens[e] += odds[e];
      odds[e] = 0.0;
    }
    intervals *= 2;
    const double h = (b - a) / intervals;
    for (int i = 1; i < intervals; i += 2) sample(a + i * h, odds, 1.0);
    const auto current = simpson(intervals);
    bool converged = true;
    for (int e = 0; e < nn && converged; ++e) {
      converged = std::abs(current[e] - previous[e]) <= kQuadratureTol * std::max(1.0, std::abs(current[e]));
    }
    if (converged) return current;
    previous = current;
  }
  throw QuadratureStall("potential quadrature did not settle after " + std::to_string(kMaxLevels) + " halvings");
}

}  // namespace

PotentialSquare::PotentialSquare(HaantjesCandidate candidate, std::vector<PotentialPerturbation> perturbations)
    : candidate_(std::move(candidate)), perturbations_(std::move(perturbations)) {}

std::vector<double> PotentialSquare::evaluate(std::span<const double> p, const std::vector<int>& axis_order) const {
  const int n = dim();
  candidate_.chart.require_inside(p);
  std::vector<int> order = axis_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<double> x = candidate_.chart.base;
  std::vector<double> total(static_cast<std::size_t>(n * n), 0.0);
  for (int axis : order) {
    const auto seg = integrate_segment(candidate_, x, axis, x[axis], p[axis]);
    for (std::size_t e = 0; e < total.size(); ++e) total[e] += seg[e];
    x[axis] = p[axis];
  }
  for (const auto& pert : perturbations_) {
    const double at_p = (*pert.delta)(p)[0];
    const double at_base = (*pert.delta)(candidate_.chart.base)[0];
    total[static_cast<std::size_t>(pert.j * n + pert.l)] += at_p - at_base;
  }
  return total;
}

std::vector<std::vector<double>> PotentialSquare::tabulate(const std::vector<std::vector<double>>& points) const {
  std::vector<std::vector<double>> table;
  table.reserve(points.size());
  for (const auto& p : points) table.push_back(evaluate(p));
  return table;
}

PotentialSquare integrate_potentials(const HaantjesCandidate& c, const std::vector<double>& closed_residuals,
                                     double tol, std::vector<PotentialPerturbation> perturbations) {
  for (std::size_t e = 0; e < closed_residuals.size(); ++e) {
    if (!(closed_residuals[e] <= tol)) {
      const int n = c.dim();
      throw NotClosed("K_" + std::to_string(e / n + 1) + " K_" + std::to_string(e % n + 1) +
                      " dA is not closed (residual " + std::to_string(closed_residuals[e]) + ")");
    }
  }
  return PotentialSquare(c, std::move(perturbations));
}

}  // namespace haantjes
