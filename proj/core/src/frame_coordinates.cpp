#include "haantjes/frame_coordinates.hpp"

#include <cmath>

#include "haantjes/linalg.hpp"

namespace haantjes {

namespace {

constexpr double kFlowTol = 1e-10;
constexpr int kMaxSteps = 200000;

double norm_inf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

FrameCoordinates::FrameCoordinates(ChartBox chart, std::vector<FieldPtr> frame)
    : chart_(std::move(chart)), frame_(std::move(frame)) {
  if (static_cast<int>(frame_.size()) != chart_.dim) throw DimensionMismatch("frame size differs from the chart dimension");
}

std::vector<double> FrameCoordinates::flow(std::vector<double> y, int j, double time) const {
  const Field& f = *frame_[j];
  const int n = chart_.dim;
  auto rhs = [&](const std::vector<double>& p) {
    if (!chart_.strictly_inside(p)) throw FrameIntegrationFailure("frame flow left the chart box");
    return f(p);
  };
  auto rk4 = [&](const std::vector<double>& p, double h) {
    std::vector<double> tmp(static_cast<std::size_t>(n));
    const auto k1 = rhs(p);
    for (int i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    const auto k2 = rhs(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    const auto k3 = rhs(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = p[i] + h * k3[i];
    const auto k4 = rhs(tmp);
    std::vector<double> out(p);
    for (int i = 0; i < n; ++i) out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
  };

  if (time == 0.0) return y;
  const double direction = time > 0.0 ? 1.0 : -1.0;
  double remaining = std::abs(time);
  double h = std::min(remaining, 0.1);
  for (int step = 0; step < kMaxSteps && remaining > 0.0; ++step) {
    h = std::min(h, remaining);
    const auto big = rk4(y, direction * h);
    const auto half = rk4(rk4(y, 0.5 * direction * h), 0.5 * direction * h);
    std::vector<double> diff(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) diff[i] = half[i] - big[i];
    const double err = norm_inf(diff) / 15.0;
    const double allowed = kFlowTol * (1.0 + norm_inf(half));
    if (err <= allowed) {
      y = half;
      for (int i = 0; i < n; ++i) y[i] += diff[i] / 15.0;  // Richardson correction
      remaining -= h;
      const double grow = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 2.0;
      h *= std::min(2.0, std::max(1.0, grow));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(allowed / err, 0.2));
      if (h < 1e-14) throw FrameIntegrationFailure("frame flow step size underflow");
    }
  }
  if (remaining > 0.0) throw FrameIntegrationFailure("frame flow did not finish");
  return y;
}

std::vector<double> FrameCoordinates::to_chart(std::span<const double> t) const {
  std::vector<double> y = chart_.base;
  for (int j = 0; j < chart_.dim; ++j) y = flow(y, j, t[j] - chart_.base[j]);
  return y;
}

std::vector<double> FrameCoordinates::frame_at(std::span<const double> u) const {
  const int n = chart_.dim;
  std::vector<double> m(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    const auto col = (*frame_[j])(u);
    for (int a = 0; a < n; ++a) m[a * n + j] = col[a];
  }
  return m;
}

std::vector<double> FrameCoordinates::from_chart(std::span<const double> u) const {
  const int n = chart_.dim;
  std::vector<double> target(u.begin(), u.end());
  // Linearised guess from the base point, then Newton on u(t) = target.
  std::vector<double> t = chart_.base;
  {
    Matrix<double> m(n, n);
    const auto f = frame_at(chart_.base);
    for (int i = 0; i < n * n; ++i) m.data()[i] = f[i];
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r[i] = target[i] - chart_.base[i];
    const auto d = LuDecomposition<double>(m).solve(r);
    for (int i = 0; i < n; ++i) t[i] += d[i];
  }
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> cur;
    try {
      cur = to_chart(t);
    } catch (const FrameIntegrationFailure&) {
      if (iter == 0) {
        t = chart_.base;
        continue;
      }
      throw;
    }
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r[i] = target[i] - cur[i];
    if (norm_inf(r) <= 1e-10 * (1.0 + norm_inf(target))) return t;
    Matrix<double> m(n, n);
    const auto f = frame_at(cur);
    for (int i = 0; i < n * n; ++i) m.data()[i] = f[i];
    LuDecomposition<double> lu(m);
    if (lu.singular()) throw FrameIntegrationFailure("frame is singular during coordinate inversion");
    const auto d = lu.solve(r);
    for (int i = 0; i < n; ++i) t[i] += d[i];
  }
  throw FrameIntegrationFailure("coordinate inversion did not converge");
}

}  // namespace haantjes
