#include "haantjes/chart.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "haantjes/errors.hpp"

namespace haantjes {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::string format_point(std::span<const double> p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << p[i];
  out << ")";
  return out.str();
}

}  // namespace

void ChartBox::validate() const {
  if (dim < 1) throw SchemaError("chart: dim must be at least 1");
  if (static_cast<int>(std::size(kPrimes)) < dim) throw SchemaError("chart: dimension too large");
  if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim ||
      static_cast<int>(base.size()) != dim) {
    throw SchemaError("chart: lower, upper and base must each have " + std::to_string(dim) +
                      " entries");
  }
  for (int i = 0; i < dim; ++i) {
    if (!(lower[i] < upper[i])) {
      throw SchemaError("chart: lower[" + std::to_string(i + 1) + "] must be below upper");
    }
  }
  if (!strictly_inside(base)) throw SchemaError("chart: base point " + format_point(base) + " is not interior");
}

bool ChartBox::strictly_inside(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim) return false;
  for (int i = 0; i < dim; ++i) {
    if (!(p[i] > lower[i] && p[i] < upper[i])) return false;
  }
  return true;
}

void ChartBox::require_inside(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim) {
    throw DimensionMismatch("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                            std::to_string(dim));
  }
  if (!strictly_inside(p)) throw DomainError("point " + format_point(p) + " is outside the chart box");
}

std::vector<double> ChartBox::at_fraction(std::span<const double> s) const {
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) p[i] = lower[i] + s[i] * (upper[i] - lower[i]);
  return p;
}

std::vector<std::vector<double>> sample_points(const ChartBox& chart, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(chart.dim));
  for (auto& s : shift) s = uniform(rng);

  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(count));
  std::vector<double> frac(static_cast<std::size_t>(chart.dim));
  for (int k = 0; k < count; ++k) {
    for (int i = 0; i < chart.dim; ++i) {
      double h = radical_inverse(static_cast<std::uint64_t>(k + 1), kPrimes[i]) + shift[i];
      h -= std::floor(h);
      frac[i] = 0.1 + 0.8 * h;
    }
    points.push_back(chart.at_fraction(frac));
  }
  return points;
}

}  // namespace haantjes
