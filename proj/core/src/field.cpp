#include "haantjes/field.hpp"

#include <algorithm>
#include <cmath>

namespace haantjes {

int component_count(Valence v, int n) {
  switch (v) {
    case Valence::Scalar: return 1;
    case Valence::Vector:
    case Valence::OneForm: return n;
    case Valence::Tensor11: return n * n;
    case Valence::Tensor12: return n * n * n;
  }
  return 0;
}

std::string valence_name(Valence v) {
  switch (v) {
    case Valence::Scalar: return "scalar";
    case Valence::Vector: return "vector";
    case Valence::OneForm: return "oneform";
    case Valence::Tensor11: return "(1,1)";
    case Valence::Tensor12: return "(1,2)";
  }
  return "?";
}

ExprField::ExprField(int dim, Valence valence, std::vector<Expr> components)
    : Field(dim, valence), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != size()) {
    throw SchemaError("expected " + std::to_string(size()) + " components, got " +
                      std::to_string(components_.size()));
  }
  for (const auto& c : components_) {
    if (c.max_variable() >= dim) throw DimensionMismatch("component uses a coordinate beyond the chart");
  }
}

FieldPtr make_expr_field(int dim, Valence valence, const std::vector<std::string>& sources) {
  std::vector<Expr> exprs;
  exprs.reserve(sources.size());
  for (const auto& s : sources) exprs.push_back(parse_expr(s, dim));
  return std::make_shared<ExprField>(dim, valence, std::move(exprs));
}

FieldPtr constant_field(int dim, Valence valence, std::vector<double> values) {
  if (static_cast<int>(values.size()) != component_count(valence, dim)) {
    throw SchemaError("constant field has the wrong number of components");
  }
  return make_field(dim, valence, [values](auto, auto out) {
    using T = span_scalar_t<decltype(out)>;
    for (std::size_t c = 0; c < values.size(); ++c) out[c] = T(values[c]);
  });
}

FieldPtr identity_field(int dim) {
  std::vector<double> values(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) values[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return constant_field(dim, Valence::Tensor11, std::move(values));
}

FieldPtr zero_field(int dim, Valence valence) {
  return constant_field(dim, valence, std::vector<double>(static_cast<std::size_t>(component_count(valence, dim)), 0.0));
}

Jet2 eval_jet2(const Field& f, const ChartBox& chart, std::span<const double> p, int component) {
  chart.require_inside(p);
  const int n = static_cast<int>(p.size());
  std::vector<D2> x;
  x.reserve(p.size());
  for (int i = 0; i < n; ++i) x.push_back(D2::variable(D1::variable(p[i], i, n), i, n));
  std::vector<D2> out(static_cast<std::size_t>(f.size()));
  f.evaluate(std::span<const D2>(x), std::span<D2>(out));
  const D2& v = out.at(static_cast<std::size_t>(component));
  Jet2 jet;
  jet.value = v.value().value();
  jet.grad.resize(static_cast<std::size_t>(n));
  jet.hess.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    jet.grad[i] = v.value().partial(i);
    for (int j = 0; j < n; ++j) jet.hess[static_cast<std::size_t>(i * n + j)] = v.partial(i).partial(j);
  }
  return jet;
}

Jet2 eval_jet2(const Expr& e, const ChartBox& chart, std::span<const double> p) {
  ExprField f(chart.dim, Valence::Scalar, {e});
  return eval_jet2(f, chart, p);
}

double fd_gradient_discrepancy(const Field& f, std::span<const double> p, int component) {
  const int n = static_cast<int>(p.size());
  double norm = 0.0;
  for (double v : p) norm = std::max(norm, std::abs(v));
  const double h = 1e-5 * (1.0 + norm);
  const auto jet = jet1(f, p);
  std::vector<double> q(p.begin(), p.end());
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    q[k] = p[k] + h;
    const double plus = f(std::span<const double>(q))[component];
    q[k] = p[k] - h;
    const double minus = f(std::span<const double>(q))[component];
    q[k] = p[k];
    const double fd = (plus - minus) / (2.0 * h);
    const double exact = jet.d(component, k);
    worst = std::max(worst, std::abs(fd - exact) / (1.0 + std::abs(exact)));
  }
  return worst;
}

}  // namespace haantjes
