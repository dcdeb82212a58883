#pragma once

#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "haantjes/chart.hpp"
#include "haantjes/dual.hpp"
#include "haantjes/errors.hpp"
#include "haantjes/expr.hpp"

namespace haantjes {

enum class Valence { Scalar, Vector, OneForm, Tensor11, Tensor12 };

/// Number of components of a field of valence v on an n-dimensional chart.
int component_count(Valence v, int n);
std::string valence_name(Valence v);

/// A tensor field on an n-dimensional chart, evaluable at any of the scalar
/// types double, D1..D4. Components are laid out upper indices first,
/// row-major: K^i_j at i*n+j, C^m_{jk} at (m*n+j)*n+k, forms by their lower
/// indices.
///
/// Implementations are immutable and safe to share between threads.
class Field {
 public:
  Field(int dim, Valence valence) : dim_(dim), valence_(valence) {}
  virtual ~Field() = default;

  int dim() const { return dim_; }
  Valence valence() const { return valence_; }
  int size() const { return component_count(valence_, dim_); }

  virtual void evaluate(std::span<const double> x, std::span<double> out) const = 0;
  virtual void evaluate(std::span<const D1> x, std::span<D1> out) const = 0;
  virtual void evaluate(std::span<const D2> x, std::span<D2> out) const = 0;
  virtual void evaluate(std::span<const D3> x, std::span<D3> out) const = 0;
  virtual void evaluate(std::span<const D4> x, std::span<D4> out) const = 0;

  template <class T>
  std::vector<T> operator()(std::span<const T> x) const {
    std::vector<T> out(static_cast<std::size_t>(size()));
    evaluate(x, std::span<T>(out));
    return out;
  }
  template <class T>
  std::vector<T> operator()(const std::vector<T>& x) const {
    return (*this)(std::span<const T>(x));
  }

 private:
  int dim_;
  Valence valence_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Field backed by parsed component expressions.
class ExprField final : public Field {
 public:
  ExprField(int dim, Valence valence, std::vector<Expr> components);

  const std::vector<Expr>& components() const { return components_; }

  void evaluate(std::span<const double> x, std::span<double> out) const override { run(x, out); }
  void evaluate(std::span<const D1> x, std::span<D1> out) const override { run(x, out); }
  void evaluate(std::span<const D2> x, std::span<D2> out) const override { run(x, out); }
  void evaluate(std::span<const D3> x, std::span<D3> out) const override { run(x, out); }
  void evaluate(std::span<const D4> x, std::span<D4> out) const override { run(x, out); }

 private:
  template <class T>
  void run(std::span<const T> x, std::span<T> out) const {
    for (std::size_t c = 0; c < components_.size(); ++c) out[c] = haantjes::evaluate(components_[c], x);
  }

  std::vector<Expr> components_;
};

/// Field computed by a generic callable `fn(std::span<const T> x, std::span<T> out)`.
/// Composite fields built on top of other fields are expressed this way so
/// that they can be differentiated like any other field.
template <class Fn>
class FunctionField final : public Field {
 public:
  FunctionField(int dim, Valence valence, Fn fn) : Field(dim, valence), fn_(std::move(fn)) {}

  void evaluate(std::span<const double> x, std::span<double> out) const override { fn_(x, out); }
  void evaluate(std::span<const D1> x, std::span<D1> out) const override { fn_(x, out); }
  void evaluate(std::span<const D2> x, std::span<D2> out) const override { fn_(x, out); }
  void evaluate(std::span<const D3> x, std::span<D3> out) const override { fn_(x, out); }
  void evaluate(std::span<const D4> x, std::span<D4> out) const override { fn_(x, out); }

 private:
  Fn fn_;
};

template <class Fn>
FieldPtr make_field(int dim, Valence valence, Fn fn) {
  return std::make_shared<FunctionField<Fn>>(dim, valence, std::move(fn));
}

FieldPtr make_expr_field(int dim, Valence valence, const std::vector<std::string>& sources);
FieldPtr constant_field(int dim, Valence valence, std::vector<double> values);
FieldPtr identity_field(int dim);
FieldPtr zero_field(int dim, Valence valence);

/// Scalar type of an output span, for generic lambdas.
template <class Span>
using span_scalar_t = std::remove_cv_t<typename Span::element_type>;

// ---------------------------------------------------------------------------
// Differentiation by lifting one Dual level.

/// Values and first partials of every component: grad[c*n + k] = d_k comp_c.
template <class T>
struct Jet1 {
  int n = 0;
  std::vector<T> value;
  std::vector<T> grad;

  const T& d(int component, int k) const { return grad[static_cast<std::size_t>(component * n + k)]; }
};

template <class T>
std::vector<Dual<T>> lift(std::span<const T> x) {
  const int n = static_cast<int>(x.size());
  std::vector<Dual<T>> lifted;
  lifted.reserve(x.size());
  for (int i = 0; i < n; ++i) lifted.push_back(Dual<T>::variable(x[i], i, n));
  return lifted;
}

template <class T>
Jet1<T> jet1(const Field& f, std::span<const T> x) {
  if constexpr (derivative_depth<T>::value >= kMaxDepth) {
    throw Error("derivative nesting deeper than the supported scalar types");
  } else {
    const int n = static_cast<int>(x.size());
    const auto lifted = lift(x);
    std::vector<Dual<T>> out(static_cast<std::size_t>(f.size()));
    f.evaluate(std::span<const Dual<T>>(lifted), std::span<Dual<T>>(out));
    Jet1<T> jet;
    jet.n = n;
    jet.value.reserve(out.size());
    jet.grad.resize(out.size() * static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < out.size(); ++c) {
      jet.value.push_back(out[c].value());
      for (int k = 0; k < n; ++k) jet.grad[c * n + k] = out[c].partial(k);
    }
    return jet;
  }
}

/// Value, gradient and Hessian of a scalar component.
struct Jet2 {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<double> hess;  // row-major n x n

  double h(int i, int j) const { return hess[static_cast<std::size_t>(i * static_cast<int>(grad.size()) + j)]; }
};

/// 2-jet of component `component` of f at p; p must lie strictly inside the chart.
Jet2 eval_jet2(const Field& f, const ChartBox& chart, std::span<const double> p, int component = 0);
Jet2 eval_jet2(const Expr& e, const ChartBox& chart, std::span<const double> p);

/// Largest relative disagreement between the exact gradient of a component
/// and central differences with step 1e-5 * (1 + |p|).
double fd_gradient_discrepancy(const Field& f, std::span<const double> p, int component = 0);

}  // namespace haantjes
