#include "haantjes/geometry.hpp"

namespace haantjes {

namespace {

void require_same_dim(const Field& a, const Field& b, const char* what) {
  if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": fields live on different charts");
}

template <class T>
Matrix<T> jacobian_at(const Field& forward, std::span<const T> u) {
  const int n = forward.dim();
  const auto jet = jet1(forward, u);
  Matrix<T> j(n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) j(a, i) = jet.d(a, i);
  return j;
}

}  // namespace

FieldPtr differential(FieldPtr scalar) {
  if (scalar->valence() != Valence::Scalar) throw DimensionMismatch("differential: argument must be a scalar");
  const int n = scalar->dim();
  return make_field(n, Valence::OneForm, [scalar](auto x, auto out) {
    const auto jet = jet1(*scalar, x);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = jet.grad[k];
  });
}

FieldPtr act_on_vector(FieldPtr k, FieldPtr x) {
  require_same_dim(*k, *x, "act_on_vector");
  const int n = k->dim();
  return make_field(n, Valence::Vector, [k, x, n](auto p, auto out) {
    const auto kv = (*k)(p);
    const auto xv = (*x)(p);
    const auto y = act_vector(kv, xv, n);
    std::copy(y.begin(), y.end(), out.begin());
  });
}

FieldPtr act_on_form(FieldPtr k, FieldPtr alpha) {
  require_same_dim(*k, *alpha, "act_on_form");
  const int n = k->dim();
  return make_field(n, Valence::OneForm, [k, alpha, n](auto p, auto out) {
    const auto kv = (*k)(p);
    const auto av = (*alpha)(p);
    const auto y = act_form(kv, av, n);
    std::copy(y.begin(), y.end(), out.begin());
  });
}

FieldPtr compose(FieldPtr k1, FieldPtr k2) {
  require_same_dim(*k1, *k2, "compose");
  const int n = k1->dim();
  return make_field(n, Valence::Tensor11, [k1, k2, n](auto p, auto out) {
    const auto c = matmul((*k1)(p), (*k2)(p), n);
    std::copy(c.begin(), c.end(), out.begin());
  });
}

FieldPtr add_scaled(FieldPtr a, FieldPtr b, double c) {
  require_same_dim(*a, *b, "add_scaled");
  if (a->valence() != b->valence()) throw DimensionMismatch("add_scaled: valences differ");
  return make_field(a->dim(), a->valence(), [a, b, c](auto p, auto out) {
    const auto av = (*a)(p);
    const auto bv = (*b)(p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + c * bv[i];
  });
}

FieldPtr coordinate_vector(int dim, int k) {
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  v[static_cast<std::size_t>(k)] = 1.0;
  return constant_field(dim, Valence::Vector, std::move(v));
}

std::pair<int, int> index_counts(Valence v) {
  switch (v) {
    case Valence::Scalar: return {0, 0};
    case Valence::Vector: return {1, 0};
    case Valence::OneForm: return {0, 1};
    case Valence::Tensor11: return {1, 1};
    case Valence::Tensor12: return {1, 2};
  }
  return {0, 0};
}

ChartMap make_chart_map(int dim, const std::vector<std::string>& forward, const std::vector<std::string>& inverse) {
  return {make_expr_field(dim, Valence::Vector, forward), make_expr_field(dim, Valence::Vector, inverse)};
}

FieldPtr pushforward(FieldPtr f, const ChartMap& map) {
  const int n = f->dim();
  const auto [upper, lower] = index_counts(f->valence());
  return make_field(n, f->valence(), [f, map, upper = upper, lower = lower, n](auto v, auto out) {
    using T = span_scalar_t<decltype(out)>;
    const auto u = (*map.inverse)(v);
    const auto j = jacobian_at(*map.forward, std::span<const T>(u));
    const auto jinv = inverse(j);
    const auto comps = transform_components((*f)(std::span<const T>(u)), n, upper, lower, j, jinv);
    std::copy(comps.begin(), comps.end(), out.begin());
  });
}

std::vector<double> change_chart_components(const std::vector<double>& comps, int upper, int lower,
                                            const ChartMap& map, std::span<const double> p) {
  const int n = map.forward->dim();
  const auto j = jacobian_at(*map.forward, p);
  if (condition_number(j) > 1e8) throw SingularJacobian("chart map Jacobian is singular at the point");
  return transform_components(comps, n, upper, lower, j, inverse(j));
}

std::vector<double> change_chart(const Field& f, const ChartMap& map, std::span<const double> p) {
  const auto [upper, lower] = index_counts(f.valence());
  return change_chart_components(f(p), upper, lower, map, p);
}

}  // namespace haantjes
