#include "haantjes/candidate.hpp"

#include <algorithm>

namespace haantjes {

HaantjesCandidate candidate_from_manifest(const Manifest& m) {
  if (!m.candidate.present) throw SchemaError("candidate: section missing");
  HaantjesCandidate c;
  c.chart = m.chart;
  c.potential = m.field(m.candidate.potential);
  for (const auto& name : m.candidate.operators) {
    c.operators.push_back(m.field(name));
    c.operator_names.push_back(name);
  }
  if (!m.candidate.generator.empty()) c.generator = m.field(m.candidate.generator);
  if (!m.candidate.hessian_potential.empty()) c.hessian_potential = m.field(m.candidate.hessian_potential);
  return c;
}

FieldPtr square_forms_field(const HaantjesCandidate& c) {
  const int n = c.dim();
  return make_field(n, Valence::Tensor12, [c](auto x, auto out) {
    using T = span_scalar_t<decltype(out)>;
    const auto b = square_forms(c, std::vector<T>(x.begin(), x.end()));
    std::copy(b.begin(), b.end(), out.begin());
  });
}

FieldPtr frame_vector(const HaantjesCandidate& c, FieldPtr xi, int j) {
  return act_on_vector(c.operators[static_cast<std::size_t>(j)], std::move(xi));
}

}  // namespace haantjes
