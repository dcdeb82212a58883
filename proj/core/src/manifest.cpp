#include "haantjes/manifest.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "haantjes/errors.hpp"
#include "haantjes/scenarios.hpp"
#include "haantjes/toml_lite.hpp"

namespace haantjes {

namespace {

using toml::Table;
using toml::Value;

const Value* find(const Table& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

std::string require_string(const Value& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path + ": expected a string");
  return v.as_string();
}

double require_number(const Value& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path + ": expected a number");
  return v.as_number();
}

int require_integer(const Value& v, const std::string& path) {
  const double d = require_number(v, path);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw SchemaError(path + ": expected an integer");
  return static_cast<int>(d);
}

std::vector<double> number_array(const Value& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.as_array().size(); ++i) {
    out.push_back(require_number(v.as_array()[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> string_array(const Value& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.as_array().size(); ++i) {
    out.push_back(require_string(v.as_array()[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

/// Component text: strings verbatim, numbers printed exactly.
std::string component_source(const Value& v, const std::string& path) {
  if (v.is_string()) return v.as_string();
  if (v.is_number()) {
    std::ostringstream out;
    out.precision(17);
    out << v.as_number();
    return out.str();
  }
  throw SchemaError(path + ": expected an expression string or a number");
}

/// Nested tables produced by bare dotted keys, flattened back to "a.b.c".
void flatten(const Table& t, const std::string& prefix, std::map<std::string, const Value*>& out) {
  for (const auto& [k, v] : t) {
    const std::string name = prefix.empty() ? k : prefix + "." + k;
    if (v.is_table()) {
      flatten(v.as_table(), name, out);
    } else {
      out[name] = &v;
    }
  }
}

Valence parse_valence(const std::string& s, const std::string& path) {
  if (s == "scalar") return Valence::Scalar;
  if (s == "vector") return Valence::Vector;
  if (s == "oneform" || s == "1-form") return Valence::OneForm;
  if (s == "(1,1)") return Valence::Tensor11;
  if (s == "(1,2)") return Valence::Tensor12;
  throw SchemaError(path + ": unknown valence '" + s + "' (expected scalar, vector, oneform, (1,1) or (1,2))");
}

ChartBox parse_chart(const Table& root) {
  const Value* v = find(root, "chart");
  if (!v || !v->is_table()) throw SchemaError("chart: section missing");
  const Table& t = v->as_table();
  ChartBox chart;
  const Value* dim = find(t, "dim");
  if (!dim) throw SchemaError("chart.dim: missing");
  chart.dim = require_integer(*dim, "chart.dim");
  if (chart.dim < 1 || chart.dim > kMaxDim) {
    throw SchemaError("chart.dim: must be between 1 and " + std::to_string(kMaxDim));
  }
  if (const Value* label = find(t, "label")) chart.label = require_string(*label, "chart.label");
  const Value* lower = find(t, "lower");
  const Value* upper = find(t, "upper");
  if (!lower || !upper) throw SchemaError("chart: lower and upper are required");
  chart.lower = number_array(*lower, "chart.lower");
  chart.upper = number_array(*upper, "chart.upper");
  if (const Value* base = find(t, "base")) {
    chart.base = number_array(*base, "chart.base");
  } else if (chart.lower.size() == chart.upper.size()) {
    for (std::size_t i = 0; i < chart.lower.size(); ++i) chart.base.push_back(0.5 * (chart.lower[i] + chart.upper[i]));
  }
  chart.validate();
  return chart;
}

/// Parses one expression, prefixing errors with the manifest path.
Expr parse_component(const std::string& src, int dim, const std::string& path) {
  try {
    return parse_expr(src, dim);
  } catch (const ParseError& e) {
    throw e.with_path(path);
  } catch (const UnknownVariable& e) {
    throw UnknownVariable(e.name(), e.offset(), path);
  } catch (const ArityError& e) {
    throw ArityError(path + ": " + e.what());
  }
}

std::vector<int> parse_index_suffix(const std::string& key, const std::string& name, int count, int dim,
                                    const std::string& path) {
  const std::string prefix = name + ".";
  if (key.rfind(prefix, 0) != 0) throw SchemaError(path + ": unknown key '" + key + "'");
  std::vector<int> idx;
  std::stringstream ss(key.substr(prefix.size()));
  std::string part;
  while (std::getline(ss, part, '.')) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw SchemaError(path + ": malformed component key '" + key + "'");
    }
    if (v < 1 || v > dim) throw SchemaError(path + ": component index out of range in '" + key + "'");
    idx.push_back(v - 1);
  }
  if (static_cast<int>(idx.size()) != count) {
    throw SchemaError(path + ": component key '" + key + "' needs " + std::to_string(count) + " indices");
  }
  return idx;
}

ManifestField parse_field(const std::string& name, const Table& t, int dim) {
  const std::string path = "fields." + name;
  if (name == "Id") throw SchemaError(path + ": the name Id is reserved for the identity");
  std::map<std::string, const Value*> entries;
  flatten(t, "", entries);

  ManifestField f;
  f.name = name;
  auto valence_it = entries.find("valence");
  if (valence_it == entries.end()) throw SchemaError(path + ".valence: missing");
  f.valence = parse_valence(require_string(*valence_it->second, path + ".valence"), path + ".valence");
  entries.erase(valence_it);
  entries.erase("description");

  const int count = component_count(f.valence, dim);
  const auto [upper, lower] = [&]() -> std::pair<int, int> {
    switch (f.valence) {
      case Valence::Scalar: return {0, 0};
      case Valence::Vector: return {1, 0};
      case Valence::OneForm: return {0, 1};
      case Valence::Tensor11: return {1, 1};
      case Valence::Tensor12: return {1, 2};
    }
    return {0, 0};
  }();
  const int rank = upper + lower;

  if (auto it = entries.find("value"); it != entries.end()) {
    if (f.valence != Valence::Scalar) throw SchemaError(path + ".value: only scalar fields take a value");
    f.sources = {component_source(*it->second, path + ".value")};
    entries.erase(it);
  } else if (auto it2 = entries.find("components"); it2 != entries.end()) {
    const Value& v = *it2->second;
    if (!v.is_array()) throw SchemaError(path + ".components: expected an array");
    if (static_cast<int>(v.as_array().size()) != count) {
      throw SchemaError(path + ".components: expected " + std::to_string(count) + " components, got " +
                        std::to_string(v.as_array().size()));
    }
    for (std::size_t i = 0; i < v.as_array().size(); ++i) {
      f.sources.push_back(component_source(v.as_array()[i], path + ".components[" + std::to_string(i) + "]"));
    }
    entries.erase(it2);
  } else if (auto it3 = entries.find("diag"); it3 != entries.end()) {
    if (f.valence != Valence::Tensor11) throw SchemaError(path + ".diag: only (1,1) fields take a diagonal");
    const Value& v = *it3->second;
    if (!v.is_array() || static_cast<int>(v.as_array().size()) != dim) {
      throw SchemaError(path + ".diag: expected " + std::to_string(dim) + " entries");
    }
    f.sources.assign(static_cast<std::size_t>(count), "0");
    for (int i = 0; i < dim; ++i) {
      f.sources[static_cast<std::size_t>(i * dim + i)] =
          component_source(v.as_array()[i], path + ".diag[" + std::to_string(i) + "]");
    }
    entries.erase(it3);
  } else {
    f.sources.assign(static_cast<std::size_t>(count), "0");
    if (entries.empty()) throw SchemaError(path + ": no components given");
  }

  // Remaining keys are explicit components "<name>.i.j..." (1-based).
  for (const auto& [key, v] : entries) {
    if (rank == 0) throw SchemaError(path + ": unknown key '" + key + "'");
    const auto idx = parse_index_suffix(key, name, rank, dim, path);
    int flat = 0;
    for (int i : idx) flat = flat * dim + i;
    f.sources[static_cast<std::size_t>(flat)] = component_source(*v, path + "." + key);
  }

  std::vector<Expr> exprs;
  for (std::size_t c = 0; c < f.sources.size(); ++c) {
    exprs.push_back(parse_component(f.sources[c], dim, path + " component " + std::to_string(c)));
  }
  f.field = std::make_shared<ExprField>(dim, f.valence, std::move(exprs));
  return f;
}

/// Fails fast on components that cannot be evaluated near the corners of the box.
void probe_field(const ManifestField& f, const ChartBox& chart) {
  const int n = chart.dim;
  const int corners = std::min(8, 1 << n);
  std::vector<double> frac(static_cast<std::size_t>(n));
  for (int c = 0; c < corners; ++c) {
    for (int i = 0; i < n; ++i) frac[i] = (c >> i) & 1 ? 0.9 : 0.1;
    const auto p = chart.at_fraction(frac);
    for (int comp = 0; comp < f.field->size(); ++comp) {
      try {
        (void)eval_jet2(*f.field, chart, p, comp);
      } catch (const EvalError& e) {
        std::ostringstream where;
        where << "fields." << f.name << " component " << comp << " at (";
        for (int i = 0; i < n; ++i) where << (i ? ", " : "") << p[i];
        where << "): " << e.what();
        throw EvalError(where.str());
      }
    }
  }
}

CandidateSection parse_candidate(const Table& t) {
  CandidateSection c;
  c.present = true;
  for (const auto& [key, v] : t) {
    const std::string path = "candidate." + key;
    if (key == "A") {
      c.potential = require_string(v, path);
    } else if (key == "K") {
      c.operators = string_array(v, path);
    } else if (key == "xi") {
      c.generator = require_string(v, path);
    } else if (key == "symmetries") {
      c.symmetries = string_array(v, path);
    } else if (key == "F") {
      c.hessian_potential = require_string(v, path);
    } else if (key == "weak") {
      c.weak = string_array(v, path);
    } else {
      throw SchemaError(path + ": unknown key");
    }
  }
  return c;
}

void require_valence(const Manifest& m, const std::string& name, Valence v, const std::string& path) {
  if (name == "Id") {
    if (v != Valence::Tensor11) throw SchemaError(path + ": Id is a (1,1) field");
    return;
  }
  auto it = m.fields.find(name);
  if (it == m.fields.end()) throw SchemaError(path + ": undefined field '" + name + "'");
  if (it->second.valence != v) {
    throw SchemaError(path + ": field '" + name + "' must have valence " + valence_name(v) + ", has " +
                      valence_name(it->second.valence));
  }
}

void validate_candidate(Manifest& m) {
  auto& c = m.candidate;
  const int n = m.chart.dim;
  if (c.potential.empty()) throw SchemaError("candidate.A: missing");
  require_valence(m, c.potential, Valence::Scalar, "candidate.A");
  if (static_cast<int>(c.operators.size()) != n) {
    throw SchemaError("candidate.K: expected " + std::to_string(n) + " operators, got " +
                      std::to_string(c.operators.size()));
  }
  for (std::size_t j = 0; j < c.operators.size(); ++j) {
    require_valence(m, c.operators[j], Valence::Tensor11, "candidate.K[" + std::to_string(j) + "]");
  }
  if (c.operators[0] != "Id") {
    const auto k1 = m.field(c.operators[0]);
    for (const auto& p : sample_points(m.chart, 8, 1)) {
      const auto v = (*k1)(p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (std::abs(v[i * n + j] - (i == j ? 1.0 : 0.0)) > 1e-12) {
            throw SchemaError("candidate.K[0]: the first operator must be the identity");
          }
        }
    }
  }
  if (!c.generator.empty()) require_valence(m, c.generator, Valence::Vector, "candidate.xi");
  for (std::size_t i = 0; i < c.symmetries.size(); ++i) {
    require_valence(m, c.symmetries[i], Valence::Vector, "candidate.symmetries[" + std::to_string(i) + "]");
  }
  if (!c.hessian_potential.empty()) require_valence(m, c.hessian_potential, Valence::Scalar, "candidate.F");
  if (c.weak.empty()) {
    c.weak.assign(c.operators.begin() + 1, c.operators.end());
  } else {
    for (std::size_t i = 0; i < c.weak.size(); ++i) {
      require_valence(m, c.weak[i], Valence::Tensor11, "candidate.weak[" + std::to_string(i) + "]");
    }
  }
}

}  // namespace

FieldPtr Manifest::field(const std::string& name) const {
  if (name == "Id") return identity_field(chart.dim);
  return entry(name).field;
}

const ManifestField& Manifest::entry(const std::string& name) const {
  auto it = fields.find(name);
  if (it == fields.end()) throw SchemaError("undefined field '" + name + "'");
  return it->second;
}

Manifest parse_manifest(std::string_view text, const std::string& source) {
  const Table root = toml::parse(text);
  Manifest m;
  m.source = source;
  m.text = std::string(text);
  m.name = source;

  for (const auto& [key, v] : root) {
    if (key == "name") {
      m.name = require_string(v, "name");
    } else if (key == "description") {
      m.description = require_string(v, "description");
    } else if (key != "chart" && key != "fields" && key != "candidate" && key != "checks" && key != "simulate" &&
               key != "expect") {
      throw SchemaError("unknown top-level key '" + key + "'");
    }
  }

  m.chart = parse_chart(root);

  if (const Value* fields = find(root, "fields")) {
    if (!fields->is_table()) throw SchemaError("fields: expected tables");
    for (const auto& [name, v] : fields->as_table()) {
      if (!v.is_table()) throw SchemaError("fields." + name + ": expected a table");
      m.fields.emplace(name, parse_field(name, v.as_table(), m.chart.dim));
    }
  }
  for (const auto& [name, f] : m.fields) probe_field(f, m.chart);

  if (const Value* cand = find(root, "candidate")) {
    if (!cand->is_table()) throw SchemaError("candidate: expected a table");
    m.candidate = parse_candidate(cand->as_table());
    validate_candidate(m);
  }

  if (const Value* checks = find(root, "checks")) {
    if (!checks->is_table()) throw SchemaError("checks: expected a table");
    for (const auto& [key, v] : checks->as_table()) {
      const std::string path = "checks." + key;
      if (key == "tol") {
        m.checks.tol = require_number(v, path);
        if (!(m.checks.tol > 0.0)) throw SchemaError(path + ": must be positive");
      } else if (key == "points") {
        m.checks.points = require_integer(v, path);
        if (m.checks.points < 1) throw SchemaError(path + ": must be positive");
      } else if (key == "seed") {
        const int seed = require_integer(v, path);
        if (seed < 0) throw SchemaError(path + ": must be nonnegative");
        m.checks.seed = static_cast<std::uint64_t>(seed);
      } else {
        throw SchemaError(path + ": unknown key");
      }
    }
  }

  if (const Value* sim = find(root, "simulate")) {
    if (!sim->is_table()) throw SchemaError("simulate: expected a table");
    for (const auto& [key, v] : sim->as_table()) {
      const std::string path = "simulate." + key;
      if (key == "length") {
        m.simulate.length = require_number(v, path);
        if (!(m.simulate.length > 0.0)) throw SchemaError(path + ": must be positive");
      } else if (key == "amplitude") {
        m.simulate.amplitude = require_number(v, path);
      } else if (key == "modes") {
        for (double d : number_array(v, path)) m.simulate.modes.push_back(static_cast<int>(d));
      } else if (key == "phases") {
        m.simulate.phases = number_array(v, path);
      } else {
        throw SchemaError(path + ": unknown key");
      }
    }
  }

  if (const Value* expect = find(root, "expect")) {
    if (!expect->is_table()) throw SchemaError("expect: expected a table");
    std::map<std::string, const Value*> flat;
    flatten(expect->as_table(), "", flat);
    for (const auto& [key, v] : flat) m.expected[key] = require_string(*v, "expect." + key);
  }
  return m;
}

Manifest load_manifest(const std::string& path_or_name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(path_or_name, ec)) {
    std::ifstream in(path_or_name, std::ios::binary);
    if (!in) throw SchemaError("cannot read manifest '" + path_or_name + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), path_or_name);
  }
  if (auto text = scenario_text(path_or_name)) return parse_manifest(*text, "scenario:" + path_or_name);
  throw SchemaError("no manifest file or packaged scenario named '" + path_or_name + "'");
}

}  // namespace haantjes
