#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "haantjes/chart.hpp"
#include "haantjes/field.hpp"

namespace haantjes {

/// A named field declared in a manifest.
struct ManifestField {
  std::string name;
  Valence valence = Valence::Scalar;
  std::vector<std::string> sources;  // component expressions as written, row-major
  std::shared_ptr<const ExprField> field;
};

/// The [candidate] section: names of manifest fields. "Id" is always
/// available as the identity (1,1) field.
struct CandidateSection {
  bool present = false;
  std::string potential;                 // A
  std::vector<std::string> operators;    // K_1..K_n
  std::string generator;                 // Lenard chain generator (optional)
  std::vector<std::string> symmetries;   // conformal symmetry candidates (optional)
  std::string hessian_potential;         // F on t-coordinates (optional)
  std::vector<std::string> weak;         // operators checked for the weak conditions
};

struct CheckSettings {
  double tol = 1e-8;
  int points = 50;
  std::uint64_t seed = 42;
};

struct SimulationSettings {
  double length = 1.0;
  double amplitude = 0.05;
  std::vector<int> modes;       // per component; default 1, 2, 3, ...
  std::vector<double> phases;   // per component; default 0
};

struct Manifest {
  std::string name;
  std::string description;
  std::string source;  // path or "scenario:<name>"
  std::string text;    // raw manifest text, hashed into reports
  ChartBox chart;
  std::map<std::string, ManifestField> fields;
  CandidateSection candidate;
  CheckSettings checks;
  SimulationSettings simulate;
  std::map<std::string, std::string> expected;  // check id (or "overall") -> verdict

  /// Field by name; "Id" resolves to the identity. Throws SchemaError.
  FieldPtr field(const std::string& name) const;
  const ManifestField& entry(const std::string& name) const;
};

/// Parses and validates manifest text. Throws ParseError (prefixed with the
/// field path), SchemaError, UnknownVariable, ArityError or EvalError.
Manifest parse_manifest(std::string_view text, const std::string& source = "<memory>");

/// Loads a manifest file, or a packaged scenario when `path_or_name` names one
/// and no such file exists.
Manifest load_manifest(const std::string& path_or_name);

}  // namespace haantjes
