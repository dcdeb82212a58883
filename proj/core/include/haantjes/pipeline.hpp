#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haantjes/manifest.hpp"
#include "haantjes/report.hpp"

namespace haantjes {

/// Overrides for the manifest's [checks] table.
struct CheckOptions {
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::vector<std::string> only;  // check-id prefixes; empty runs everything
};

/// True when `id` is selected by one of the prefixes (or there are none).
bool check_selected(const std::string& id, const std::vector<std::string>& only);

/// Runs the certification pipeline in dependency order: commute, closed,
/// potentials, hessian-roundtrip, constants, yano-ako, weak-haantjes, ideal,
/// lenard, compatibility, wdvv, metric. Failures inside a check become FAIL
/// records; only manifest problems propagate as exceptions.
CertificateReport run_checks(const Manifest& m, const CheckOptions& options = {});

/// Hessian of a scalar field at p, row-major.
std::vector<double> hessian_at(FieldPtr f, std::span<const double> p);

}  // namespace haantjes
