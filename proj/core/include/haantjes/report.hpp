#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "haantjes/chart.hpp"

namespace haantjes {

inline constexpr int kReportSchemaVersion = 1;

enum class Verdict { Pass, Fail, Skipped, Info, HypothesesUnmet };
std::string verdict_name(Verdict v);

/// One executed check.
struct CheckRecord {
  std::string id;        // e.g. "closed", "weak-haantjes.torsion@K2"
  std::string anchor;    // what the check certifies, in words
  int points = 0;
  int excluded = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Skipped;
  bool gating = true;
  std::string message;                     // reason for SKIPPED, errors, notes
  std::map<std::string, std::string> details;  // extra values, already formatted
  double millis = 0.0;
};

struct CertificateReport {
  std::string tool_version;
  std::string manifest_name;
  std::string manifest_source;
  std::string manifest_hash;  // FNV-1a 64 of the manifest text, hex
  ChartBox chart;
  int points = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<CheckRecord> records;
  Verdict overall = Verdict::Pass;
  double total_millis = 0.0;

  /// Record by id, or nullptr.
  const CheckRecord* find(std::string_view id) const;
};

/// PASS iff every gating record passes (SKIPPED and INFO records do not count).
Verdict overall_verdict(const std::vector<CheckRecord>& records);

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t v);

/// 17 significant digits, scientific; "inf"/"nan" for non-finite values.
std::string format_residual(double v);

/// JSON document; timing fields only when `include_timing` is set, so that
/// default reports are byte-identical across runs.
std::string report_to_json(const CertificateReport& r, bool include_timing = false);

/// Plain-text table for the terminal.
std::string report_to_text(const CertificateReport& r);

std::string tool_version();

}  // namespace haantjes
