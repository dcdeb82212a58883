#include "haantjes/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace haantjes {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skipped: return "SKIPPED";
    case Verdict::Info: return "INFO";
    case Verdict::HypothesesUnmet: return "HYPOTHESES_UNMET";
  }
  return "?";
}

const CheckRecord* CertificateReport::find(std::string_view id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

Verdict overall_verdict(const std::vector<CheckRecord>& records) {
  for (const auto& r : records) {
    if (!r.gating) continue;
    if (r.verdict == Verdict::Fail || r.verdict == Verdict::HypothesesUnmet) return Verdict::Fail;
  }
  return Verdict::Pass;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_residual(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string tool_version() {
#ifdef HAANTJES_VERSION
  return HAANTJES_VERSION;
#else
  return "unknown";
#endif
}

std::string report_to_json(const CertificateReport& r, bool include_timing) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "haantjes";
  j["tool_version"] = r.tool_version;
  j["manifest"] = {{"name", r.manifest_name}, {"source", r.manifest_source}, {"hash", r.manifest_hash}};
  ordered_json chart;
  chart["dim"] = r.chart.dim;
  chart["label"] = r.chart.label;
  ordered_json lower = ordered_json::array(), upper = ordered_json::array(), base = ordered_json::array();
  for (int i = 0; i < r.chart.dim; ++i) {
    lower.push_back(format_residual(r.chart.lower[i]));
    upper.push_back(format_residual(r.chart.upper[i]));
    base.push_back(format_residual(r.chart.base[i]));
  }
  chart["lower"] = lower;
  chart["upper"] = upper;
  chart["base"] = base;
  j["chart"] = chart;
  j["settings"] = {{"points", r.points}, {"seed", r.seed}, {"tolerance", format_residual(r.tolerance)}};
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.records) {
    ordered_json rec;
    rec["id"] = c.id;
    rec["anchor"] = c.anchor;
    rec["points"] = c.points;
    rec["excluded"] = c.excluded;
    rec["max_residual"] = format_residual(c.max_residual);
    rec["tolerance"] = format_residual(c.tolerance);
    rec["verdict"] = verdict_name(c.verdict);
    rec["gating"] = c.gating;
    if (!c.message.empty()) rec["message"] = c.message;
    if (!c.details.empty()) {
      ordered_json d;
      for (const auto& [k, v] : c.details) d[k] = v;
      rec["details"] = d;
    }
    if (include_timing) rec["millis"] = c.millis;
    checks.push_back(rec);
  }
  j["checks"] = checks;
  j["overall"] = verdict_name(r.overall);
  if (include_timing) j["timing"] = {{"total_millis", r.total_millis}};
  return j.dump(2) + "\n";
}

std::string report_to_text(const CertificateReport& r) {
  std::ostringstream os;
  os << r.manifest_name << " (" << r.manifest_source << "), " << r.points << " points, seed " << r.seed
     << ", tol " << r.tolerance << "\n";
  std::size_t width = 8;
  for (const auto& c : r.records) width = std::max(width, c.id.size());
  for (const auto& c : r.records) {
    os << "  " << c.id << std::string(width - c.id.size() + 2, ' ');
    const std::string v = verdict_name(c.verdict);
    os << v << std::string(v.size() < 17 ? 17 - v.size() : 1, ' ');
    if (c.verdict != Verdict::Skipped) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.3e", c.max_residual);
      os << buf;
      if (c.excluded) os << "  (" << c.excluded << " excluded)";
    }
    if (!c.message.empty()) os << "  " << c.message;
    os << "\n";
  }
  os << "overall: " << verdict_name(r.overall) << "\n";
  return os.str();
}

}  // namespace haantjes
