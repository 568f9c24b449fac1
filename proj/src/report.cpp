#include "levilab/report.hpp"

#include <ostream>

namespace levilab {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (const char c : s) out += (c == '\n' ? ' ' : c);
  return out;
}

}  // namespace

int verdict_exit_code(const Verdict& got, VerdictState expected) {
  if (got.state == expected) return kExitOk;
  if (got.inconclusive()) return kExitInconclusive;
  return kExitRefuted;
}

void write_verdict(std::ostream& os, ReportFormat fmt, const std::string& check, const Verdict& v) {
  if (fmt == ReportFormat::Text) {
    os << check << ": " << verdict_str(v) << "\n";
    return;
  }
  os << "check=" << esc(check) << " verdict=" << verdict_state_str(v.state) << " certificate="
     << (v.certificate ? esc(certificate_str(*v.certificate)) : "-") << "\n";
}

void write_property_verdicts(std::ostream& os, ReportFormat fmt, const std::string& subject,
                             const PropertyVerdicts& v) {
  if (fmt == ReportFormat::Text) {
    os << subject << " (" << v.scope_note << ")\n";
    os << "  sigma-Levi:        " << verdict_str(v.sigma_levi) << "\n";
    os << "  quasi-c-sigma-Levi: " << verdict_str(v.quasi_c) << "\n";
    os << "  quasi-sigma-Levi:  " << verdict_str(v.quasi) << "\n";
    for (const auto& e : v.sigma_evidence)
      os << "    [sigma] " << e.entry << ": " << verdict_str(e.verdict) << "\n";
    for (const auto& e : v.quasi_c_evidence)
      os << "    [quasi-c] " << e.entry << ": " << verdict_str(e.verdict) << "\n";
    for (const auto& e : v.quasi_evidence)
      os << "    [quasi] " << e.entry << ": " << verdict_str(e.verdict) << "\n";
    return;
  }
  const auto line = [&](const char* prop, const Verdict& verdict, const std::string& entry) {
    os << "subject=" << esc(subject) << " property=" << prop << " entry=" << esc(entry)
       << " verdict=" << verdict_state_str(verdict.state) << " certificate="
       << (verdict.certificate ? esc(certificate_str(*verdict.certificate)) : "-") << "\n";
  };
  line("sigma_levi", v.sigma_levi, "*");
  line("quasi_c", v.quasi_c, "*");
  line("quasi", v.quasi, "*");
  for (const auto& e : v.sigma_evidence) line("sigma_levi", e.verdict, e.entry);
  for (const auto& e : v.quasi_c_evidence) line("quasi_c", e.verdict, e.entry);
  for (const auto& e : v.quasi_evidence) line("quasi", e.verdict, e.entry);
}

void write_scenarios(std::ostream& os, ReportFormat fmt, const ScenarioReport& report) {
  for (const auto& s : report.scenarios) {
    if (fmt == ReportFormat::Text) {
      os << s.name << ": " << (s.pass ? "pass" : "FAIL") << " (" << s.micros << " us)\n";
      for (const auto& c : s.claims) {
        os << "  " << (c.pass ? "pass" : "FAIL") << ": " << c.claim << " -> " << c.computed;
        if (!c.certificate.empty()) os << " [" << c.certificate << "]";
        os << " (" << c.micros << " us)\n";
      }
    } else {
      for (const auto& c : s.claims)
        os << "scenario=" << esc(s.name) << " claim=" << esc(c.claim)
           << " verdict=" << (c.pass ? "pass" : "fail") << " computed=" << esc(c.computed)
           << " certificate=" << (c.certificate.empty() ? "-" : esc(c.certificate))
           << " micros=" << c.micros << "\n";
    }
  }
  if (fmt == ReportFormat::Text)
    os << (report.all_pass ? "all scenarios pass" : "SCENARIO FAILURES") << "\n";
}

void write_combine(std::ostream& os, ReportFormat fmt, const CombineOutcome& out) {
  if (fmt == ReportFormat::Text) {
    os << out.set.name << " [witness " << out.witness_note << "]\n";
    for (const auto& e : out.reverified)
      os << "  " << e.entry << ": " << verdict_str(e.verdict) << "\n";
    os << (out.all_verified ? "combined set verified" : "COMBINE FAILURES") << "\n";
    return;
  }
  for (const auto& e : out.reverified)
    os << "combine=" << esc(out.set.name) << " entry=" << esc(e.entry)
       << " verdict=" << verdict_state_str(e.verdict.state) << " witness=" << esc(e.witness)
       << "\n";
}

void write_domination(std::ostream& os, ReportFormat fmt, const DominationOutcome& out) {
  if (fmt == ReportFormat::Text) {
    for (const auto& e : out.reverified)
      os << "  " << e.entry << ": " << verdict_str(e.verdict) << " [witness " << e.witness
         << "]\n";
    os << (out.all_verified ? "domination transfer verified" : "TRANSFER FAILURES") << "\n";
    return;
  }
  for (const auto& e : out.reverified)
    os << "dominate entry=" << esc(e.entry) << " verdict=" << verdict_state_str(e.verdict.state)
       << " witness=" << esc(e.witness) << "\n";
}

}  // namespace levilab
