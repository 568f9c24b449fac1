#ifndef LEVILAB_REPORT_HPP
#define LEVILAB_REPORT_HPP

#include <iosfwd>

#include "levilab/scenarios.hpp"

namespace levilab {

enum class ReportFormat { Text, Structured };

/// Exit codes: 0 all requested verdicts match expectations, 2 a check was
/// refuted against expectation, 3 inconclusive, 4 input error.
enum ExitCode : int {
  kExitOk = 0,
  kExitRefuted = 2,
  kExitInconclusive = 3,
  kExitInputError = 4,
};

int verdict_exit_code(const Verdict& got, VerdictState expected);

/// One structured record per line with stable field names; rationals render
/// as "p/q". Deterministic ordering (catalog order, then set order).
void write_verdict(std::ostream& os, ReportFormat fmt, const std::string& check,
                   const Verdict& v);
void write_property_verdicts(std::ostream& os, ReportFormat fmt, const std::string& subject,
                             const PropertyVerdicts& v);
void write_scenarios(std::ostream& os, ReportFormat fmt, const ScenarioReport& report);
void write_combine(std::ostream& os, ReportFormat fmt, const CombineOutcome& out);
void write_domination(std::ostream& os, ReportFormat fmt, const DominationOutcome& out);

}  // namespace levilab

#endif  // LEVILAB_REPORT_HPP
