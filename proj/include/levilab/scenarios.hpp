#ifndef LEVILAB_SCENARIOS_HPP
#define LEVILAB_SCENARIOS_HPP

#include "levilab/classify.hpp"

namespace levilab {

/// One checked claim: the expected outcome against the computed one, with
/// the certificate (when any) and the timing in microseconds.
struct ScenarioClaim {
  std::string claim;
  bool pass = false;
  std::string computed;
  std::string certificate;
  std::int64_t micros = 0;
};

struct Scenario {
  std::string name;
  std::vector<ScenarioClaim> claims;
  bool pass = false;
  std::int64_t micros = 0;
};

struct ScenarioReport {
  std::vector<Scenario> scenarios;
  bool all_pass = false;
};

/// Executes the five scenario bundles with pinned expected verdicts:
///   embed_and_identity   - the proper-inclusion example on C[0,1]+L1 and c
///   diagonal_c0          - the diagonal operator into c0 and its norm limits
///   collective_remarks   - solid hull / delta family / scalar scaling
///   coordinate_evals     - {T_k} is not collectively quasi-sigma-Levi
///   domination           - 0 <= S <= T transfer with the doubled witness
ScenarioReport run_paper_scenarios(Index horizon = kDefaultHorizon);

/// Runs one bundle by name (throws std::invalid_argument on unknown names).
Scenario run_paper_scenario(const std::string& name, Index horizon = kDefaultHorizon);

}  // namespace levilab

#endif  // LEVILAB_SCENARIOS_HPP
