#ifndef LEVILAB_CLASSIFY_HPP
#define LEVILAB_CLASSIFY_HPP

#include "levilab/catalog.hpp"
#include "levilab/operators.hpp"

namespace levilab {

/// Per-catalog-entry evidence for one Levi property.
struct EntryEvidence {
  std::string entry;
  Verdict verdict;
  std::string witness;  // description of the constructed witness, if any
};

/// The three classifier verdicts. Verified verdicts are always relative to
/// the catalog and the closed generator grammar; Refuted verdicts are
/// absolute (they carry a concrete certificate).
struct PropertyVerdicts {
  Verdict sigma_levi;
  Verdict quasi_c;
  Verdict quasi;
  std::vector<EntryEvidence> sigma_evidence;
  std::vector<EntryEvidence> quasi_c_evidence;
  std::vector<EntryEvidence> quasi_evidence;
  std::string scope_note = "relative to catalog and grammar";
};

PropertyVerdicts classify_levi(const OperatorDesc& op, const TestCatalog& catalog,
                               Index horizon = kDefaultHorizon);

/// A finite operator set or the coordinate-evaluation family {a -> a(k)}.
struct OperatorSet {
  std::string name;
  std::vector<OpPtr> members;      // finite part
  bool coordinate_evals = false;   // {T_k : k in N}, domain -> reals
  Space domain;
  Space codomain;
};

struct ArbitraryInfiniteSet : std::runtime_error {
  ArbitraryInfiniteSet()
      : std::runtime_error(
            "parametric operator sets are limited to the coordinate-evaluation family") {}
};

PropertyVerdicts classify_collective(const OperatorSet& set, const TestCatalog& catalog,
                                     Index horizon = kDefaultHorizon);

struct WitnessMissing : std::runtime_error {
  explicit WitnessMissing(const std::string& what) : std::runtime_error(what) {}
};

/// Result of a collective combinator: the combined set descriptor, sampled
/// exhibit operators, and the per-entry re-verification against the combined
/// witness p_n + q_n (affine) or the l1 witness (series).
struct CombineOutcome {
  OperatorSet set;
  std::vector<OpPtr> exhibits;
  std::vector<EntryEvidence> reverified;
  bool all_verified = false;
  std::string witness_note;
};

/// {alpha T + beta S : |alpha|+|beta| <= 1, T in A, S in B}, witness p_n+q_n.
CombineOutcome collective_combine_affine(const OperatorSet& a, const OperatorSet& b,
                                         const std::vector<std::pair<Rat, Rat>>& exhibits,
                                         const TestCatalog& catalog,
                                         Index horizon = kDefaultHorizon);

/// sum_i alpha_i T_i over a finite list with sum |alpha_i| <= 1; the witness
/// comes from the l1 machinery and the operator-norm bound is recorded.
CombineOutcome collective_combine_l1(const std::vector<Rat>& weights,
                                     const std::vector<OpPtr>& ops, const TestCatalog& catalog,
                                     Index horizon = kDefaultHorizon);

struct PositivityMissing : std::runtime_error {
  explicit PositivityMissing(const std::string& what) : std::runtime_error(what) {}
};
struct PairingIncomplete : std::runtime_error {
  explicit PairingIncomplete(const std::string& what) : std::runtime_error(what) {}
};

/// Domination transfer: with 0 <= S <= T_S for each S in A and a collective
/// quasi witness p_n for C on the catalog, 2 p_n is a collective quasi
/// witness for A; re-verified pairwise up to the horizon.
struct DominationOutcome {
  std::vector<WitnessSequence> transferred;  // 2 p_n per catalog entry
  std::vector<EntryEvidence> reverified;
  bool all_verified = false;
};
DominationOutcome domination_transfer(const OperatorSet& a, const OperatorSet& c,
                                      const std::vector<size_t>& pairing,
                                      const std::vector<WitnessSequence>& witness_c,
                                      const TestCatalog& catalog,
                                      Index horizon = kDefaultHorizon);

}  // namespace levilab

#endif  // LEVILAB_CLASSIFY_HPP
