#ifndef LEVILAB_CONVERGENCE_HPP
#define LEVILAB_CONVERGENCE_HPP

#include "levilab/sequence.hpp"

namespace levilab {

struct WitnessInvalid : std::runtime_error {
  explicit WitnessInvalid(const std::string& what)
      : std::runtime_error("witness fails decreasing-null: " + what) {}
};

/// Checks run exhaustively up to (structural stabilization hint + horizon)
/// and symbolically beyond; Inconclusive is explicit, never folded into
/// Verified or Refuted.
inline constexpr Index kDefaultHorizon = 128;

/// Decreasing with pointwise infimum zero. In the concrete spaces the order
/// is pointwise (a.e.-pointwise for the PL roles), where decreasing +
/// pointwise inf 0 is equivalent to order inf 0: any lattice lower bound is
/// a pointwise lower bound, and a positive pointwise inf at a coordinate
/// yields a positive lower bound supported there.
Verdict check_decreasing_null(const WitnessSequence& w, Index horizon = kDefaultHorizon);

/// |S(n) - limit| <= W(n) for all n: exhaustive to the effective horizon,
/// symbolic for recognized generator shapes beyond it.
Verdict check_order_convergence(const ElementSequence& s, const Element& limit,
                                const WitnessSequence& w, Index horizon = kDefaultHorizon);

/// |S(n') - S(n'')| <= W(n) for all n', n'' >= n. Monotone families reduce to
/// the envelope S_inf - S(n); others are checked pairwise to the horizon.
Verdict check_order_cauchy(const ElementSequence& s, const WitnessSequence& w,
                           Index horizon = kDefaultHorizon);

/// Families of sequences: finite lists plus the parametric shapes the paper
/// needs.
struct FiniteFamily {
  std::vector<ElementSequence> members;
  std::vector<Element> limits;
};
/// {(delta_k^n)_n : k in N} in the reals; limits all 0.
struct DeltaFamily {};
/// {lambda * base : lambda in R}; limits scale accordingly.
struct ScalarScaledFamily {
  FamilyPtr base;
};
/// {(base(n)(k))_n : k in N} in the reals — images of one sequence under
/// every coordinate evaluation.
struct CoordinateImagesFamily {
  FamilyPtr base;
};
using SequenceFamily =
    std::variant<FiniteFamily, DeltaFamily, ScalarScaledFamily, CoordinateImagesFamily>;

Space family_space(const SequenceFamily& fam);

/// One witness dominating every member (collective order convergence).
Verdict check_collective(const SequenceFamily& fam, const WitnessSequence& w,
                         Index horizon = kDefaultHorizon);

/// Collective order-Cauchy with one witness.
Verdict check_collective_cauchy(const SequenceFamily& fam, const WitnessSequence& w,
                                Index horizon = kDefaultHorizon);

/// q_n = sup over the family of |a_n - c_a| (or of the Cauchy oscillation).
/// Every valid collective witness must dominate it.
struct NoClosedForm : std::runtime_error {
  explicit NoClosedForm(const std::string& what) : std::runtime_error(what) {}
};
struct EnvelopeResult {
  std::optional<Element> value;     // q_n when finite
  bool unbounded = false;           // scalar-scaled families
  std::optional<Certificate> lower_bound;  // emitted when (q_n) fails pointwise-null
};
EnvelopeResult family_envelope(const SequenceFamily& fam, Index n);

// --- witness combinators (Proposition: union / linear / modulus / convex) ---

enum class WitnessCombine { Union, Linear, Modulus, Convex };

/// union -> pointwise sup; linear -> |alpha| P + |beta| Q; modulus and convex
/// leave P unchanged. The result is re-certified decreasing-null.
WitnessSequence combine_witness(WitnessCombine kind, const WitnessSequence& p,
                                const WitnessSequence* q = nullptr, const Rat& alpha = Rat(1),
                                const Rat& beta = Rat(0), Index horizon = kDefaultHorizon);

struct NotSummableWeights : std::runtime_error {
  NotSummableWeights() : std::runtime_error("weights have no exact closed form or exceed 1") {}
};
struct UnboundedWitness : std::runtime_error {
  UnboundedWitness() : std::runtime_error("witness exceeds the unit-ball bound") {}
};

/// p_n = sum_i |alpha_i| p_{i,n} for finitely many weights; every witness
/// must sit inside the unit ball (values <= the order unit).
WitnessSequence l1_witness(const std::vector<Rat>& weights,
                           const std::vector<WitnessSequence>& witnesses,
                           Index horizon = kDefaultHorizon);

/// Geometric weights first*ratio^(i-1) (i >= 1) against one repeated witness;
/// the series collapses to (sum of weights) * p_n exactly.
WitnessSequence l1_witness_geometric(const Rat& first, const Rat& ratio,
                                     const WitnessSequence& p, Index horizon = kDefaultHorizon);

/// Order limit construction (sequential order completeness, constructive):
/// requires an order-Cauchy verification, returns the pointwise limit with
/// membership verified and |S(n) - x| <= W(n) re-checked, or the escape
/// certificate.
struct ConstructLimitResult {
  std::optional<Element> limit;
  std::optional<Certificate> refutation;
  Verdict domination;  // the re-checked |S(n) - x| <= W(n)
};
ConstructLimitResult construct_limit(const ElementSequence& s, const WitnessSequence& w,
                                     Space space, Index horizon = kDefaultHorizon);

/// Canonical witness L - S(n) for a monotone-increasing family with
/// pointwise limit L (or S(n) - L for decreasing).
WitnessSequence canonical_deficiency_witness(const ElementSequence& s, const Element& limit);

/// Canonical order-Cauchy witness for an increasing family in a sequence
/// space whose pointwise limit may escape the space: bound * unit restricted
/// beyond an affine support cut. Returns nullopt when the shape is not
/// recognized.
std::optional<WitnessSequence> canonical_cauchy_witness(const ElementSequence& s,
                                                        const Rat& bound);

/// Exact sup-norm pattern n -> ||X - S(n)||_inf of the deficiency of a
/// monotone sequence-space family with a recognized truncation shape
/// (nullopt otherwise). The pattern's residue-class limits give the exact
/// infimum of the coordinate-evaluation oscillation envelope.
std::optional<ScalarPattern> envelope_norm_pattern(const ElementSequence& s);

struct IncreasingBoundedCheck {
  bool increasing = false;
  bool bounded = false;
  std::string detail;
};
/// Verifies "increasing and bounded by bound_multiple * unit" structurally
/// plus an exhaustive prefix.
IncreasingBoundedCheck check_increasing_bounded(const ElementSequence& s, const Rat& bound_multiple,
                                                Index horizon = kDefaultHorizon);

}  // namespace levilab

#endif  // LEVILAB_CONVERGENCE_HPP
