#ifndef LEVILAB_SEQUENCE_HPP
#define LEVILAB_SEQUENCE_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levilab/verdict.hpp"

namespace levilab {

struct OperatorDesc;  // operators.hpp; sequence evaluation applies operators

class ElementSequence;
using FamilyPtr = std::shared_ptr<const ElementSequence>;

/// Exact scalar sequence in the index (overrides + residue-class geometric
/// tails); reuses the sequence-element grammar with the index playing n.
using ScalarPattern = SeqElement;

/// a_n = x for every n.
struct GenConstant {
  Element value;
};

/// a_n = the first n terms of the full tail element: sum over the first n
/// mask members j of term(j) * e_j. Increasing for nonnegative coefficients;
/// pointwise limit is the full tail element.
struct GenPrefixSum {
  TailTerm term;
};

/// a_n = sum_{k<=n} coeff*ratio_k^k at index stride*k+offset. Validated at
/// construction to re-express as a prefix sum in the target index (the
/// stride-th root of ratio_k must be rational).
struct GenScaledBasisSum {
  Rat coeff;
  Rat ratio_k;
  Index stride = 1;
  Index offset = 0;
  TailTerm as_term;  // derived
};

/// a_n = base restricted to indices > cut_stride*n + cut_offset.
struct GenTailTruncation {
  SeqElement base;
  Index cut_stride = 1;
  Index cut_offset = 0;
};

/// Continuous ramp family on [0,1]: level on [0, hi - width(n)], affine down
/// to 0 at hi, 0 after, with width(n) = width0 * width_ratio^n shrinking to
/// 0. The paper-relevant instance (level 1, hi 1/2, width(n) = 2^-n) is
/// phi_family(). Optionally embedded as (ramp, 0) in C[0,1] (+) L1.
struct GenRampFamily {
  Rat level = Rat(1);
  Rat hi = Rat(1, 2);
  Rat width0 = Rat(1);
  Rat width_ratio = Rat(1, 2);
  bool as_direct_sum = false;
};

/// a_n = alpha(n) * A(n) + beta(n) * B(n); B may be absent.
struct GenAffineCombo {
  ScalarPattern alpha;
  FamilyPtr a;
  ScalarPattern beta;
  FamilyPtr b;  // may be null
};

/// a_n = T(A(n)).
struct GenOperatorImage {
  std::shared_ptr<const OperatorDesc> op;
  FamilyPtr a;
};

/// a_n = sup(A(n), B(n)) — witness unions.
struct GenSup {
  FamilyPtr a, b;
};

/// a_n = |A(n)|.
struct GenAbs {
  FamilyPtr a;
};

/// a_n = sum_k pattern_k(n) * element_k; canonical finite-rank residual
/// witnesses live here.
struct GenPatternCombo {
  std::vector<std::pair<ScalarPattern, Element>> parts;
};

using Generator = std::variant<GenConstant, GenPrefixSum, GenScaledBasisSum, GenTailTruncation,
                               GenRampFamily, GenAffineCombo, GenOperatorImage, GenSup, GenAbs,
                               GenPatternCombo>;

struct IllFormedGrammar : std::runtime_error {
  explicit IllFormedGrammar(const std::string& what) : std::runtime_error(what) {}
};

/// An exactly evaluable N-indexed family of elements of one ambient space.
class ElementSequence {
 public:
  ElementSequence(Space space, Generator gen);

  Space space() const { return space_; }
  const Generator& gen() const { return gen_; }

  Element eval_at(Index n) const;

  // --- factories for the shapes the paper uses ---
  static ElementSequence constant(Space s, Element x);
  static ElementSequence prefix_sum(Space s, TailTerm term);
  static ElementSequence scaled_basis_sum(Space s, Rat coeff, Rat ratio_k, Index stride,
                                          Index offset);
  static ElementSequence tail_truncation(Space s, SeqElement base, Index cut_stride,
                                         Index cut_offset);
  /// The paper's continuous ramp family in C[0,1].
  static ElementSequence phi_family();
  /// The paper's (phi_n, 0) family in C[0,1] (+) L1.
  static ElementSequence phi_family_direct_sum();
  static ElementSequence ramp_family(Space s, GenRampFamily params);
  static ElementSequence affine_combo(Rat alpha, ElementSequence a, Rat beta, ElementSequence b);
  static ElementSequence scaled(Rat alpha, ElementSequence a);
  /// Scalar pattern coefficient (e.g. the (1+(-1)^n)/2 oscillation).
  static ElementSequence pattern_scaled(ScalarPattern alpha, ElementSequence a);
  static ElementSequence image(std::shared_ptr<const OperatorDesc> op, ElementSequence a);
  static ElementSequence sup_of(ElementSequence a, ElementSequence b);
  static ElementSequence abs_of(ElementSequence a);
  static ElementSequence pattern_combo(Space s,
                                       std::vector<std::pair<ScalarPattern, Element>> parts);

  bool equal_structure(const ElementSequence& other) const;

 private:
  Space space_;
  Generator gen_;
};

/// Witnesses share the sequence grammar; decreasing-null certification is a
/// checked property, not a type invariant.
using WitnessSequence = ElementSequence;

enum class Monotonicity { Increasing, Decreasing, Constant, Unknown };

/// Structural monotonicity, sound rules only (Unknown when unrecognized).
Monotonicity sequence_monotonicity(const ElementSequence& s);

struct PointwiseLimitResult {
  std::optional<Element> limit;     // ambient (pointwise / a.e.-pointwise) limit
  std::string error;                // set when a coordinate oscillates
};

struct NoStabilization : std::runtime_error {
  explicit NoStabilization(const std::string& what) : std::runtime_error(what) {}
};

/// Coordinatewise limit in the ambient grammar (total for all generators
/// except pattern combos with disagreeing residue-class limits).
PointwiseLimitResult pointwise_limit(const ElementSequence& s);

/// Membership of an element in a space; nullopt means verified.
std::optional<SpaceEscape> space_escape(const Element& x, Space s);

/// Shift the scalar pattern: result(n) = x(n + k).
SeqElement seq_shift(const SeqElement& x, Index k);

/// Exact c-limit of S(m), as a scalar pattern in m. Defined for the raw
/// catalog generator shapes; throws IllFormedGrammar otherwise.
ScalarPattern c_limit_pattern(const ElementSequence& s);

std::string sequence_str(const ElementSequence& s);

}  // namespace levilab

#endif  // LEVILAB_SEQUENCE_HPP
