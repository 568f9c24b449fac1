#ifndef LEVILAB_SEQ_ELEMENT_HPP
#define LEVILAB_SEQ_ELEMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levilab/tail.hpp"

namespace levilab {

/// Which sequence lattice an element is claimed to inhabit. Tags are checked
/// by seq_membership, never assumed.
enum class SeqSpace { C00, C0, C, LInf };

std::string seq_space_name(SeqSpace tag);

/// Residue-class limit data: the value sequence on one class converges to
/// `limit` (the ratio-1 aggregate; every ratio < 1 contribution vanishes).
struct ClassLimit {
  ResidueMask cls;
  Rat limit;
};

/// Why a membership claim fails.
struct DistinctClassLimits {
  ClassLimit a, b;
};
struct NonvanishingLimit {
  ClassLimit at;
};
struct EventuallyNonzero {  // C00 refutation: a tail class that never dies
  ResidueMask cls;
  Index witness_index;  // concrete index with nonzero value
  Rat witness_value;
};
using SeqMembershipRefutation =
    std::variant<DistinctClassLimits, NonvanishingLimit, EventuallyNonzero>;

struct SeqMembership {
  bool verified = false;
  std::optional<SeqMembershipRefutation> refutation;
};

/// Exact element of a sequence lattice: finitely many explicit values below
/// `start`, residue-class geometric tail terms from `start` on. Canonical
/// after every constructor/operation, so operator== is semantic equality.
class SeqElement {
 public:
  SeqElement() = default;
  SeqElement(Index start, std::map<Index, Rat> overrides, TailList tail);

  static SeqElement zero() { return SeqElement(); }
  /// e_j (1-based).
  static SeqElement unit(Index j, const Rat& value = Rat(1));
  /// The order unit: constant 1 at every index.
  static SeqElement ones();
  static SeqElement constant(const Rat& c);
  /// coeff * ratio^n on the mask, from index 1.
  static SeqElement geometric(const Rat& coeff, const Rat& ratio,
                              const ResidueMask& mask = ResidueMask::all());
  static SeqElement from_tail(TailList tail) { return SeqElement(1, {}, std::move(tail)); }

  Rat value_at(Index n) const;
  Index start() const { return start_; }
  const std::map<Index, Rat>& overrides() const { return overrides_; }
  const TailList& tail() const { return tail_; }
  bool is_zero() const { return start_ == 1 && overrides_.empty() && tail_.empty(); }
  bool finitely_supported() const { return tail_.empty(); }

  bool operator==(const SeqElement&) const = default;

  std::string str() const;

 private:
  Index start_ = 1;
  std::map<Index, Rat> overrides_;  // keys < start_, values nonzero
  TailList tail_;                   // canonical; applies at n >= start_

  void canonicalize();
};

SeqElement seq_add(const SeqElement& x, const SeqElement& y);
SeqElement seq_scale(const Rat& alpha, const SeqElement& x);
SeqElement seq_sup(const SeqElement& x, const SeqElement& y);
SeqElement seq_inf(const SeqElement& x, const SeqElement& y);
inline SeqElement seq_sub(const SeqElement& x, const SeqElement& y) {
  return seq_add(x, seq_scale(Rat(-1), y));
}
/// Pointwise product; ratio products stay in [0,1], so the grammar is closed
/// (diagonal operator application reduces to this).
SeqElement seq_mul(const SeqElement& x, const SeqElement& y);
inline SeqElement seq_abs(const SeqElement& x) { return seq_sup(x, seq_scale(Rat(-1), x)); }

enum class CombineKind { Add, Sup, Inf };
SeqElement seq_combine(const SeqElement& x, const SeqElement& y, CombineKind kind);

/// x(n) <= y(n) for every n >= 1. Overrides are checked exhaustively, tails
/// per refined residue class via eventual_compare plus the finite range up to
/// each stabilization index.
bool seq_leq(const SeqElement& x, const SeqElement& y);

/// Keep only indices strictly greater than cut.
SeqElement seq_restrict_above(const SeqElement& x, Index cut);

/// Keep only indices in the mask.
SeqElement seq_restrict_mask(const SeqElement& x, const ResidueMask& mask);

/// Per-residue-class limits of the value sequence, over the joint tail
/// modulus (overrides never affect limits).
std::vector<ClassLimit> seq_class_limits(const SeqElement& x);

SeqMembership seq_membership(const SeqElement& x, SeqSpace tag);

struct NotInC : std::runtime_error {
  NotInC() : std::runtime_error("element is not in c: no common limit") {}
};

/// Common limit of a c-member; throws NotInC if membership fails.
Rat seq_limit(const SeqElement& x);

/// Exact sup norm. Requires every refined tail class to aggregate
/// coefficients of one sign (then the class value sequence is monotone in
/// absolute value and the sup sits at the first class index or the limit).
struct UnsupportedNorm : std::runtime_error {
  UnsupportedNorm() : std::runtime_error("sup norm: mixed-sign tail class unsupported") {}
};
Rat seq_sup_norm(const SeqElement& x);

/// Sum over all n of w(n) * x(n); every joint ratio must be < 1.
struct NotSummable : std::runtime_error {
  NotSummable() : std::runtime_error("dot sum diverges: joint ratio 1 term") {}
};
Rat seq_dot_sum(const SeqElement& w, const SeqElement& x);

/// Sum over all n of |x(n)| (exact); throws NotSummable on ratio-1 tails.
Rat seq_abs_sum(const SeqElement& x);

}  // namespace levilab

#endif  // LEVILAB_SEQ_ELEMENT_HPP
