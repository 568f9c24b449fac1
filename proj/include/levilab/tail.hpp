#ifndef LEVILAB_TAIL_HPP
#define LEVILAB_TAIL_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "levilab/rational.hpp"
#include "levilab/residue.hpp"

namespace levilab {

/// One residue-class geometric term: contributes coeff * ratio^n at indices n
/// in the mask, 0 elsewhere. ratio in [0,1]; ratio == 1 is a constant on the
/// mask.
struct TailTerm {
  Rat coeff;
  Rat ratio;
  ResidueMask mask;

  TailTerm() = default;
  TailTerm(Rat c, Rat r, ResidueMask m) : coeff(std::move(c)), ratio(std::move(r)), mask(m) {
    if (ratio < 0 || ratio > 1) throw std::invalid_argument("TailTerm: ratio outside [0,1]");
  }

  Rat value_at(Index n) const {
    if (!mask.contains(n)) return Rat(0);
    if (ratio == 1) return coeff;
    return coeff * rat_pow(ratio, n);
  }

  bool operator==(const TailTerm&) const = default;
};

using TailList = std::vector<TailTerm>;

inline Rat tail_value_at(const TailList& terms, Index n) {
  Rat v(0);
  for (const auto& t : terms) v += t.value_at(n);
  return v;
}

inline Index tail_lcm_modulus(const TailList& terms) {
  Index l = 1;
  for (const auto& t : terms) l = std::lcm(l, t.mask.modulus);
  return l;
}

/// Canonical form: per ratio, expand masks to the joint modulus, merge equal
/// classes, then re-compress to the minimal modulus the coefficient pattern
/// factors through. Two term lists are pointwise-equal on every n >= 1 iff
/// their canonical forms are identical.
TailList tail_normalize(const TailList& terms);

inline TailList tail_scale(const Rat& alpha, TailList terms) {
  for (auto& t : terms) t.coeff *= alpha;
  return tail_normalize(terms);
}

inline TailList tail_concat(TailList a, const TailList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return tail_normalize(a);
}

/// Terms of `terms` restricted to one residue class (class modulus must be a
/// multiple of every term modulus it meets).
TailList tail_restrict_to_class(const TailList& terms, const ResidueMask& cls);

/// Eventual sign of a tail-pattern difference on one refined residue class.
struct ClassSign {
  ResidueMask cls;
  int sign = 0;            // sign of value(n) for every class member n >= stable_from
  Index stable_from = 0;   // some valid stabilization index (not necessarily minimal)
};

/// Eventual comparison of two tail patterns on a mask, refined per residue
/// class of the joint modulus. `uniform` is set when every class agrees, in
/// which case (sign, stable_from) is the spec-level answer.
struct EventualComparison {
  bool uniform = false;
  int sign = 0;
  Index stable_from = 0;
  std::vector<ClassSign> classes;
};

/// Decision core for all tail-pattern order checks. Aggregates coefficients
/// per ratio on each refined class and compares by descending ratio; a zero
/// aggregate falls through to the next ratio, an all-zero aggregate gives
/// sign 0.
EventualComparison eventual_compare(const TailList& a, const TailList& b,
                                    const ResidueMask& mask = ResidueMask::all());

/// Same, for a single pattern against zero.
inline EventualComparison eventual_sign(const TailList& a,
                                        const ResidueMask& mask = ResidueMask::all()) {
  return eventual_compare(a, TailList{}, mask);
}

}  // namespace levilab

#endif  // LEVILAB_TAIL_HPP
