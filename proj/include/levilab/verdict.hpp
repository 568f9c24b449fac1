#ifndef LEVILAB_VERDICT_HPP
#define LEVILAB_VERDICT_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levilab/element.hpp"

namespace levilab {

/// Domination |a_n - c| <= p_n failed at a concrete index; `where` localizes
/// the violating coordinate/abscissa for re-checking.
struct FailedDominationAt {
  Index n;
  std::string where;
  std::string lhs;
  std::string rhs;
};

struct NotDecreasingAt {
  Index n;
};

/// The pointwise infimum of the witness is positive somewhere.
struct PointwiseInfPositive {
  std::string coordinate;  // index for sequence spaces, abscissa range for PL
  Rat bound;
};

/// Membership refutation for any of the concrete spaces.
struct SpaceEscape {
  Space space;
  std::string reason;  // rendered from the membership/continuity certificate
};

struct LimitEscapesSpace {
  Element pointwise_limit;
  SpaceEscape why;
};

/// A family-envelope lower bound: any collective witness must dominate
/// `bound` at every index up to the horizon (and symbolically beyond).
struct EnvelopeLowerBound {
  Rat bound;
  Index at;
  std::string family;
};

/// No x in the domain grammar maps onto the required image.
struct NoPreimage {
  std::string reason;
};

using Certificate = std::variant<FailedDominationAt, NotDecreasingAt, PointwiseInfPositive,
                                 LimitEscapesSpace, EnvelopeLowerBound, NoPreimage>;

std::string certificate_str(const Certificate& c);

enum class VerdictState { Verified, Refuted, Inconclusive };

/// Outcome of a check. Verified carries a note on the symbolic argument used,
/// Refuted a re-checkable certificate, Inconclusive the horizon reached.
struct Verdict {
  VerdictState state = VerdictState::Inconclusive;
  std::optional<Certificate> certificate;
  std::string argument;  // for Verified: how the tail was discharged
  Index horizon = 0;

  bool verified() const { return state == VerdictState::Verified; }
  bool refuted() const { return state == VerdictState::Refuted; }
  bool inconclusive() const { return state == VerdictState::Inconclusive; }

  static Verdict verified_with(std::string how) {
    return {VerdictState::Verified, std::nullopt, std::move(how), 0};
  }
  static Verdict refuted_with(Certificate c) {
    return {VerdictState::Refuted, std::move(c), {}, 0};
  }
  static Verdict inconclusive_at(Index horizon) {
    return {VerdictState::Inconclusive, std::nullopt, {}, horizon};
  }
};

std::string verdict_state_str(VerdictState s);
std::string verdict_str(const Verdict& v);

}  // namespace levilab

#endif  // LEVILAB_VERDICT_HPP
