#ifndef LEVILAB_RESIDUE_HPP
#define LEVILAB_RESIDUE_HPP

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "levilab/rational.hpp"

namespace levilab {

/// Residue class of 1-based indices: {n >= 1 : n = residue (mod modulus)}.
/// modulus >= 1, 0 <= residue < modulus. (1,0) is the all-indices mask.
struct ResidueMask {
  Index modulus = 1;
  Index residue = 0;

  ResidueMask() = default;
  ResidueMask(Index m, Index s) : modulus(m), residue(s) {
    if (m < 1) throw std::invalid_argument("ResidueMask: modulus must be >= 1");
    if (s < 0 || s >= m) throw std::invalid_argument("ResidueMask: residue out of range");
  }

  static ResidueMask all() { return ResidueMask(1, 0); }
  static ResidueMask odd() { return ResidueMask(2, 1); }
  static ResidueMask even() { return ResidueMask(2, 0); }

  bool contains(Index n) const { return n >= 1 && (n % modulus + modulus) % modulus == residue; }

  /// Smallest member (>= 1) of the class.
  Index first() const { return residue >= 1 ? residue : modulus; }

  /// k-th member (1-based): first() + (k-1)*modulus.
  Index nth(Index k) const { return first() + (k - 1) * modulus; }

  /// Number of members <= n (0 when n < first()).
  Index count_upto(Index n) const {
    if (n < first()) return 0;
    return (n - first()) / modulus + 1;
  }

  /// Smallest member strictly greater than n.
  Index next_after(Index n) const {
    if (n < first()) return first();
    return first() + ((n - first()) / modulus + 1) * modulus;
  }

  bool operator==(const ResidueMask&) const = default;
  auto operator<=>(const ResidueMask&) const = default;

  std::string str() const { return std::to_string(modulus) + ":" + std::to_string(residue); }
};

/// CRT intersection of two classes; nullopt when disjoint. Moduli stay small
/// in the grammar, so plain lcm enumeration is fine.
inline std::optional<ResidueMask> mask_intersect(const ResidueMask& a, const ResidueMask& b) {
  const Index g = std::gcd(a.modulus, b.modulus);
  if ((a.residue - b.residue) % g != 0) return std::nullopt;
  const Index l = std::lcm(a.modulus, b.modulus);
  // Find the unique residue mod l lying in both classes.
  for (Index r = a.residue; r < l + a.residue; r += a.modulus) {
    const Index rr = r % l;
    if ((rr - b.residue) % b.modulus == 0) return ResidueMask(l, rr);
  }
  return std::nullopt;  // unreachable
}

inline bool mask_subset(const ResidueMask& inner, const ResidueMask& outer) {
  return inner.modulus % outer.modulus == 0 &&
         (inner.residue - outer.residue) % outer.modulus == 0;
}

}  // namespace levilab

#endif  // LEVILAB_RESIDUE_HPP
