#ifndef LEVILAB_RATIONAL_HPP
#define LEVILAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace levilab {

/// Exact rational scalar. mpq_class keeps the canonical reduced form with a
/// positive denominator, which is exactly the invariant the grammar needs.
using Rat = mpq_class;

/// 1-based sequence index. Signed so affine cut rules (stride*n + offset) can
/// dip below 1 without wrapping.
using Index = std::int64_t;

/// Canonicalizing constructor: mpq_class(p, q) alone does not reduce.
inline Rat rat_make(long p, long q = 1) {
  Rat r(p, q);
  r.canonicalize();
  return r;
}

inline int rat_sign(const Rat& q) { return sgn(q); }

inline Rat rat_abs(const Rat& q) { return abs(q); }

inline Rat rat_min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

/// q^e for e >= 0 (q^0 = 1).
inline Rat rat_pow(const Rat& q, Index e) {
  if (e < 0) throw std::invalid_argument("rat_pow: negative exponent");
  if (e == 0) return Rat(1);
  if (e == 1) return q;
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rat(num, den);
}

/// Renders "p/q", or just "p" when q == 1. Bit-exact, used by all reports.
inline std::string rat_str(const Rat& q) { return q.get_str(); }

/// Parses "p/q" or "p". Returns nullopt on malformed input or zero denominator.
inline std::optional<Rat> rat_parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  for (char c : text)
    if (!(c == '-' || c == '/' || (c >= '0' && c <= '9'))) return std::nullopt;
  mpq_class q;
  if (q.set_str(text, 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return Rat(q);
}

/// Exact k-th root of a rational, if one exists (used to re-express
/// coefficient closed forms c*r^k at index j = stride*k + offset as tail
/// terms in j).
inline std::optional<Rat> rat_root(const Rat& q, Index k) {
  if (k <= 0) throw std::invalid_argument("rat_root: k must be positive");
  if (k == 1) return q;
  if (sgn(q) < 0) return std::nullopt;
  mpz_class num_root, den_root;
  if (!mpz_root(num_root.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(k)))
    return std::nullopt;
  if (!mpz_root(den_root.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(k)))
    return std::nullopt;
  return Rat(num_root, den_root);
}

}  // namespace levilab

#endif  // LEVILAB_RATIONAL_HPP
