#ifndef LEVILAB_PL_FUNCTION_HPP
#define LEVILAB_PL_FUNCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "levilab/rational.hpp"

namespace levilab {

/// A discontinuity record: at `at`, the left limit, right limit and the
/// stored point value (continuity needs all three equal; at 0 and 1 the
/// missing one-sided limit is reported equal to the point value).
struct PLJump {
  Rat at;
  Rat left;
  Rat right;
  Rat point;
};

/// Piecewise-affine (possibly discontinuous) function on [0,1] with rational
/// breakpoints and explicit point values at breakpoints. One representation
/// serves both C[0,1] (everywhere order, point values count) and L1 (a.e.
/// order, point values ignored). Canonical after construction: redundant
/// breakpoints are merged, so operator== is semantic equality (everywhere).
class PLFunction {
 public:
  struct Piece {
    Rat slope;
    Rat intercept;
    Rat at(const Rat& x) const { return slope * x + intercept; }
    bool operator==(const Piece&) const = default;
  };

  /// breakpoints strictly increasing, breakpoints.front()==0, back()==1;
  /// pieces.size()+1 == breakpoints.size() == point_values.size().
  PLFunction(std::vector<Rat> breakpoints, std::vector<Piece> pieces,
             std::vector<Rat> point_values);

  static PLFunction constant(const Rat& c);
  static PLFunction zero() { return constant(Rat(0)); }
  static PLFunction one() { return constant(Rat(1)); }
  /// x -> slope*x + intercept on all of [0,1], continuous.
  static PLFunction affine(const Rat& slope, const Rat& intercept);
  /// level on [0, hi-width], affine down to 0 at hi, 0 after; continuous.
  /// Degenerate width (hi-width <= 0) ramps from the left endpoint.
  static PLFunction ramp(const Rat& level, const Rat& hi, const Rat& width);
  /// level on [0, at), 0 on [at, 1]; value `at_value` at the jump.
  static PLFunction step(const Rat& level, const Rat& at, const Rat& at_value);

  Rat value_at(const Rat& x) const;  // exact; breakpoints yield point values
  Rat left_limit_at(size_t bp) const;
  Rat right_limit_at(size_t bp) const;

  const std::vector<Rat>& breakpoints() const { return breaks_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Rat>& point_values() const { return values_; }

  bool operator==(const PLFunction&) const = default;

  /// a.e. equality: same pieces after refinement, point values ignored.
  bool ae_equal(const PLFunction& other) const;
  bool ae_zero() const;

  std::string str() const;

 private:
  std::vector<Rat> breaks_;
  std::vector<Piece> pieces_;
  std::vector<Rat> values_;

  void canonicalize();
};

enum class PLOrderMode { Everywhere, AlmostEverywhere };

PLFunction pl_add(const PLFunction& f, const PLFunction& g);
PLFunction pl_scale(const Rat& alpha, const PLFunction& f);
PLFunction pl_sup(const PLFunction& f, const PLFunction& g);
PLFunction pl_inf(const PLFunction& f, const PLFunction& g);
inline PLFunction pl_sub(const PLFunction& f, const PLFunction& g) {
  return pl_add(f, pl_scale(Rat(-1), g));
}
inline PLFunction pl_abs(const PLFunction& f) { return pl_sup(f, pl_scale(Rat(-1), f)); }

enum class PLCombineKind { Add, Sup, Inf };
PLFunction pl_combine(const PLFunction& f, const PLFunction& g, PLCombineKind kind);

bool pl_leq(const PLFunction& f, const PLFunction& g, PLOrderMode mode);

/// Exact integral over [0,1]; point values never contribute.
Rat pl_integral(const PLFunction& f);

/// Empty list means continuous.
std::vector<PLJump> pl_jumps(const PLFunction& f);
inline bool pl_continuous(const PLFunction& f) { return pl_jumps(f).empty(); }

Rat pl_sup_norm(const PLFunction& f);

}  // namespace levilab

#endif  // LEVILAB_PL_FUNCTION_HPP
