#ifndef LEVILAB_ELEMENT_HPP
#define LEVILAB_ELEMENT_HPP

#include <string>
#include <variant>

#include "levilab/pl_function.hpp"
#include "levilab/seq_element.hpp"

namespace levilab {

/// Element of C[0,1] (+) L1[0,1]: cpart carries the everywhere order, lpart
/// the a.e. order. Continuity of cpart is a checked membership condition,
/// not an invariant.
struct DirectSumElement {
  PLFunction cpart;
  PLFunction lpart;
  bool operator==(const DirectSumElement&) const = default;
};

/// The six concrete representable lattices plus the reals.
enum class Space { Real, C00, C0, C, LInf, C01, L1, CSumL1 };

std::string space_name(Space s);
bool space_is_sequence(Space s);
SeqSpace space_seq_tag(Space s);

struct DomainMismatch : std::runtime_error {
  explicit DomainMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// A value from whichever concrete lattice is ambient. Operations are
/// pointwise and exact; ordering needs the ambient space (everywhere vs
/// a.e. for PL roles).
using Element = std::variant<Rat, SeqElement, PLFunction, DirectSumElement>;

Element el_zero(Space s);
Element el_unit(Space s);  // the order unit: 1, ones(), constant-1 function

Element el_add(const Element& a, const Element& b);
Element el_scale(const Rat& alpha, const Element& a);
Element el_sup(const Element& a, const Element& b);
Element el_inf(const Element& a, const Element& b);
Element el_abs(const Element& a);
inline Element el_sub(const Element& a, const Element& b) {
  return el_add(a, el_scale(Rat(-1), b));
}

bool el_leq(const Element& a, const Element& b, Space s);
bool el_eq(const Element& a, const Element& b, Space s);  // a.e. for L1/lpart
bool el_is_zero(const Element& a, Space s);

/// Exact sup norm where defined for the space (sequence spaces, C01, Real).
Rat el_sup_norm(const Element& a);

std::string el_str(const Element& a);

}  // namespace levilab

#endif  // LEVILAB_ELEMENT_HPP
