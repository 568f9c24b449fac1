#include "levilab/element.hpp"

namespace levilab {

std::string space_name(Space s) {
  switch (s) {
    case Space::Real: return "real";
    case Space::C00: return "c00";
    case Space::C0: return "c0";
    case Space::C: return "c";
    case Space::LInf: return "linf";
    case Space::C01: return "C01";
    case Space::L1: return "L1";
    case Space::CSumL1: return "CsumL1";
  }
  return "?";
}

bool space_is_sequence(Space s) {
  return s == Space::C00 || s == Space::C0 || s == Space::C || s == Space::LInf;
}

SeqSpace space_seq_tag(Space s) {
  switch (s) {
    case Space::C00: return SeqSpace::C00;
    case Space::C0: return SeqSpace::C0;
    case Space::C: return SeqSpace::C;
    case Space::LInf: return SeqSpace::LInf;
    default: throw DomainMismatch("not a sequence space: " + space_name(s));
  }
}

Element el_zero(Space s) {
  switch (s) {
    case Space::Real: return Rat(0);
    case Space::C00:
    case Space::C0:
    case Space::C:
    case Space::LInf: return SeqElement::zero();
    case Space::C01:
    case Space::L1: return PLFunction::zero();
    case Space::CSumL1: return DirectSumElement{PLFunction::zero(), PLFunction::zero()};
  }
  throw std::logic_error("el_zero");
}

Element el_unit(Space s) {
  switch (s) {
    case Space::Real: return Rat(1);
    case Space::C00:
    case Space::C0:
    case Space::C:
    case Space::LInf: return SeqElement::ones();
    case Space::C01:
    case Space::L1: return PLFunction::one();
    case Space::CSumL1: return DirectSumElement{PLFunction::one(), PLFunction::one()};
  }
  throw std::logic_error("el_unit");
}

namespace {

template <typename FRat, typename FSeq, typename FPl, typename FSum>
Element zip(const Element& a, const Element& b, FRat frat, FSeq fseq, FPl fpl, FSum fsum) {
  if (a.index() != b.index()) throw DomainMismatch("elements from different lattices");
  if (std::holds_alternative<Rat>(a)) return frat(std::get<Rat>(a), std::get<Rat>(b));
  if (std::holds_alternative<SeqElement>(a))
    return fseq(std::get<SeqElement>(a), std::get<SeqElement>(b));
  if (std::holds_alternative<PLFunction>(a))
    return fpl(std::get<PLFunction>(a), std::get<PLFunction>(b));
  return fsum(std::get<DirectSumElement>(a), std::get<DirectSumElement>(b));
}

}  // namespace

Element el_add(const Element& a, const Element& b) {
  return zip(
      a, b, [](const Rat& x, const Rat& y) { return Element(x + y); },
      [](const SeqElement& x, const SeqElement& y) { return Element(seq_add(x, y)); },
      [](const PLFunction& x, const PLFunction& y) { return Element(pl_add(x, y)); },
      [](const DirectSumElement& x, const DirectSumElement& y) {
        return Element(DirectSumElement{pl_add(x.cpart, y.cpart), pl_add(x.lpart, y.lpart)});
      });
}

Element el_scale(const Rat& alpha, const Element& a) {
  if (std::holds_alternative<Rat>(a)) return alpha * std::get<Rat>(a);
  if (std::holds_alternative<SeqElement>(a)) return seq_scale(alpha, std::get<SeqElement>(a));
  if (std::holds_alternative<PLFunction>(a)) return pl_scale(alpha, std::get<PLFunction>(a));
  const auto& d = std::get<DirectSumElement>(a);
  return DirectSumElement{pl_scale(alpha, d.cpart), pl_scale(alpha, d.lpart)};
}

Element el_sup(const Element& a, const Element& b) {
  return zip(
      a, b, [](const Rat& x, const Rat& y) { return Element(rat_max(x, y)); },
      [](const SeqElement& x, const SeqElement& y) { return Element(seq_sup(x, y)); },
      [](const PLFunction& x, const PLFunction& y) { return Element(pl_sup(x, y)); },
      [](const DirectSumElement& x, const DirectSumElement& y) {
        return Element(DirectSumElement{pl_sup(x.cpart, y.cpart), pl_sup(x.lpart, y.lpart)});
      });
}

Element el_inf(const Element& a, const Element& b) {
  return zip(
      a, b, [](const Rat& x, const Rat& y) { return Element(rat_min(x, y)); },
      [](const SeqElement& x, const SeqElement& y) { return Element(seq_inf(x, y)); },
      [](const PLFunction& x, const PLFunction& y) { return Element(pl_inf(x, y)); },
      [](const DirectSumElement& x, const DirectSumElement& y) {
        return Element(DirectSumElement{pl_inf(x.cpart, y.cpart), pl_inf(x.lpart, y.lpart)});
      });
}

Element el_abs(const Element& a) { return el_sup(a, el_scale(Rat(-1), a)); }

bool el_leq(const Element& a, const Element& b, Space s) {
  if (a.index() != b.index()) throw DomainMismatch("elements from different lattices");
  switch (s) {
    case Space::Real: return std::get<Rat>(a) <= std::get<Rat>(b);
    case Space::C00:
    case Space::C0:
    case Space::C:
    case Space::LInf: return seq_leq(std::get<SeqElement>(a), std::get<SeqElement>(b));
    case Space::C01:
      return pl_leq(std::get<PLFunction>(a), std::get<PLFunction>(b), PLOrderMode::Everywhere);
    case Space::L1:
      return pl_leq(std::get<PLFunction>(a), std::get<PLFunction>(b), PLOrderMode::AlmostEverywhere);
    case Space::CSumL1: {
      const auto& x = std::get<DirectSumElement>(a);
      const auto& y = std::get<DirectSumElement>(b);
      return pl_leq(x.cpart, y.cpart, PLOrderMode::Everywhere) &&
             pl_leq(x.lpart, y.lpart, PLOrderMode::AlmostEverywhere);
    }
  }
  throw std::logic_error("el_leq");
}

bool el_is_zero(const Element& a, Space s) {
  switch (s) {
    case Space::Real: return std::get<Rat>(a) == 0;
    case Space::C00:
    case Space::C0:
    case Space::C:
    case Space::LInf: return std::get<SeqElement>(a).is_zero();
    case Space::C01: return std::get<PLFunction>(a) == PLFunction::zero();
    case Space::L1: return std::get<PLFunction>(a).ae_zero();
    case Space::CSumL1: {
      const auto& d = std::get<DirectSumElement>(a);
      return d.cpart == PLFunction::zero() && d.lpart.ae_zero();
    }
  }
  throw std::logic_error("el_is_zero");
}

bool el_eq(const Element& a, const Element& b, Space s) { return el_is_zero(el_sub(a, b), s); }

Rat el_sup_norm(const Element& a) {
  if (std::holds_alternative<Rat>(a)) return rat_abs(std::get<Rat>(a));
  if (std::holds_alternative<SeqElement>(a)) return seq_sup_norm(std::get<SeqElement>(a));
  if (std::holds_alternative<PLFunction>(a)) return pl_sup_norm(std::get<PLFunction>(a));
  const auto& d = std::get<DirectSumElement>(a);
  return rat_max(pl_sup_norm(d.cpart), pl_sup_norm(d.lpart));
}

std::string el_str(const Element& a) {
  if (std::holds_alternative<Rat>(a)) return rat_str(std::get<Rat>(a));
  if (std::holds_alternative<SeqElement>(a)) return std::get<SeqElement>(a).str();
  if (std::holds_alternative<PLFunction>(a)) return std::get<PLFunction>(a).str();
  const auto& d = std::get<DirectSumElement>(a);
  return "(" + d.cpart.str() + ", " + d.lpart.str() + ")";
}

}  // namespace levilab
