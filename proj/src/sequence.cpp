#include "levilab/sequence.hpp"

#include <sstream>

#include "levilab/operators.hpp"

namespace levilab {

namespace {

// Explicit prefix of x: indices <= cut stay, everything later is dropped.
SeqElement seq_restrict_upto(const SeqElement& x, Index cut) {
  if (cut < 1) return SeqElement::zero();
  std::map<Index, Rat> ov;
  for (Index j = 1; j <= cut; ++j) {
    Rat v = x.value_at(j);
    if (v != 0) ov[j] = std::move(v);
  }
  return SeqElement(cut + 1, std::move(ov), {});
}

const SeqElement& expect_seq(const Element& e) {
  if (!std::holds_alternative<SeqElement>(e))
    throw DomainMismatch("expected a sequence-lattice element");
  return std::get<SeqElement>(e);
}

}  // namespace

ElementSequence::ElementSequence(Space space, Generator gen)
    : space_(space), gen_(std::move(gen)) {}

ElementSequence ElementSequence::constant(Space s, Element x) {
  return ElementSequence(s, GenConstant{std::move(x)});
}

ElementSequence ElementSequence::prefix_sum(Space s, TailTerm term) {
  if (!space_is_sequence(s)) throw IllFormedGrammar("prefix_sum needs a sequence space");
  return ElementSequence(s, GenPrefixSum{std::move(term)});
}

ElementSequence ElementSequence::scaled_basis_sum(Space s, Rat coeff, Rat ratio_k, Index stride,
                                                  Index offset) {
  if (!space_is_sequence(s)) throw IllFormedGrammar("scaled_basis_sum needs a sequence space");
  if (stride < 1) throw IllFormedGrammar("scaled_basis_sum: stride must be >= 1");
  if (ratio_k < 0 || ratio_k > 1) throw IllFormedGrammar("scaled_basis_sum: ratio outside [0,1]");
  if (stride * 1 + offset < 1) throw IllFormedGrammar("scaled_basis_sum: first index below 1");
  // c * r^k at j = stride*k + offset equals (c * r^(-offset/stride)) * p^j
  // with p = r^(1/stride); require the rational root.
  const auto root = rat_root(ratio_k, stride);
  if (!root) throw IllFormedGrammar("scaled_basis_sum: ratio has no rational stride-th root");
  const Rat p = *root;
  // coefficient C with C * p^j = c * r^k: C = c * p^(-offset); p > 0 needed
  // for the inverse power (r == 0 collapses to the zero family).
  GenScaledBasisSum g{coeff, ratio_k, stride, offset, TailTerm()};
  if (ratio_k == 0 || coeff == 0) {
    g.as_term = TailTerm(Rat(0), Rat(0), ResidueMask::all());
  } else {
    Rat c_adj = coeff;
    if (offset >= 0) {
      const Rat pow_off = rat_pow(p, offset);
      if (pow_off == 0) throw IllFormedGrammar("scaled_basis_sum: degenerate ratio");
      c_adj = coeff / pow_off;
    } else {
      c_adj = coeff * rat_pow(p, -offset);
    }
    const Index m = stride;
    const Index r = ((offset % m) + m) % m;
    g.as_term = TailTerm(c_adj, p, ResidueMask(m, r));
  }
  return ElementSequence(s, std::move(g));
}

ElementSequence ElementSequence::tail_truncation(Space s, SeqElement base, Index cut_stride,
                                                 Index cut_offset) {
  if (!space_is_sequence(s)) throw IllFormedGrammar("tail_truncation needs a sequence space");
  if (cut_stride < 0) throw IllFormedGrammar("tail_truncation: cut stride must be >= 0");
  return ElementSequence(s, GenTailTruncation{std::move(base), cut_stride, cut_offset});
}

ElementSequence ElementSequence::phi_family() {
  return ElementSequence(Space::C01, GenRampFamily{});
}

ElementSequence ElementSequence::phi_family_direct_sum() {
  GenRampFamily g;
  g.as_direct_sum = true;
  return ElementSequence(Space::CSumL1, std::move(g));
}

ElementSequence ElementSequence::ramp_family(Space s, GenRampFamily params) {
  if (params.width_ratio <= 0 || params.width_ratio >= 1)
    throw IllFormedGrammar("ramp_family: width ratio must be in (0,1)");
  if (params.width0 <= 0) throw IllFormedGrammar("ramp_family: width must be positive");
  if (!(params.hi > 0 && params.hi < 1)) throw IllFormedGrammar("ramp_family: hi outside (0,1)");
  if (params.as_direct_sum && s != Space::CSumL1)
    throw IllFormedGrammar("ramp_family: direct-sum embedding needs CsumL1");
  if (!params.as_direct_sum && s != Space::C01 && s != Space::L1)
    throw IllFormedGrammar("ramp_family: PL space required");
  return ElementSequence(s, std::move(params));
}

ElementSequence ElementSequence::affine_combo(Rat alpha, ElementSequence a, Rat beta,
                                              ElementSequence b) {
  if (a.space() != b.space()) throw DomainMismatch("affine_combo: mixed ambient spaces");
  const Space s = a.space();
  return ElementSequence(
      s, GenAffineCombo{ScalarPattern::constant(alpha),
                        std::make_shared<const ElementSequence>(std::move(a)),
                        ScalarPattern::constant(beta),
                        std::make_shared<const ElementSequence>(std::move(b))});
}

ElementSequence ElementSequence::scaled(Rat alpha, ElementSequence a) {
  const Space s = a.space();
  return ElementSequence(s,
                         GenAffineCombo{ScalarPattern::constant(alpha),
                                        std::make_shared<const ElementSequence>(std::move(a)),
                                        ScalarPattern::zero(), nullptr});
}

ElementSequence ElementSequence::pattern_scaled(ScalarPattern alpha, ElementSequence a) {
  const Space s = a.space();
  return ElementSequence(s,
                         GenAffineCombo{std::move(alpha),
                                        std::make_shared<const ElementSequence>(std::move(a)),
                                        ScalarPattern::zero(), nullptr});
}

ElementSequence ElementSequence::image(OpPtr op, ElementSequence a) {
  if (!op) throw std::invalid_argument("image: null operator");
  if (op->domain != a.space()) throw DomainMismatch("image: sequence not in operator domain");
  const Space cod = op->codomain;
  return ElementSequence(cod, GenOperatorImage{std::move(op),
                                               std::make_shared<const ElementSequence>(std::move(a))});
}

ElementSequence ElementSequence::sup_of(ElementSequence a, ElementSequence b) {
  if (a.space() != b.space()) throw DomainMismatch("sup_of: mixed ambient spaces");
  const Space s = a.space();
  return ElementSequence(s, GenSup{std::make_shared<const ElementSequence>(std::move(a)),
                                   std::make_shared<const ElementSequence>(std::move(b))});
}

ElementSequence ElementSequence::abs_of(ElementSequence a) {
  const Space s = a.space();
  return ElementSequence(s, GenAbs{std::make_shared<const ElementSequence>(std::move(a))});
}

ElementSequence ElementSequence::pattern_combo(Space s,
                                               std::vector<std::pair<ScalarPattern, Element>> parts) {
  return ElementSequence(s, GenPatternCombo{std::move(parts)});
}

Element ElementSequence::eval_at(Index n) const {
  if (n < 1) throw std::invalid_argument("eval_at: index must be >= 1");
  if (const auto* g = std::get_if<GenConstant>(&gen_)) return g->value;
  if (const auto* g = std::get_if<GenPrefixSum>(&gen_)) {
    const SeqElement full = SeqElement::from_tail({g->term});
    return seq_restrict_upto(full, g->term.mask.nth(n));
  }
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen_)) {
    const SeqElement full = SeqElement::from_tail({g->as_term});
    return seq_restrict_upto(full, g->as_term.mask.nth(n));
  }
  if (const auto* g = std::get_if<GenTailTruncation>(&gen_))
    return seq_restrict_above(g->base, g->cut_stride * n + g->cut_offset);
  if (const auto* g = std::get_if<GenRampFamily>(&gen_)) {
    const Rat width = g->width0 * rat_pow(g->width_ratio, n);
    PLFunction ramp = PLFunction::ramp(g->level, g->hi, width);
    if (g->as_direct_sum) return DirectSumElement{std::move(ramp), PLFunction::zero()};
    return ramp;
  }
  if (const auto* g = std::get_if<GenAffineCombo>(&gen_)) {
    Element out = el_scale(g->alpha.value_at(n), g->a->eval_at(n));
    if (g->b) out = el_add(out, el_scale(g->beta.value_at(n), g->b->eval_at(n)));
    return out;
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen_))
    return op_apply(*g->op, g->a->eval_at(n));
  if (const auto* g = std::get_if<GenSup>(&gen_))
    return el_sup(g->a->eval_at(n), g->b->eval_at(n));
  if (const auto* g = std::get_if<GenAbs>(&gen_)) return el_abs(g->a->eval_at(n));
  if (const auto* g = std::get_if<GenPatternCombo>(&gen_)) {
    Element out = el_zero(space_);
    for (const auto& [pat, elem] : g->parts) out = el_add(out, el_scale(pat.value_at(n), elem));
    return out;
  }
  throw std::logic_error("eval_at: bad generator");
}

bool ElementSequence::equal_structure(const ElementSequence& other) const {
  if (space_ != other.space_ || gen_.index() != other.gen_.index()) return false;
  if (const auto* g = std::get_if<GenConstant>(&gen_))
    return std::get<GenConstant>(other.gen_).value == g->value;
  if (const auto* g = std::get_if<GenPrefixSum>(&gen_))
    return std::get<GenPrefixSum>(other.gen_).term == g->term;
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen_))
    return std::get<GenScaledBasisSum>(other.gen_).as_term == g->as_term;
  if (const auto* g = std::get_if<GenTailTruncation>(&gen_)) {
    const auto& o = std::get<GenTailTruncation>(other.gen_);
    return o.base == g->base && o.cut_stride == g->cut_stride && o.cut_offset == g->cut_offset;
  }
  if (const auto* g = std::get_if<GenRampFamily>(&gen_)) {
    const auto& o = std::get<GenRampFamily>(other.gen_);
    return o.level == g->level && o.hi == g->hi && o.width0 == g->width0 &&
           o.width_ratio == g->width_ratio && o.as_direct_sum == g->as_direct_sum;
  }
  if (const auto* g = std::get_if<GenAffineCombo>(&gen_)) {
    const auto& o = std::get<GenAffineCombo>(other.gen_);
    if (!(o.alpha == g->alpha && o.beta == g->beta)) return false;
    if (static_cast<bool>(o.b) != static_cast<bool>(g->b)) return false;
    if (!g->a->equal_structure(*o.a)) return false;
    return !g->b || g->b->equal_structure(*o.b);
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen_)) {
    const auto& o = std::get<GenOperatorImage>(other.gen_);
    return g->op == o.op && g->a->equal_structure(*o.a);  // same operator object
  }
  if (const auto* g = std::get_if<GenSup>(&gen_)) {
    const auto& o = std::get<GenSup>(other.gen_);
    return g->a->equal_structure(*o.a) && g->b->equal_structure(*o.b);
  }
  if (const auto* g = std::get_if<GenAbs>(&gen_))
    return g->a->equal_structure(*std::get<GenAbs>(other.gen_).a);
  if (const auto* g = std::get_if<GenPatternCombo>(&gen_)) {
    const auto& o = std::get<GenPatternCombo>(other.gen_);
    return g->parts == o.parts;
  }
  return false;
}

Monotonicity sequence_monotonicity(const ElementSequence& s) {
  const auto& gen = s.gen();
  if (std::holds_alternative<GenConstant>(gen)) return Monotonicity::Constant;
  if (const auto* g = std::get_if<GenPrefixSum>(&gen)) {
    const int sign = rat_sign(g->term.coeff);
    if (sign > 0) return Monotonicity::Increasing;
    if (sign < 0) return Monotonicity::Decreasing;
    return Monotonicity::Constant;
  }
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen)) {
    const int sign = rat_sign(g->as_term.coeff);
    if (sign > 0) return Monotonicity::Increasing;
    if (sign < 0) return Monotonicity::Decreasing;
    return Monotonicity::Constant;
  }
  if (const auto* g = std::get_if<GenTailTruncation>(&gen)) {
    if (g->cut_stride == 0) return Monotonicity::Constant;
    if (seq_leq(SeqElement::zero(), g->base)) return Monotonicity::Decreasing;
    if (seq_leq(g->base, SeqElement::zero())) return Monotonicity::Increasing;
    return Monotonicity::Unknown;
  }
  if (const auto* g = std::get_if<GenRampFamily>(&gen))
    return rat_sign(g->level) >= 0 ? Monotonicity::Increasing : Monotonicity::Decreasing;
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    // Constant scalars only.
    const auto constant_of = [](const ScalarPattern& p) -> std::optional<Rat> {
      if (p.is_zero()) return Rat(0);
      if (p.overrides().empty() && p.tail().size() == 1 && p.tail()[0].ratio == 1 &&
          p.tail()[0].mask == ResidueMask::all())
        return p.tail()[0].coeff;
      return std::nullopt;
    };
    const auto flip = [](Monotonicity m) {
      if (m == Monotonicity::Increasing) return Monotonicity::Decreasing;
      if (m == Monotonicity::Decreasing) return Monotonicity::Increasing;
      return m;
    };
    const auto alpha = constant_of(g->alpha);
    if (!alpha) {
      // Pattern-scaled constant families inherit the pattern's monotonicity.
      if (!g->b && std::holds_alternative<GenConstant>(g->a->gen())) {
        const auto& x = std::get<GenConstant>(g->a->gen()).value;
        if (el_leq(el_zero(s.space()), x, s.space())) {
          if (seq_leq(seq_shift(g->alpha, 1), g->alpha)) return Monotonicity::Decreasing;
          if (seq_leq(g->alpha, seq_shift(g->alpha, 1))) return Monotonicity::Increasing;
        }
      }
      return Monotonicity::Unknown;
    }
    Monotonicity ma = sequence_monotonicity(*g->a);
    if (*alpha < 0) ma = flip(ma);
    if (*alpha == 0) ma = Monotonicity::Constant;
    if (!g->b) return ma;
    const auto beta = constant_of(g->beta);
    if (!beta) return Monotonicity::Unknown;
    Monotonicity mb = sequence_monotonicity(*g->b);
    if (*beta < 0) mb = flip(mb);
    if (*beta == 0) mb = Monotonicity::Constant;
    if (ma == Monotonicity::Constant) return mb;
    if (mb == Monotonicity::Constant) return ma;
    if (ma == mb) return ma;
    return Monotonicity::Unknown;
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen)) {
    if (!op_is_positive(*g->op)) return Monotonicity::Unknown;
    return sequence_monotonicity(*g->a);
  }
  if (const auto* g = std::get_if<GenSup>(&gen)) {
    const Monotonicity ma = sequence_monotonicity(*g->a);
    const Monotonicity mb = sequence_monotonicity(*g->b);
    if (ma == mb) return ma;
    if (ma == Monotonicity::Constant) return mb;
    if (mb == Monotonicity::Constant) return ma;
    return Monotonicity::Unknown;
  }
  if (std::holds_alternative<GenAbs>(gen)) return Monotonicity::Unknown;
  if (const auto* g = std::get_if<GenPatternCombo>(&gen)) {
    // Decreasing when every pattern is decreasing-nonnegative against a
    // positive element (the canonical residual-witness shape).
    bool all_dec = true;
    for (const auto& [pat, elem] : g->parts) {
      const bool pat_dec = seq_leq(seq_shift(pat, 1), pat) && seq_leq(SeqElement::zero(), pat);
      const bool elem_pos = el_leq(el_zero(s.space()), elem, s.space());
      if (!(pat_dec && elem_pos)) {
        all_dec = false;
        break;
      }
    }
    return all_dec ? Monotonicity::Decreasing : Monotonicity::Unknown;
  }
  return Monotonicity::Unknown;
}

SeqElement seq_shift(const SeqElement& x, Index k) {
  if (k < 0) throw std::invalid_argument("seq_shift: negative shift");
  if (k == 0) return x;
  std::map<Index, Rat> ov;
  const Index new_start = std::max<Index>(1, x.start() - k);
  for (const auto& [j, v] : x.overrides())
    if (j - k >= 1) ov[j - k] = v;
  TailList tail;
  for (const auto& t : x.tail()) {
    const Index m = t.mask.modulus;
    const Index r = ((t.mask.residue - k) % m + m) % m;
    tail.emplace_back(t.coeff * rat_pow(t.ratio, k), t.ratio, ResidueMask(m, r));
  }
  // Indices below the shifted start whose values now come from the tail
  // region of x must be materialized explicitly.
  SeqElement shifted(new_start, std::move(ov), std::move(tail));
  std::map<Index, Rat> fix;
  for (Index j = 1; j < new_start; ++j) {
    Rat v = x.value_at(j + k);
    if (v != 0) fix[j] = std::move(v);
  }
  if (fix.empty()) return shifted;
  return SeqElement(new_start, std::move(fix), shifted.tail());
}

std::optional<SpaceEscape> space_escape(const Element& x, Space s) {
  switch (s) {
    case Space::Real:
      if (!std::holds_alternative<Rat>(x)) return SpaceEscape{s, "not a scalar"};
      return std::nullopt;
    case Space::C00:
    case Space::C0:
    case Space::C:
    case Space::LInf: {
      if (!std::holds_alternative<SeqElement>(x)) return SpaceEscape{s, "not a sequence element"};
      const auto m = seq_membership(std::get<SeqElement>(x), space_seq_tag(s));
      if (m.verified) return std::nullopt;
      std::ostringstream os;
      if (const auto* d = std::get_if<DistinctClassLimits>(&*m.refutation))
        os << "class " << d->a.cls.str() << " limit " << rat_str(d->a.limit) << " != class "
           << d->b.cls.str() << " limit " << rat_str(d->b.limit);
      else if (const auto* nv = std::get_if<NonvanishingLimit>(&*m.refutation))
        os << "class " << nv->at.cls.str() << " limit " << rat_str(nv->at.limit) << " != 0";
      else if (const auto* ez = std::get_if<EventuallyNonzero>(&*m.refutation))
        os << "class " << ez->cls.str() << " stays nonzero (value " << rat_str(ez->witness_value)
           << " at " << ez->witness_index << ")";
      return SpaceEscape{s, os.str()};
    }
    case Space::C01: {
      if (!std::holds_alternative<PLFunction>(x)) return SpaceEscape{s, "not a PL function"};
      const auto jumps = pl_jumps(std::get<PLFunction>(x));
      if (jumps.empty()) return std::nullopt;
      std::ostringstream os;
      os << "jump at " << rat_str(jumps[0].at) << " (left " << rat_str(jumps[0].left) << ", right "
         << rat_str(jumps[0].right) << ")";
      return SpaceEscape{s, os.str()};
    }
    case Space::L1:
      if (!std::holds_alternative<PLFunction>(x)) return SpaceEscape{s, "not a PL function"};
      return std::nullopt;
    case Space::CSumL1: {
      if (!std::holds_alternative<DirectSumElement>(x))
        return SpaceEscape{s, "not a direct-sum element"};
      const auto& d = std::get<DirectSumElement>(x);
      const auto jumps = pl_jumps(d.cpart);
      if (jumps.empty()) return std::nullopt;
      std::ostringstream os;
      os << "C-part jump at " << rat_str(jumps[0].at) << " (left " << rat_str(jumps[0].left)
         << ", right " << rat_str(jumps[0].right) << ")";
      return SpaceEscape{s, os.str()};
    }
  }
  throw std::logic_error("space_escape");
}

namespace {

// Uniform limit of a scalar pattern (all residue-class limits equal), else
// nullopt.
std::optional<Rat> pattern_uniform_limit(const ScalarPattern& p) {
  const auto limits = seq_class_limits(p);
  if (limits.empty()) return Rat(0);
  for (size_t i = 1; i < limits.size(); ++i)
    if (limits[i].limit != limits[0].limit) return std::nullopt;
  return limits[0].limit;
}

}  // namespace

PointwiseLimitResult pointwise_limit(const ElementSequence& s) {
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenConstant>(&gen)) return {g->value, {}};
  if (const auto* g = std::get_if<GenPrefixSum>(&gen))
    return {Element(SeqElement::from_tail({g->term})), {}};
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen))
    return {Element(SeqElement::from_tail({g->as_term})), {}};
  if (const auto* g = std::get_if<GenTailTruncation>(&gen)) {
    if (g->cut_stride == 0)
      return {Element(seq_restrict_above(g->base, g->cut_offset)), {}};
    return {Element(SeqElement::zero()), {}};
  }
  if (const auto* g = std::get_if<GenRampFamily>(&gen)) {
    PLFunction step = PLFunction::step(g->level, g->hi, Rat(0));
    if (g->as_direct_sum) return {Element(DirectSumElement{std::move(step), PLFunction::zero()}), {}};
    return {Element(std::move(step)), {}};
  }
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    const auto la = pointwise_limit(*g->a);
    if (!la.limit) return la;
    const auto alpha_lim = pattern_uniform_limit(g->alpha);
    Element out = el_zero(s.space());
    if (!alpha_lim) {
      if (!el_is_zero(*la.limit, s.space()))
        return {std::nullopt,
                "scalar pattern has distinct residue-class limits against a nonzero family limit"};
    } else {
      out = el_scale(*alpha_lim, *la.limit);
    }
    if (g->b) {
      const auto lb = pointwise_limit(*g->b);
      if (!lb.limit) return lb;
      const auto beta_lim = pattern_uniform_limit(g->beta);
      if (!beta_lim) {
        if (!el_is_zero(*lb.limit, s.space()))
          return {std::nullopt,
                  "scalar pattern has distinct residue-class limits against a nonzero family limit"};
      } else {
        out = el_add(out, el_scale(*beta_lim, *lb.limit));
      }
    }
    return {out, {}};
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen)) {
    if (std::holds_alternative<OpFiniteRank>(g->op->kind)) {
      // Functional limits need the summation-order care of the finite-rank
      // machinery; the image limit is sum (a_k - b_k) y_k.
      const auto res = finite_rank_levi_limit(*g->op, *g->a);
      return {res.limit, {}};
    }
    const auto inner = pointwise_limit(*g->a);
    if (!inner.limit) return inner;
    return {op_apply(*g->op, *inner.limit), {}};
  }
  if (const auto* g = std::get_if<GenSup>(&gen)) {
    const auto la = pointwise_limit(*g->a);
    if (!la.limit) return la;
    const auto lb = pointwise_limit(*g->b);
    if (!lb.limit) return lb;
    return {el_sup(*la.limit, *lb.limit), {}};
  }
  if (const auto* g = std::get_if<GenAbs>(&gen)) {
    const auto la = pointwise_limit(*g->a);
    if (!la.limit) return la;
    return {el_abs(*la.limit), {}};
  }
  if (const auto* g = std::get_if<GenPatternCombo>(&gen)) {
    Element out = el_zero(s.space());
    for (const auto& [pat, elem] : g->parts) {
      const auto lim = pattern_uniform_limit(pat);
      if (!lim) {
        if (el_is_zero(elem, s.space())) continue;
        return {std::nullopt, "pattern has distinct residue-class limits"};
      }
      out = el_add(out, el_scale(*lim, elem));
    }
    return {out, {}};
  }
  throw std::logic_error("pointwise_limit: bad generator");
}

ScalarPattern c_limit_pattern(const ElementSequence& s) {
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenConstant>(&gen))
    return ScalarPattern::constant(seq_limit(expect_seq(g->value)));
  if (std::holds_alternative<GenPrefixSum>(gen) || std::holds_alternative<GenScaledBasisSum>(gen))
    return ScalarPattern::zero();  // members are finitely supported
  if (const auto* g = std::get_if<GenTailTruncation>(&gen))
    return ScalarPattern::constant(seq_limit(g->base));
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    // alpha(m) * lim(A(m)) (+ beta(m) * lim(B(m))): product of patterns with
    // constant-limit patterns only.
    const auto la = c_limit_pattern(*g->a);
    ScalarPattern out = seq_mul(g->alpha, la);
    if (g->b) out = seq_add(out, seq_mul(g->beta, c_limit_pattern(*g->b)));
    return out;
  }
  throw IllFormedGrammar("c_limit_pattern: unsupported generator shape");
}

std::string sequence_str(const ElementSequence& s) {
  const auto& gen = s.gen();
  std::ostringstream os;
  if (const auto* g = std::get_if<GenConstant>(&gen)) os << "constant " << el_str(g->value);
  else if (const auto* g = std::get_if<GenPrefixSum>(&gen))
    os << "prefix-sum of " << rat_str(g->term.coeff) << "*(" << rat_str(g->term.ratio) << ")^j on "
       << g->term.mask.str();
  else if (const auto* g = std::get_if<GenScaledBasisSum>(&gen))
    os << "scaled-basis-sum stride " << g->stride << " offset " << g->offset;
  else if (const auto* g = std::get_if<GenTailTruncation>(&gen))
    os << "tail of " << g->base.str() << " beyond " << g->cut_stride << "n+" << g->cut_offset;
  else if (const auto* g = std::get_if<GenRampFamily>(&gen))
    os << (g->as_direct_sum ? "(ramp_n, 0)" : "ramp_n") << " level " << rat_str(g->level) << " at "
       << rat_str(g->hi);
  else if (std::holds_alternative<GenAffineCombo>(gen)) os << "affine combo";
  else if (const auto* g = std::get_if<GenOperatorImage>(&gen))
    os << "image under " << g->op->name << " of [" << sequence_str(*g->a) << "]";
  else if (std::holds_alternative<GenSup>(gen)) os << "sup combo";
  else if (std::holds_alternative<GenAbs>(gen)) os << "abs";
  else os << "pattern combo";
  return os.str();
}

}  // namespace levilab
