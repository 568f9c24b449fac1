#include "levilab/convergence.hpp"

#include <algorithm>
#include <sstream>

#include "levilab/operators.hpp"

namespace levilab {

namespace {

// Structural stabilization hint: indices past which the involved elements'
// overrides, cuts and tail-sign stabilizations have all settled.
Index element_hint(const Element& e) {
  if (const auto* s = std::get_if<SeqElement>(&e)) {
    Index h = s->start();
    if (!s->tail().empty()) {
      const auto sig = eventual_sign(s->tail());
      for (const auto& cs : sig.classes) h = std::max(h, cs.stable_from);
    }
    return h;
  }
  return 1;
}

Index family_hint(const ElementSequence& s) {
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenConstant>(&gen)) return element_hint(g->value);
  if (const auto* g = std::get_if<GenPrefixSum>(&gen)) return g->term.mask.first();
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen)) return g->as_term.mask.first();
  if (const auto* g = std::get_if<GenTailTruncation>(&gen))
    return element_hint(Element(g->base)) + std::max<Index>(0, g->cut_offset) + g->cut_stride;
  if (std::holds_alternative<GenRampFamily>(gen)) return 4;
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    Index h = std::max(family_hint(*g->a), element_hint(Element(g->alpha)));
    if (g->b) h = std::max({h, family_hint(*g->b), element_hint(Element(g->beta))});
    return h;
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen)) return family_hint(*g->a);
  if (const auto* g = std::get_if<GenSup>(&gen))
    return std::max(family_hint(*g->a), family_hint(*g->b));
  if (const auto* g = std::get_if<GenAbs>(&gen)) return family_hint(*g->a);
  if (const auto* g = std::get_if<GenPatternCombo>(&gen)) {
    Index h = 1;
    for (const auto& [pat, elem] : g->parts)
      h = std::max({h, element_hint(Element(pat)), element_hint(elem)});
    return h;
  }
  return 1;
}

constexpr Index kHintCap = 512;

Index effective_horizon(Index horizon, std::initializer_list<const ElementSequence*> fams) {
  Index hint = 1;
  for (const auto* f : fams)
    if (f) hint = std::max(hint, family_hint(*f));
  return std::min(hint, kHintCap) + horizon;
}

// ---------------------------------------------------------------------------
// Truncation normal form: F(n) = base restricted to indices > stride*n+offset.
// ---------------------------------------------------------------------------

struct TruncForm {
  SeqElement base;
  Index stride = 1;
  Index offset = 0;
  Index cut_at(Index n) const { return stride * n + offset; }
};

std::optional<TruncForm> trunc_form(const ElementSequence& s);

std::optional<Rat> pattern_constant(const ScalarPattern& p) {
  if (p.is_zero()) return Rat(0);
  if (p.overrides().empty() && p.tail().size() == 1 && p.tail()[0].ratio == 1 &&
      p.tail()[0].mask == ResidueMask::all())
    return p.tail()[0].coeff;
  return std::nullopt;
}

// Signed deficiency L - S(n) for recognized monotone shapes with pointwise
// limit L; |S(n) - L| is then the truncation of |base|.
std::optional<TruncForm> deficiency_form_raw(const ElementSequence& s) {
  const auto& gen = s.gen();
  if (std::holds_alternative<GenConstant>(gen))
    return TruncForm{SeqElement::zero(), 1, 0};
  if (const auto* g = std::get_if<GenPrefixSum>(&gen)) {
    const auto& m = g->term.mask;
    return TruncForm{SeqElement::from_tail({g->term}), m.modulus, m.first() - m.modulus};
  }
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen)) {
    const auto& m = g->as_term.mask;
    return TruncForm{SeqElement::from_tail({g->as_term}), m.modulus, m.first() - m.modulus};
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen)) {
    // Coordinatewise operators commute with index restriction.
    const auto inner = deficiency_form_raw(*g->a);
    if (!inner) return std::nullopt;
    if (std::holds_alternative<OpDiagonal>(g->op->kind) ||
        std::holds_alternative<OpIdentity>(g->op->kind) ||
        std::holds_alternative<OpScaled>(g->op->kind)) {
      const Element mapped = op_apply(*g->op, Element(inner->base));
      if (!std::holds_alternative<SeqElement>(mapped)) return std::nullopt;
      return TruncForm{std::get<SeqElement>(mapped), inner->stride, inner->offset};
    }
    return std::nullopt;
  }
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    // Shifting by a constant or scaling passes deficiencies through.
    const auto alpha = pattern_constant(g->alpha);
    const auto beta = g->b ? pattern_constant(g->beta) : std::optional<Rat>(Rat(0));
    if (!alpha || !beta) return std::nullopt;
    std::optional<TruncForm> part;
    if (!g->b || std::holds_alternative<GenConstant>(g->b->gen())) {
      part = deficiency_form_raw(*g->a);
      if (part) return TruncForm{seq_scale(*alpha, part->base), part->stride, part->offset};
      return std::nullopt;
    }
    if (std::holds_alternative<GenConstant>(g->a->gen())) {
      part = deficiency_form_raw(*g->b);
      if (part) return TruncForm{seq_scale(*beta, part->base), part->stride, part->offset};
    }
    return std::nullopt;
  }
  return std::nullopt;
}

// |S(n) - L| as a truncation form.
std::optional<TruncForm> deficiency_form(const ElementSequence& s) {
  auto raw = deficiency_form_raw(s);
  if (!raw) return std::nullopt;
  return TruncForm{seq_abs(raw->base), raw->stride, raw->offset};
}

std::optional<TruncForm> trunc_form(const ElementSequence& s) {
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenTailTruncation>(&gen))
    return TruncForm{g->base, g->cut_stride, g->cut_offset};
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    // alpha * A(n) with constant alpha >= 0 over a truncation shape.
    const bool alpha_const = g->alpha == ScalarPattern::constant(g->alpha.value_at(1)) &&
                             g->alpha.value_at(1) >= 0;
    if (alpha_const && !g->b) {
      const auto inner = trunc_form(*g->a);
      if (inner)
        return TruncForm{seq_scale(g->alpha.value_at(1), inner->base), inner->stride,
                         inner->offset};
      return std::nullopt;
    }
    // Canonical deficiency witness: 1*Const(L) + (-1)*S = restr(L, > cut(n)).
    if (g->b && g->alpha == ScalarPattern::constant(Rat(1)) &&
        g->beta == ScalarPattern::constant(Rat(-1))) {
      if (const auto* c = std::get_if<GenConstant>(&g->a->gen())) {
        const auto def = deficiency_form_raw(*g->b);
        if (def && std::holds_alternative<SeqElement>(c->value) &&
            std::get<SeqElement>(c->value) == def->base)
          return def;
      }
    }
    return std::nullopt;
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen)) {
    const auto inner = trunc_form(*g->a);
    if (!inner) return std::nullopt;
    if (std::holds_alternative<OpDiagonal>(g->op->kind) ||
        std::holds_alternative<OpIdentity>(g->op->kind) ||
        std::holds_alternative<OpScaled>(g->op->kind)) {
      const Element mapped = op_apply(*g->op, Element(inner->base));
      if (!std::holds_alternative<SeqElement>(mapped)) return std::nullopt;
      return TruncForm{std::get<SeqElement>(mapped), inner->stride, inner->offset};
    }
    return std::nullopt;
  }
  if (const auto* g = std::get_if<GenSup>(&gen)) {
    // Restriction distributes over pointwise sup when the cuts agree.
    const auto a = trunc_form(*g->a);
    const auto b = trunc_form(*g->b);
    if (a && b && a->stride == b->stride && a->offset == b->offset)
      return TruncForm{seq_sup(a->base, b->base), a->stride, a->offset};
    return std::nullopt;
  }
  return std::nullopt;
}

// Decide restrict(base_d, > cut_d(n)) <= restrict(base_w, > cut_w(n)) for
// every n >= 1. Sound and complete for nonnegative bases whose support
// classes carry nonzero values past stabilization.
Verdict check_trunc_domination(const TruncForm& d, const TruncForm& w, Index eff_horizon) {
  if (!seq_leq(SeqElement::zero(), d.base) || !seq_leq(SeqElement::zero(), w.base))
    return Verdict::inconclusive_at(eff_horizon);

  // Pointwise base comparison on the region D can ever touch.
  const Index min_cut = d.cut_at(1);
  if (!seq_leq(seq_restrict_above(d.base, min_cut), seq_restrict_above(w.base, min_cut))) {
    // Hunt a concrete violation.
    for (Index n = 1; n <= eff_horizon; ++n) {
      const SeqElement dn = seq_restrict_above(d.base, d.cut_at(n));
      const SeqElement wn = seq_restrict_above(w.base, w.cut_at(n));
      if (!seq_leq(dn, wn))
        return Verdict::refuted_with(
            FailedDominationAt{n, "truncation base", dn.str(), wn.str()});
    }
    return Verdict::inconclusive_at(eff_horizon);
  }

  // Cut alignment: every index of base_d surviving cut_d(n) must survive
  // cut_w(n).
  const auto violation_hunt = [&](Index upto) -> std::optional<Verdict> {
    for (Index n = 1; n <= upto; ++n) {
      const SeqElement dn = seq_restrict_above(d.base, d.cut_at(n));
      const SeqElement wn = seq_restrict_above(w.base, w.cut_at(n));
      if (!seq_leq(dn, wn))
        return Verdict::refuted_with(FailedDominationAt{n, "cut alignment", dn.str(), wn.str()});
    }
    return std::nullopt;
  };

  // Overrides of base_d: index j is live in D(n) while cut_d(n) < j, and must
  // then be live in W(n) too. Solve the first n with cut_w(n) >= j exactly
  // and check whether j still survives cut_d there.
  for (const auto& [j, v] : d.base.overrides()) {
    (void)v;
    std::optional<Index> bad_n;
    if (w.stride == 0) {
      if (w.offset >= j) bad_n = 1;  // j never lives in W
    } else {
      // smallest n with w.stride*n + w.offset >= j
      Index n = (j - w.offset + w.stride - 1) / w.stride;
      if (n < 1) n = 1;
      bad_n = n;
    }
    if (bad_n && d.cut_at(*bad_n) < j) {
      const SeqElement dn = seq_restrict_above(d.base, d.cut_at(*bad_n));
      const SeqElement wn = seq_restrict_above(w.base, w.cut_at(*bad_n));
      if (!seq_leq(dn, wn))
        return Verdict::refuted_with(FailedDominationAt{
            *bad_n, "override index " + std::to_string(j), dn.str(), wn.str()});
    }
  }

  // Tail classes of base_d.
  const auto sig = eventual_sign(d.base.tail());
  for (const auto& cs : sig.classes) {
    if (cs.sign == 0) continue;
    const auto next_alive = [&](Index n) {
      return cs.cls.next_after(std::max(d.cut_at(n), d.base.start() - 1));
    };
    if (d.stride > w.stride) {
      // Alignment eventually automatic: cut_d(n)+1 - cut_w(n) grows.
      Index n1 = 1;
      while ((d.stride - w.stride) * n1 + d.offset - w.offset + 1 <= 0) ++n1;
      bool ok = true;
      for (Index n = 1; n <= n1; ++n)
        if (next_alive(n) <= w.cut_at(n)) ok = false;
      if (!ok) {
        if (auto v = violation_hunt(eff_horizon)) return *v;
        return Verdict::inconclusive_at(eff_horizon);
      }
    } else if (d.stride == w.stride) {
      // next_alive(n) - cut_w(n) is eventually periodic in n.
      const Index period =
          d.stride == 0 ? 1 : cs.cls.modulus / std::gcd(d.stride, cs.cls.modulus);
      Index settle = 1;
      if (d.stride >= 1)
        while (d.cut_at(settle) < d.base.start() - 1) ++settle;
      bool ok = true;
      for (Index n = 1; n <= settle + period && ok; ++n)
        if (next_alive(n) <= w.cut_at(n)) ok = false;
      if (!ok) {
        if (auto v = violation_hunt(eff_horizon)) return *v;
        return Verdict::inconclusive_at(eff_horizon);
      }
    } else {
      // w's cut outruns d's: domination must fail once w truncates a live
      // index of d; find it concretely.
      if (auto v = violation_hunt(eff_horizon + cs.cls.modulus * 4)) return *v;
      return Verdict::inconclusive_at(eff_horizon);
    }
  }
  return Verdict::verified_with("truncation cut alignment for all n");
}

// sup norm of restrict(base, > cut(n)) as an exact pattern in n, for
// nonnegative bases. Per class the values decrease, so the sup sits at the
// first surviving index; the overall sup is the pointwise max over classes.
std::optional<ScalarPattern> trunc_sup_norm_pattern(const TruncForm& d) {
  if (!seq_leq(SeqElement::zero(), d.base)) return std::nullopt;
  if (d.stride == 0) {
    const Rat v = seq_sup_norm(seq_restrict_above(d.base, d.cut_at(1)));
    return ScalarPattern::constant(v);
  }
  // Explicit prefix: while the cut is below the base's explicit region.
  Index settle = 1;
  while (d.cut_at(settle) < d.base.start() - 1) ++settle;

  const Index joint = tail_lcm_modulus(d.base.tail());
  ScalarPattern q = ScalarPattern::zero();
  for (Index r = 0; r < joint; ++r) {
    const ResidueMask cls(joint, r);
    TailList class_terms;
    int seen_sign = 0;
    bool single_sign = true;
    for (const auto& t : d.base.tail())
      if (auto meet = mask_intersect(t.mask, cls)) {
        class_terms.emplace_back(t.coeff, t.ratio, *meet);
        const int sg = rat_sign(t.coeff);
        if (seen_sign == 0) seen_sign = sg;
        else if (sg != 0 && sg != seen_sign) single_sign = false;
      }
    if (class_terms.empty()) continue;
    // Monotone class values need one coefficient sign; otherwise bail.
    if (!single_sign) return std::nullopt;
    // class contribution at n >= settle: value of the class at its first
    // surviving index next(n); next(n) - cut(n) is periodic in n.
    const Index period = joint / std::gcd(d.stride, joint);
    TailList pat;
    std::map<Index, Rat> prefix;
    for (Index n = 1; n < settle; ++n)
      prefix[n] = tail_value_at(class_terms, cls.next_after(std::max(d.cut_at(n), d.base.start() - 1)));
    for (Index pr = 0; pr < period; ++pr) {
      Index n0 = settle + ((pr - settle) % period + period) % period;
      const Index next = cls.next_after(d.cut_at(n0));
      const Index e = next - d.stride * n0;  // offset + per-class gap
      for (const auto& t : class_terms) {
        if (t.ratio == 1) {
          pat.emplace_back(t.coeff, Rat(1),
                           period == 1 ? ResidueMask::all() : ResidueMask(period, n0 % period));
          continue;
        }
        Rat coeff = t.coeff;
        if (e >= 0) coeff *= rat_pow(t.ratio, e);
        else coeff /= rat_pow(t.ratio, -e);
        pat.emplace_back(coeff, rat_pow(t.ratio, d.stride),
                         period == 1 ? ResidueMask::all() : ResidueMask(period, n0 % period));
      }
    }
    q = seq_sup(q, SeqElement(settle, std::move(prefix), std::move(pat)));
  }
  // Surviving overrides only matter for finitely many n; fold them in.
  Index n_max = 1;
  for (const auto& [j, v] : d.base.overrides()) {
    (void)v;
    while (d.cut_at(n_max) < j) ++n_max;
  }
  if (n_max > 1) {
    std::map<Index, Rat> fix;
    for (Index n = 1; n < n_max; ++n) {
      const Rat v = seq_sup_norm(seq_restrict_above(d.base, d.cut_at(n)));
      const Rat cur = q.value_at(n);
      if (v > cur) fix[n] = v;
    }
    if (!fix.empty()) {
      // max with the explicit prefix corrections
      SeqElement bump(n_max, std::move(fix), {});
      q = seq_sup(q, bump);
    }
  }
  return q;
}

// Scalar families in the reals as one exact pattern, when the shape allows.
std::optional<ScalarPattern> scalar_pattern_of(const ElementSequence& s) {
  if (s.space() != Space::Real) return std::nullopt;
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenConstant>(&gen)) {
    if (const auto* r = std::get_if<Rat>(&g->value)) return ScalarPattern::constant(*r);
    return std::nullopt;
  }
  if (const auto* g = std::get_if<GenPatternCombo>(&gen)) {
    ScalarPattern acc = ScalarPattern::zero();
    for (const auto& [pat, elem] : g->parts) {
      const auto* r = std::get_if<Rat>(&elem);
      if (!r) return std::nullopt;
      acc = seq_add(acc, seq_scale(*r, pat));
    }
    return acc;
  }
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    const auto a = scalar_pattern_of(*g->a);
    if (!a) return std::nullopt;
    ScalarPattern acc = seq_mul(g->alpha, *a);
    if (g->b) {
      const auto b = scalar_pattern_of(*g->b);
      if (!b) return std::nullopt;
      acc = seq_add(acc, seq_mul(g->beta, *b));
    }
    return acc;
  }
  return std::nullopt;
}

}  // namespace

Verdict check_decreasing_null(const WitnessSequence& w, Index horizon) {
  const Index eff = effective_horizon(horizon, {&w});

  // (a) decreasing: exhaustive prefix...
  Element prev = w.eval_at(1);
  for (Index n = 1; n <= eff; ++n) {
    Element next = w.eval_at(n + 1);
    if (!el_leq(next, prev, w.space()))
      return Verdict::refuted_with(NotDecreasingAt{n + 1});
    prev = std::move(next);
  }
  // ...and structural for the tail.
  const Monotonicity mono = sequence_monotonicity(w);
  if (mono != Monotonicity::Decreasing && mono != Monotonicity::Constant)
    return Verdict::inconclusive_at(eff);

  // The continuous-member proviso behind the a.e. infimum rule for PL parts.
  if (w.space() == Space::C01 || w.space() == Space::CSumL1) {
    for (Index n = 1; n <= std::min<Index>(eff, 8); ++n) {
      const Element e = w.eval_at(n);
      if (const auto* p = std::get_if<PLFunction>(&e)) {
        if (!pl_continuous(*p)) return Verdict::inconclusive_at(eff);
      } else if (const auto* d = std::get_if<DirectSumElement>(&e)) {
        if (!pl_continuous(d->cpart)) return Verdict::inconclusive_at(eff);
      }
    }
  }

  // (b) pointwise infimum zero.
  const auto lim = pointwise_limit(w);
  if (!lim.limit) return Verdict::inconclusive_at(eff);
  const Element& x = *lim.limit;
  bool null = false;
  switch (w.space()) {
    case Space::Real: null = std::get<Rat>(x) == 0; break;
    case Space::C00:
    case Space::C0:
    case Space::C:
    case Space::LInf: null = std::get<SeqElement>(x).is_zero(); break;
    case Space::C01:
    case Space::L1: null = std::get<PLFunction>(x).ae_zero(); break;
    case Space::CSumL1: {
      const auto& d = std::get<DirectSumElement>(x);
      null = d.cpart.ae_zero() && d.lpart.ae_zero();
      break;
    }
  }
  if (null)
    return Verdict::verified_with("structurally decreasing, pointwise infimum zero");

  // Localize a coordinate with a nonzero infimum.
  if (const auto* sx = std::get_if<SeqElement>(&x)) {
    if (!sx->overrides().empty()) {
      const auto& [j, v] = *sx->overrides().begin();
      return Verdict::refuted_with(PointwiseInfPositive{std::to_string(j), v});
    }
    const Index j = sx->tail().front().mask.next_after(sx->start() - 1);
    return Verdict::refuted_with(PointwiseInfPositive{std::to_string(j), sx->value_at(j)});
  }
  if (const auto* rx = std::get_if<Rat>(&x))
    return Verdict::refuted_with(PointwiseInfPositive{"value", *rx});
  return Verdict::refuted_with(PointwiseInfPositive{"a.e. support", Rat(1)});
}

namespace {

// One domination step |S(n) - limit| <= W(n).
bool dominated_at(const ElementSequence& s, const Element& limit, const WitnessSequence& w,
                  Index n) {
  const Element diff = el_abs(el_sub(s.eval_at(n), limit));
  return el_leq(diff, w.eval_at(n), s.space());
}

// Scan for an index violating domination when the deviation does not vanish;
// the witness decays, so small caps suffice in practice.
std::optional<Index> hunt_violation(const ElementSequence& s, const Element& limit,
                                    const WitnessSequence& w, Index from, Index cap) {
  for (Index n = from; n <= cap; ++n)
    if (!dominated_at(s, limit, w, n)) return n;
  return std::nullopt;
}

}  // namespace

WitnessSequence canonical_deficiency_witness(const ElementSequence& s, const Element& limit) {
  const Monotonicity mono = sequence_monotonicity(s);
  ElementSequence cst = ElementSequence::constant(s.space(), limit);
  if (mono == Monotonicity::Decreasing)
    return ElementSequence::affine_combo(Rat(-1), std::move(cst), Rat(1), s);
  return ElementSequence::affine_combo(Rat(1), std::move(cst), Rat(-1), s);
}

Verdict check_order_convergence(const ElementSequence& s, const Element& limit,
                                const WitnessSequence& w, Index horizon) {
  const auto wv = check_decreasing_null(w, horizon);
  if (!wv.verified()) throw WitnessInvalid(verdict_str(wv));

  const Index eff = effective_horizon(horizon, {&s, &w});
  for (Index n = 1; n <= eff; ++n)
    if (!dominated_at(s, limit, w, n)) {
      const Element diff = el_abs(el_sub(s.eval_at(n), limit));
      return Verdict::refuted_with(
          FailedDominationAt{n, "domination", el_str(diff), el_str(w.eval_at(n))});
    }

  // Symbolic tail.
  if (const auto* g = std::get_if<GenConstant>(&s.gen())) {
    if (el_eq(g->value, limit, s.space()))
      return Verdict::verified_with("constant family equals its limit");
    const auto bust = hunt_violation(s, limit, w, eff + 1, eff + 4096);
    if (bust) {
      const Element diff = el_abs(el_sub(s.eval_at(*bust), limit));
      return Verdict::refuted_with(
          FailedDominationAt{*bust, "domination", el_str(diff), el_str(w.eval_at(*bust))});
    }
    return Verdict::inconclusive_at(eff);
  }

  const Monotonicity mono = sequence_monotonicity(s);
  const auto pl = pointwise_limit(s);
  const bool limit_matches = pl.limit && el_eq(limit, *pl.limit, s.space());

  if (limit_matches && mono == Monotonicity::Constant) {
    // Every member equals the first; the deviation is identically |S(1)-L|.
    if (el_eq(s.eval_at(1), limit, s.space()))
      return Verdict::verified_with("constant family equals its limit");
  }

  if (limit_matches && (mono == Monotonicity::Increasing || mono == Monotonicity::Decreasing)) {
    // |S(n) - L| is the one-sided deficiency; witness equal to it wins
    // structurally, truncation shapes get the cut-alignment decision.
    if (w.equal_structure(canonical_deficiency_witness(s, limit)))
      return Verdict::verified_with("witness is the deficiency family itself");
    if (space_is_sequence(s.space())) {
      auto d = deficiency_form(s);
      if (!d && mono == Monotonicity::Decreasing && el_is_zero(limit, s.space())) {
        d = trunc_form(s);
        if (d) d->base = seq_abs(d->base);
      }
      const auto wf = trunc_form(w);
      if (d && wf) {
        Verdict v = check_trunc_domination(*d, *wf, eff);
        if (!v.inconclusive()) return v;
      }
    }
  }

  // Non-matching limits for families whose deviation has a positive floor are
  // refutable by direct scan (witnesses vanish pointwise).
  if (pl.limit && !limit_matches) {
    const auto bust = hunt_violation(s, limit, w, eff + 1, eff + 4096);
    if (bust) {
      const Element diff = el_abs(el_sub(s.eval_at(*bust), limit));
      return Verdict::refuted_with(
          FailedDominationAt{*bust, "domination", el_str(diff), el_str(w.eval_at(*bust))});
    }
  }
  if (!pl.limit) {
    // Oscillating coordinates: some candidate is off by a fixed amount
    // infinitely often; scan further.
    const auto bust = hunt_violation(s, limit, w, eff + 1, eff + 4096);
    if (bust) {
      const Element diff = el_abs(el_sub(s.eval_at(*bust), limit));
      return Verdict::refuted_with(
          FailedDominationAt{*bust, "domination", el_str(diff), el_str(w.eval_at(*bust))});
    }
  }
  return Verdict::inconclusive_at(eff);
}

Verdict check_order_cauchy(const ElementSequence& s, const WitnessSequence& w, Index horizon) {
  const auto wv = check_decreasing_null(w, horizon);
  if (!wv.verified()) throw WitnessInvalid(verdict_str(wv));

  const Index eff = effective_horizon(horizon, {&s, &w});
  const Monotonicity mono = sequence_monotonicity(s);

  if (mono == Monotonicity::Increasing || mono == Monotonicity::Decreasing ||
      mono == Monotonicity::Constant) {
    const auto pl = pointwise_limit(s);
    if (pl.limit) {
      // Envelope reduction: sup_{n',n''>=n} |S(n')-S(n'')| = |S_inf - S(n)|
      // coordinatewise for monotone families.
      for (Index n = 1; n <= eff; ++n)
        if (!dominated_at(s, *pl.limit, w, n)) {
          const Element diff = el_abs(el_sub(s.eval_at(n), *pl.limit));
          return Verdict::refuted_with(
              FailedDominationAt{n, "oscillation envelope", el_str(diff), el_str(w.eval_at(n))});
        }
      if (mono == Monotonicity::Constant)
        return Verdict::verified_with("constant family has zero oscillation");
      if (w.equal_structure(canonical_deficiency_witness(s, *pl.limit)))
        return Verdict::verified_with("witness is the oscillation envelope itself");
      // Doubled (or otherwise scaled-up) envelope witnesses.
      if (const auto* g = std::get_if<GenAffineCombo>(&w.gen())) {
        const auto c = pattern_constant(g->alpha);
        if (c && *c >= 1 && !g->b &&
            g->a->equal_structure(canonical_deficiency_witness(s, *pl.limit)))
          return Verdict::verified_with("scaled oscillation envelope");
      }
      if (space_is_sequence(s.space())) {
        auto d = deficiency_form(s);
        if (!d && mono == Monotonicity::Decreasing && el_is_zero(*pl.limit, s.space())) {
          d = trunc_form(s);
          if (d) d->base = seq_abs(d->base);
        }
        const auto wf = trunc_form(w);
        if (d && wf) {
          Verdict v = check_trunc_domination(*d, *wf, eff);
          if (!v.inconclusive()) return v;
        }
      }
      // Scalar families: compare exact patterns.
      if (s.space() == Space::Real) {
        const auto qs = scalar_pattern_of(s);
        const auto ws = scalar_pattern_of(w);
        if (qs && ws && std::holds_alternative<Rat>(*pl.limit)) {
          const ScalarPattern dev =
              seq_abs(seq_sub(*qs, ScalarPattern::constant(std::get<Rat>(*pl.limit))));
          if (seq_leq(dev, *ws)) return Verdict::verified_with("scalar pattern domination");
          return Verdict::inconclusive_at(eff);
        }
      }
      return Verdict::inconclusive_at(eff);
    }
    return Verdict::inconclusive_at(eff);
  }

  // Non-monotone: exhaustive pair checking against W(min(n', n'')).
  std::vector<Element> vals;
  vals.reserve(static_cast<size_t>(eff));
  for (Index n = 1; n <= eff; ++n) vals.push_back(s.eval_at(n));
  for (Index a = 1; a <= eff; ++a) {
    const Element wa = w.eval_at(a);
    for (Index b = a + 1; b <= eff; ++b) {
      const Element diff = el_abs(el_sub(vals[static_cast<size_t>(a - 1)],
                                         vals[static_cast<size_t>(b - 1)]));
      if (!el_leq(diff, wa, s.space()))
        return Verdict::refuted_with(FailedDominationAt{
            a, "pair (" + std::to_string(a) + "," + std::to_string(b) + ")", el_str(diff),
            el_str(wa)});
    }
  }
  return Verdict::inconclusive_at(eff);
}

Space family_space(const SequenceFamily& fam) {
  if (const auto* f = std::get_if<FiniteFamily>(&fam)) {
    if (f->members.empty()) throw std::invalid_argument("empty family");
    return f->members.front().space();
  }
  if (std::holds_alternative<DeltaFamily>(fam)) return Space::Real;
  if (const auto* f = std::get_if<ScalarScaledFamily>(&fam)) return f->base->space();
  return Space::Real;  // coordinate images
}

EnvelopeResult family_envelope(const SequenceFamily& fam, Index n) {
  EnvelopeResult out;
  if (const auto* f = std::get_if<FiniteFamily>(&fam)) {
    if (f->members.size() != f->limits.size())
      throw std::invalid_argument("family/limit size mismatch");
    Element q = el_zero(family_space(fam));
    for (size_t i = 0; i < f->members.size(); ++i)
      q = el_sup(q, el_abs(el_sub(f->members[i].eval_at(n), f->limits[i])));
    out.value = std::move(q);
    return out;
  }
  if (std::holds_alternative<DeltaFamily>(fam)) {
    // sup_k |delta_k(n)| = 1 at every n: the k = n member contributes 1.
    out.value = Rat(1);
    out.lower_bound = EnvelopeLowerBound{Rat(1), n, "{(delta_k^n)_n : k in N}"};
    return out;
  }
  if (const auto* f = std::get_if<ScalarScaledFamily>(&fam)) {
    bool all_zero = true;
    for (Index m = 1; m <= std::max<Index>(n, 8); ++m)
      if (!el_is_zero(f->base->eval_at(m), f->base->space())) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      out.value = el_zero(f->base->space());
      return out;
    }
    out.unbounded = true;
    out.lower_bound =
        EnvelopeLowerBound{Rat(0), n, "{lambda * a : lambda in R} is unbounded over lambda"};
    return out;
  }
  const auto& f = std::get<CoordinateImagesFamily>(fam);
  const auto lim = pointwise_limit(*f.base);
  if (!lim.limit || !std::holds_alternative<SeqElement>(*lim.limit))
    throw NoClosedForm("coordinate-images envelope needs a sequence pointwise limit");
  const SeqElement dev =
      seq_abs(seq_sub(std::get<SeqElement>(*lim.limit), std::get<SeqElement>(f.base->eval_at(n))));
  out.value = seq_sup_norm(dev);
  return out;
}

namespace {

Verdict merge_family_verdicts(std::vector<Verdict> parts) {
  for (auto& v : parts)
    if (v.refuted()) return v;
  for (auto& v : parts)
    if (v.inconclusive()) return v;
  if (parts.empty()) return Verdict::verified_with("empty family");
  return Verdict::verified_with("all members dominated by the shared witness");
}

// Scalar witness must eventually dip below `floor`; find where.
std::optional<Index> scalar_witness_below(const WitnessSequence& w, const Rat& floor, Index cap) {
  for (Index n = 1; n <= cap; ++n) {
    const Element e = w.eval_at(n);
    if (const auto* r = std::get_if<Rat>(&e))
      if (*r < floor) return n;
  }
  return std::nullopt;
}

}  // namespace

Verdict check_collective(const SequenceFamily& fam, const WitnessSequence& w, Index horizon) {
  const auto wv = check_decreasing_null(w, horizon);
  if (!wv.verified()) throw WitnessInvalid(verdict_str(wv));

  if (const auto* f = std::get_if<FiniteFamily>(&fam)) {
    if (f->members.size() != f->limits.size())
      throw std::invalid_argument("family/limit size mismatch");
    std::vector<Verdict> parts;
    for (size_t i = 0; i < f->members.size(); ++i)
      parts.push_back(check_order_convergence(f->members[i], f->limits[i], w, horizon));
    return merge_family_verdicts(std::move(parts));
  }
  if (std::holds_alternative<DeltaFamily>(fam)) {
    // Any valid witness must dominate the constant-1 envelope.
    const Index eff = effective_horizon(horizon, {&w});
    if (const auto n = scalar_witness_below(w, Rat(1), eff + 4096))
      return Verdict::refuted_with(EnvelopeLowerBound{Rat(1), *n, "{(delta_k^n)_n : k in N}"});
    return Verdict::inconclusive_at(eff);
  }
  if (const auto* f = std::get_if<ScalarScaledFamily>(&fam)) {
    const auto env = family_envelope(fam, 1);
    if (!env.unbounded)
      return Verdict::verified_with("scaled family of the zero sequence");
    // Exhibit a concrete member beating the witness.
    for (Index n = 1; n <= effective_horizon(horizon, {&w, f->base.get()}); ++n) {
      const Element base = f->base->eval_at(n);
      if (el_is_zero(base, f->base->space())) continue;
      const Element wn = w.eval_at(n);
      // lambda large enough that lambda*|base| fails under W(n).
      Rat lambda(1);
      for (int i = 0; i < 512; ++i) {
        if (!el_leq(el_scale(lambda, el_abs(base)), wn, f->base->space()))
          return Verdict::refuted_with(EnvelopeLowerBound{
              lambda, n, "scalar-scaled family: member lambda=" + rat_str(lambda)});
        lambda *= 2;
      }
    }
    return Verdict::inconclusive_at(horizon);
  }
  const auto& f = std::get<CoordinateImagesFamily>(fam);
  // Convergence of every coordinate image to its limit coordinate with one
  // scalar witness: sup norm of the deviation must sit below W(n).
  const Index eff = effective_horizon(horizon, {&w, f.base.get()});
  for (Index n = 1; n <= eff; ++n) {
    const auto env = family_envelope(fam, n);
    const Element wn = w.eval_at(n);
    if (!el_leq(*env.value, wn, Space::Real))
      return Verdict::refuted_with(EnvelopeLowerBound{std::get<Rat>(*env.value), n,
                                                      "coordinate evaluation images"});
  }
  return Verdict::inconclusive_at(eff);
}

Verdict check_collective_cauchy(const SequenceFamily& fam, const WitnessSequence& w,
                                Index horizon) {
  const auto wv = check_decreasing_null(w, horizon);
  if (!wv.verified()) throw WitnessInvalid(verdict_str(wv));

  if (const auto* f = std::get_if<FiniteFamily>(&fam)) {
    std::vector<Verdict> parts;
    for (const auto& m : f->members) parts.push_back(check_order_cauchy(m, w, horizon));
    return merge_family_verdicts(std::move(parts));
  }
  if (const auto* f = std::get_if<CoordinateImagesFamily>(&fam)) {
    // Oscillation envelope: for increasing base, sup over coordinates k and
    // pairs n',n'' >= n equals ||X - base(n)||_inf.
    if (sequence_monotonicity(*f->base) != Monotonicity::Increasing)
      return Verdict::inconclusive_at(horizon);
    const Index eff = effective_horizon(horizon, {&w, f->base.get()});
    const auto lim = pointwise_limit(*f->base);
    if (!lim.limit || !std::holds_alternative<SeqElement>(*lim.limit))
      return Verdict::inconclusive_at(eff);
    for (Index n = 1; n <= eff; ++n) {
      const SeqElement dev = seq_abs(
          seq_sub(std::get<SeqElement>(*lim.limit), std::get<SeqElement>(f->base->eval_at(n))));
      const Rat q = seq_sup_norm(dev);
      const Element wn = w.eval_at(n);
      if (!el_leq(Element(q), wn, Space::Real))
        return Verdict::refuted_with(
            EnvelopeLowerBound{q, n, "coordinate evaluation images (oscillation)"});
    }
    // Symbolic: the envelope pattern must sit below the witness pattern.
    const auto q = envelope_norm_pattern(*f->base);
    const auto ws = scalar_pattern_of(w);
    if (q && ws) {
      if (seq_leq(*q, *ws))
        return Verdict::verified_with("envelope pattern below the witness pattern");
      // A positive envelope infimum beats any decreasing-null witness.
      for (const auto& cl : seq_class_limits(*q)) {
        if (cl.limit <= 0) continue;
        if (const auto n = scalar_witness_below(w, cl.limit, eff + 4096))
          return Verdict::refuted_with(EnvelopeLowerBound{
              cl.limit, *n, "coordinate evaluation images (oscillation)"});
      }
    }
    return Verdict::inconclusive_at(eff);
  }
  return Verdict::inconclusive_at(horizon);
}

WitnessSequence combine_witness(WitnessCombine kind, const WitnessSequence& p,
                                const WitnessSequence* q, const Rat& alpha, const Rat& beta,
                                Index horizon) {
  const auto pv = check_decreasing_null(p, horizon);
  if (!pv.verified()) throw WitnessInvalid("P: " + verdict_str(pv));
  if (kind == WitnessCombine::Modulus || kind == WitnessCombine::Convex) return p;
  if (!q) throw std::invalid_argument("combine_witness: Q required");
  const auto qv = check_decreasing_null(*q, horizon);
  if (!qv.verified()) throw WitnessInvalid("Q: " + verdict_str(qv));
  WitnessSequence out = kind == WitnessCombine::Union
                            ? ElementSequence::sup_of(p, *q)
                            : ElementSequence::affine_combo(rat_abs(alpha), p, rat_abs(beta), *q);
  const auto ov = check_decreasing_null(out, horizon);
  if (!ov.verified()) throw WitnessInvalid("combined: " + verdict_str(ov));
  return out;
}

WitnessSequence l1_witness(const std::vector<Rat>& weights,
                           const std::vector<WitnessSequence>& witnesses, Index horizon) {
  if (weights.size() != witnesses.size() || witnesses.empty())
    throw std::invalid_argument("l1_witness: weight/witness count mismatch");
  Rat total(0);
  for (const auto& a : weights) total += rat_abs(a);
  if (total > 1) throw NotSummableWeights();
  const Element unit = el_unit(witnesses.front().space());
  for (const auto& wit : witnesses) {
    const auto v = check_decreasing_null(wit, horizon);
    if (!v.verified()) throw WitnessInvalid(verdict_str(v));
    if (!el_leq(wit.eval_at(1), unit, wit.space())) throw UnboundedWitness();
  }
  WitnessSequence acc = ElementSequence::scaled(rat_abs(weights[0]), witnesses[0]);
  for (size_t i = 1; i < witnesses.size(); ++i)
    acc = ElementSequence::affine_combo(Rat(1), std::move(acc), rat_abs(weights[i]), witnesses[i]);
  const auto av = check_decreasing_null(acc, horizon);
  if (!av.verified()) throw WitnessInvalid("combined: " + verdict_str(av));
  return acc;
}

WitnessSequence l1_witness_geometric(const Rat& first, const Rat& ratio, const WitnessSequence& p,
                                     Index horizon) {
  if (!(ratio >= 0 && ratio < 1)) throw NotSummableWeights();
  const Rat total = rat_abs(first) / (Rat(1) - ratio);
  if (total > 1) throw NotSummableWeights();
  const auto v = check_decreasing_null(p, horizon);
  if (!v.verified()) throw WitnessInvalid(verdict_str(v));
  if (!el_leq(p.eval_at(1), el_unit(p.space()), p.space())) throw UnboundedWitness();
  if (total == 1) return p;  // the series collapses exactly
  return ElementSequence::scaled(total, p);
}

ConstructLimitResult construct_limit(const ElementSequence& s, const WitnessSequence& w,
                                     Space space, Index horizon) {
  const Verdict cauchy = check_order_cauchy(s, w, horizon);
  if (!cauchy.verified())
    throw WitnessInvalid("order-Cauchy precondition not verified: " + verdict_str(cauchy));
  const auto pl = pointwise_limit(s);
  if (!pl.limit) throw NoStabilization(pl.error);
  ConstructLimitResult out;
  if (const auto escape = space_escape(*pl.limit, space)) {
    out.refutation = LimitEscapesSpace{*pl.limit, *escape};
    return out;
  }
  out.domination = check_order_convergence(s, *pl.limit, w, horizon);
  if (out.domination.verified()) out.limit = *pl.limit;
  else if (out.domination.refuted()) out.refutation = out.domination.certificate;
  return out;
}

std::optional<ScalarPattern> envelope_norm_pattern(const ElementSequence& s) {
  const auto d = deficiency_form(s);
  if (!d) return std::nullopt;
  return trunc_sup_norm_pattern(*d);
}

std::optional<WitnessSequence> canonical_cauchy_witness(const ElementSequence& s,
                                                        const Rat& bound) {
  const auto& gen = s.gen();
  if (std::holds_alternative<GenConstant>(gen))
    return ElementSequence::constant(s.space(), el_zero(s.space()));
  if (const auto* g = std::get_if<GenPrefixSum>(&gen)) {
    const auto& m = g->term.mask;
    // Support of the deficiency sits past the (n+1)-th mask member, so the
    // cut can ride just below it.
    return ElementSequence::tail_truncation(s.space(), seq_scale(bound, SeqElement::ones()),
                                            m.modulus, m.first() - 1);
  }
  if (const auto* g = std::get_if<GenScaledBasisSum>(&gen)) {
    const auto& m = g->as_term.mask;
    return ElementSequence::tail_truncation(s.space(), seq_scale(bound, SeqElement::ones()),
                                            m.modulus, m.first() - 1);
  }
  if (const auto* g = std::get_if<GenTailTruncation>(&gen)) {
    if (seq_leq(SeqElement::zero(), g->base)) return s;  // decreasing: its own envelope
    return std::nullopt;
  }
  if (const auto* g = std::get_if<GenOperatorImage>(&gen)) {
    if (std::holds_alternative<OpIdentity>(g->op->kind))
      return canonical_cauchy_witness(*g->a, bound);
    return std::nullopt;
  }
  return std::nullopt;
}

IncreasingBoundedCheck check_increasing_bounded(const ElementSequence& s,
                                                const Rat& bound_multiple, Index horizon) {
  IncreasingBoundedCheck out;
  const Index eff = effective_horizon(horizon, {&s});
  const Monotonicity mono = sequence_monotonicity(s);
  out.increasing = mono == Monotonicity::Increasing || mono == Monotonicity::Constant;
  for (Index n = 1; n < std::min<Index>(eff, 64) && out.increasing; ++n)
    if (!el_leq(s.eval_at(n), s.eval_at(n + 1), s.space())) {
      out.increasing = false;
      out.detail = "not increasing at n=" + std::to_string(n + 1);
    }
  const Element cap = el_scale(bound_multiple, el_unit(s.space()));
  out.bounded = true;
  const auto pl = pointwise_limit(s);
  if (pl.limit) {
    out.bounded = el_leq(*pl.limit, cap, s.space());
    if (!out.bounded) out.detail = "pointwise limit exceeds the stated bound";
  }
  for (Index n = 1; n <= std::min<Index>(eff, 64) && out.bounded; ++n)
    if (!el_leq(s.eval_at(n), cap, s.space())) {
      out.bounded = false;
      out.detail = "exceeds the bound at n=" + std::to_string(n);
    }
  return out;
}

}  // namespace levilab
