#include "levilab/operators.hpp"

#include <sstream>

#include "levilab/convergence.hpp"

namespace levilab {

DualFunctionalC::DualFunctionalC(SeqElement w, Rat lc)
    : weights(std::move(w)), lim_coeff(std::move(lc)) {
  for (const auto& t : weights.tail())
    if (t.ratio >= 1)
      throw IllFormedGrammar("dual functional weights must be absolutely summable (ratios < 1)");
}

Rat DualFunctionalC::norm() const { return seq_abs_sum(weights) + rat_abs(lim_coeff); }

bool DualFunctionalC::is_positive() const {
  return lim_coeff >= 0 && seq_leq(SeqElement::zero(), weights);
}

Rat functional_eval(const DualFunctionalC& f, const SeqElement& x) {
  Rat out = seq_dot_sum(f.weights, x);
  if (f.lim_coeff != 0) out += f.lim_coeff * seq_limit(x);  // throws NotInC outside c
  return out;
}

DualFunctionalC functional_positive_part(const DualFunctionalC& f) {
  return DualFunctionalC(seq_sup(f.weights, SeqElement::zero()), rat_max(f.lim_coeff, Rat(0)));
}

DualFunctionalC functional_negative_part(const DualFunctionalC& f) {
  return functional_positive_part(
      DualFunctionalC(seq_scale(Rat(-1), f.weights), -f.lim_coeff));
}

DualFunctionalC functional_add(const DualFunctionalC& a, const DualFunctionalC& b) {
  return DualFunctionalC(seq_add(a.weights, b.weights), a.lim_coeff + b.lim_coeff);
}

DualFunctionalC functional_scale(const Rat& alpha, const DualFunctionalC& f) {
  return DualFunctionalC(seq_scale(alpha, f.weights), alpha * f.lim_coeff);
}

namespace {

// Remainder sum_{j > cut(m)} w(j) x(j) as an exact pattern in m, for affine
// cuts. Overrides contribute step prefixes; tail pairs contribute masked
// geometric terms in m.
ScalarPattern remainder_pattern(const SeqElement& w, const SeqElement& x, Index cut_stride,
                                Index cut_offset) {
  const Index start = std::max(w.start(), x.start());
  ScalarPattern acc = ScalarPattern::zero();

  // Explicit region: indices j < start with w(j)*x(j) != 0 contribute while
  // cut(m) < j.
  for (Index j = 1; j < start; ++j) {
    const Rat v = w.value_at(j) * x.value_at(j);
    if (v == 0) continue;
    if (cut_stride == 0) {
      if (cut_offset < j) acc = seq_add(acc, ScalarPattern::constant(v));
      continue;
    }
    // contributes for m with cut_stride*m + cut_offset < j
    Index m_last = 0;
    while (cut_stride * (m_last + 1) + cut_offset < j) ++m_last;
    if (m_last >= 1) {
      // v for m in [1, m_last]: constant minus its tail truncation
      std::map<Index, Rat> ov;
      for (Index m = 1; m <= m_last; ++m) ov[m] = v;
      acc = seq_add(acc, SeqElement(m_last + 1, std::move(ov), {}));
    }
  }

  // Tail pairs: sum over j > cut(m), j in the CRT class, of C * P^j.
  for (const auto& tw : w.tail()) {
    for (const auto& tx : x.tail()) {
      const auto meet = mask_intersect(tw.mask, tx.mask);
      if (!meet) continue;
      const Rat P = tw.ratio * tx.ratio;
      const Rat C = tw.coeff * tx.coeff;
      if (C == 0 || P == 0) continue;
      if (P >= 1) throw NotSummable();
      const Rat geom_den = Rat(1) - rat_pow(P, meet->modulus);
      if (cut_stride == 0) {
        const Index first = meet->next_after(std::max(cut_offset, start - 1));
        acc = seq_add(acc, ScalarPattern::constant(C * rat_pow(P, first) / geom_den));
        continue;
      }
      // first(m) = next class member after max(cut(m), start-1); once cut(m)
      // >= start-1 the gap delta(m) is periodic in m.
      Index settle = 1;
      while (cut_stride * settle + cut_offset < start - 1) ++settle;
      const Index period = meet->modulus / std::gcd(cut_stride, meet->modulus);
      // Explicit prefix for m < settle.
      std::map<Index, Rat> ov;
      for (Index m = 1; m < settle; ++m) {
        const Index first = meet->next_after(std::max(cut_stride * m + cut_offset, start - 1));
        ov[m] = C * rat_pow(P, first) / geom_den;
      }
      // Periodic tail from settle on: first(m) = cut(m) + delta_r.
      TailList tail;
      const Rat m_ratio = rat_pow(P, cut_stride);
      for (Index r = 0; r < period; ++r) {
        // representative m >= settle with m = r (mod period)
        Index m0 = settle + ((r - settle) % period + period) % period;
        const Index first = meet->next_after(cut_stride * m0 + cut_offset);
        const Index e = first - cut_stride * m0;  // offset + delta, may be < 0
        Rat coeff = C / geom_den;
        if (e >= 0) coeff *= rat_pow(P, e);
        else coeff /= rat_pow(P, -e);
        tail.emplace_back(coeff, m_ratio,
                          period == 1 ? ResidueMask::all() : ResidueMask(period, m0 % period));
      }
      // Values in [settle, start of periodic validity) are already exact by
      // the same formula, so the pattern starts at `settle`.
      SeqElement part(settle, std::move(ov), std::move(tail));
      acc = seq_add(acc, part);
    }
  }
  return acc;
}

}  // namespace

ScalarPattern functional_on_sequence(const DualFunctionalC& f, const ElementSequence& s) {
  const auto& gen = s.gen();
  if (const auto* g = std::get_if<GenConstant>(&gen)) {
    if (!std::holds_alternative<SeqElement>(g->value))
      throw IllFormedGrammar("functional_on_sequence: sequence-space family required");
    return ScalarPattern::constant(functional_eval(f, std::get<SeqElement>(g->value)));
  }
  if (std::holds_alternative<GenPrefixSum>(gen) || std::holds_alternative<GenScaledBasisSum>(gen)) {
    const TailTerm term = std::holds_alternative<GenPrefixSum>(gen)
                              ? std::get<GenPrefixSum>(gen).term
                              : std::get<GenScaledBasisSum>(gen).as_term;
    // f(S(m)) = f(full) - sum_{j > nth(m)} w(j) full(j); members are finitely
    // supported, so the limit part of f never fires.
    const SeqElement full = SeqElement::from_tail({term});
    const Rat whole = seq_dot_sum(f.weights, full);
    const auto& mask = term.mask;
    const ScalarPattern rem =
        remainder_pattern(f.weights, full, mask.modulus, mask.first() - mask.modulus);
    return seq_sub(ScalarPattern::constant(whole), rem);
  }
  if (const auto* g = std::get_if<GenTailTruncation>(&gen)) {
    ScalarPattern acc = remainder_pattern(f.weights, g->base, g->cut_stride, g->cut_offset);
    if (f.lim_coeff != 0)
      acc = seq_add(acc, ScalarPattern::constant(f.lim_coeff * seq_limit(g->base)));
    return acc;
  }
  if (const auto* g = std::get_if<GenAffineCombo>(&gen)) {
    ScalarPattern acc = seq_mul(g->alpha, functional_on_sequence(f, *g->a));
    if (g->b) acc = seq_add(acc, seq_mul(g->beta, functional_on_sequence(f, *g->b)));
    return acc;
  }
  throw IllFormedGrammar("functional_on_sequence: unsupported generator shape");
}

// --- operator constructors ---

OpPtr make_diagonal(Space dom, Space cod, SeqElement coeffs, std::string name, bool compact) {
  if (!space_is_sequence(dom) || !space_is_sequence(cod))
    throw DomainMismatch("diagonal operators act between sequence spaces");
  return std::make_shared<OperatorDesc>(dom, cod, OpDiagonal{std::move(coeffs)}, std::move(name),
                                        compact);
}

OpPtr make_finite_rank(Space dom, Space cod,
                       std::vector<std::pair<DualFunctionalC, Element>> ranks, std::string name) {
  if (!space_is_sequence(dom)) throw DomainMismatch("finite-rank functionals live on c (or below)");
  return std::make_shared<OperatorDesc>(dom, cod, OpFiniteRank{std::move(ranks)}, std::move(name));
}

OpPtr make_embed_zero_phi(std::string name) {
  return std::make_shared<OperatorDesc>(Space::CSumL1, Space::CSumL1, OpEmbedZeroPhi{},
                                        std::move(name));
}

OpPtr make_identity(Space s, std::string name) {
  return std::make_shared<OperatorDesc>(s, s, OpIdentity{}, std::move(name));
}

OpPtr make_eval_functional(Space dom, Index k, std::string name) {
  if (!space_is_sequence(dom)) throw DomainMismatch("evaluation functionals live on sequence spaces");
  if (k < 1) throw std::invalid_argument("evaluation index must be >= 1");
  return std::make_shared<OperatorDesc>(dom, Space::Real, OpEvalFunctional{k}, std::move(name));
}

OpPtr make_scaled(const Rat& alpha, OpPtr inner, std::string name) {
  if (!inner) throw std::invalid_argument("scaled operator: null inner");
  const Space dom = inner->domain, cod = inner->codomain;
  return std::make_shared<OperatorDesc>(dom, cod, OpScaled{alpha, std::move(inner)},
                                        std::move(name));
}

OpPtr make_sum(OpPtr lhs, OpPtr rhs, std::string name) {
  if (!lhs || !rhs) throw std::invalid_argument("sum operator: null side");
  if (lhs->domain != rhs->domain || lhs->codomain != rhs->codomain)
    throw DomainMismatch("sum operator: mismatched spaces");
  const Space dom = lhs->domain, cod = lhs->codomain;
  return std::make_shared<OperatorDesc>(dom, cod, OpSum{std::move(lhs), std::move(rhs)},
                                        std::move(name));
}

Element op_apply(const OperatorDesc& op, const Element& x) {
  if (const auto* d = std::get_if<OpDiagonal>(&op.kind)) {
    if (!std::holds_alternative<SeqElement>(x)) throw DomainMismatch("diagonal: sequence expected");
    return seq_mul(d->coeffs, std::get<SeqElement>(x));
  }
  if (const auto* fr = std::get_if<OpFiniteRank>(&op.kind)) {
    if (!std::holds_alternative<SeqElement>(x))
      throw DomainMismatch("finite rank: sequence expected");
    const auto& sx = std::get<SeqElement>(x);
    Element out = el_zero(op.codomain);
    for (const auto& [f, y] : fr->ranks) out = el_add(out, el_scale(functional_eval(f, sx), y));
    return out;
  }
  if (std::holds_alternative<OpEmbedZeroPhi>(op.kind)) {
    if (!std::holds_alternative<DirectSumElement>(x))
      throw DomainMismatch("embed: direct-sum element expected");
    const auto& d = std::get<DirectSumElement>(x);
    return DirectSumElement{PLFunction::zero(), d.cpart};
  }
  if (std::holds_alternative<OpIdentity>(op.kind)) return x;
  if (const auto* ev = std::get_if<OpEvalFunctional>(&op.kind)) {
    if (!std::holds_alternative<SeqElement>(x)) throw DomainMismatch("eval: sequence expected");
    return std::get<SeqElement>(x).value_at(ev->k);
  }
  if (const auto* sc = std::get_if<OpScaled>(&op.kind))
    return el_scale(sc->alpha, op_apply(*sc->inner, x));
  const auto& sum = std::get<OpSum>(op.kind);
  return el_add(op_apply(*sum.lhs, x), op_apply(*sum.rhs, x));
}

bool op_is_positive(const OperatorDesc& op) {
  if (const auto* d = std::get_if<OpDiagonal>(&op.kind))
    return seq_leq(SeqElement::zero(), d->coeffs);
  if (const auto* fr = std::get_if<OpFiniteRank>(&op.kind)) {
    for (const auto& [f, y] : fr->ranks) {
      const bool pos_pos = f.is_positive() && el_leq(el_zero(op.codomain), y, op.codomain);
      const bool neg_neg = functional_scale(Rat(-1), f).is_positive() &&
                           el_leq(y, el_zero(op.codomain), op.codomain);
      if (!pos_pos && !neg_neg) return false;
    }
    return true;
  }
  if (std::holds_alternative<OpEmbedZeroPhi>(op.kind)) return true;
  if (std::holds_alternative<OpIdentity>(op.kind)) return true;
  if (std::holds_alternative<OpEvalFunctional>(op.kind)) return true;
  if (const auto* sc = std::get_if<OpScaled>(&op.kind))
    return sc->alpha >= 0 && op_is_positive(*sc->inner);
  const auto& sum = std::get<OpSum>(op.kind);
  return op_is_positive(*sum.lhs) && op_is_positive(*sum.rhs);
}

std::optional<DiagPlusFiniteRank> op_normal_form(const OperatorDesc& op) {
  if (const auto* d = std::get_if<OpDiagonal>(&op.kind))
    return DiagPlusFiniteRank{d->coeffs, {}};
  if (const auto* fr = std::get_if<OpFiniteRank>(&op.kind))
    return DiagPlusFiniteRank{SeqElement::zero(), fr->ranks};
  if (std::holds_alternative<OpIdentity>(op.kind)) {
    if (!space_is_sequence(op.domain)) return std::nullopt;
    return DiagPlusFiniteRank{SeqElement::ones(), {}};
  }
  if (const auto* ev = std::get_if<OpEvalFunctional>(&op.kind)) {
    DualFunctionalC f(SeqElement::unit(ev->k), Rat(0));
    return DiagPlusFiniteRank{SeqElement::zero(), {{f, Element(Rat(1))}}};
  }
  if (const auto* sc = std::get_if<OpScaled>(&op.kind)) {
    auto inner = op_normal_form(*sc->inner);
    if (!inner) return std::nullopt;
    DiagPlusFiniteRank out{seq_scale(sc->alpha, inner->diag), {}};
    for (auto& [f, y] : inner->ranks) out.ranks.emplace_back(f, el_scale(sc->alpha, y));
    return out;
  }
  if (const auto* sum = std::get_if<OpSum>(&op.kind)) {
    auto a = op_normal_form(*sum->lhs);
    auto b = op_normal_form(*sum->rhs);
    if (!a || !b) return std::nullopt;
    DiagPlusFiniteRank out{seq_add(a->diag, b->diag), a->ranks};
    out.ranks.insert(out.ranks.end(), b->ranks.begin(), b->ranks.end());
    return out;
  }
  return std::nullopt;
}

namespace {

// Row n of a diagonal-plus-finite-rank operator, as a functional on the
// domain: diag(n) at coordinate n plus sum_k y_k(n) f_k.
DualFunctionalC row_functional(const DiagPlusFiniteRank& nf, Index n) {
  SeqElement weights = SeqElement::unit(n, nf.diag.value_at(n));
  Rat lim(0);
  for (const auto& [f, y] : nf.ranks) {
    const Rat yn = std::holds_alternative<Rat>(y) ? std::get<Rat>(y)
                                                  : std::get<SeqElement>(y).value_at(n);
    weights = seq_add(weights, seq_scale(yn, f.weights));
    lim += yn * f.lim_coeff;
  }
  return DualFunctionalC(weights, lim);
}

}  // namespace

bool op_leq(const OperatorDesc& s, const OperatorDesc& t) {
  if (s.domain != t.domain || s.codomain != t.codomain)
    throw DomainMismatch("op_leq: mismatched spaces");
  const auto ns = op_normal_form(s);
  const auto nt = op_normal_form(t);
  if (!ns || !nt) throw UnsupportedOperator("op_leq needs diagonal-plus-finite-rank shapes");

  // Difference T - S in normal form, with ranks sharing a functional merged
  // (so T - T collapses) and zero pairs dropped.
  DiagPlusFiniteRank diff{seq_sub(nt->diag, ns->diag), {}};
  {
    std::vector<std::pair<DualFunctionalC, Element>> raw = nt->ranks;
    for (const auto& [f, y] : ns->ranks) raw.emplace_back(f, el_scale(Rat(-1), y));
    for (const auto& [f, y] : raw) {
      bool merged = false;
      for (auto& [g, z] : diff.ranks)
        if (g == f) {
          z = el_add(z, y);
          merged = true;
          break;
        }
      if (!merged) diff.ranks.emplace_back(f, y);
    }
    std::erase_if(diff.ranks, [&](const auto& pair) {
      return pair.first.is_zero() || el_is_zero(pair.second, t.codomain);
    });
  }

  // Refutation first: a concrete negative row settles the answer. Rows for n
  // past every start repeat their structure with period `joint`.
  Index settle = diff.diag.start();
  for (const auto& [f, y] : diff.ranks)
    if (const auto* sy = std::get_if<SeqElement>(&y)) settle = std::max(settle, sy->start());
  Index joint = tail_lcm_modulus(diff.diag.tail());
  for (const auto& [f, y] : diff.ranks)
    if (const auto* sy = std::get_if<SeqElement>(&y))
      joint = std::lcm(joint, tail_lcm_modulus(sy->tail()));
  for (Index n = 1; n < settle + 2 * joint; ++n)
    if (!row_functional(diff, n).is_positive()) return false;

  // Proof for all n. Off-diagonal row weights are sum_k y_k(n) w_k(j): every
  // rank pair must be sign-definite nonnegative (y_k >= 0 and f_k >= 0, or
  // both reversed), which makes each summand nonnegative at every (n, j).
  for (const auto& [f, y] : diff.ranks) {
    const bool y_pos = el_leq(el_zero(t.codomain), y, t.codomain);
    const bool y_neg = el_leq(y, el_zero(t.codomain), t.codomain);
    const bool f_pos = f.is_positive();
    const bool f_neg = functional_scale(Rat(-1), f).is_positive();
    if (!((y_pos && f_pos) || (y_neg && f_neg)))
      throw UnsupportedOperator("op_leq: mixed-sign rank pair outside the decidable fragment");
  }
  // The limit coefficient of row n is sum_k y_k(n) lc_k: a tail pattern in n.
  SeqElement lim_line = SeqElement::zero();
  // The diagonal coordinate of row n is diag(n) + sum_k y_k(n) w_k(n).
  SeqElement diag_line = diff.diag;
  for (const auto& [f, y] : diff.ranks) {
    if (const auto* sy = std::get_if<SeqElement>(&y)) {
      diag_line = seq_add(diag_line, seq_mul(*sy, f.weights));
      lim_line = seq_add(lim_line, seq_scale(f.lim_coeff, *sy));
    } else {
      diag_line = seq_add(diag_line, seq_scale(std::get<Rat>(y), f.weights));
      lim_line = seq_add(lim_line, SeqElement::constant(std::get<Rat>(y) * f.lim_coeff));
    }
  }
  if (!seq_leq(SeqElement::zero(), diag_line)) return false;
  if (!seq_leq(SeqElement::zero(), lim_line)) return false;
  return true;
}

/// A diagonal whose coefficient pattern is finitely supported is a sum of
/// rank-one operators coeff_j e_j* (x) e_j.
std::optional<OpFiniteRank> diagonal_as_finite_rank(const OpDiagonal& d) {
  if (!d.coeffs.finitely_supported()) return std::nullopt;
  OpFiniteRank out;
  for (const auto& [j, c] : d.coeffs.overrides())
    out.ranks.emplace_back(DualFunctionalC(SeqElement::unit(j), Rat(0)),
                           Element(SeqElement::unit(j, c)));
  return out;
}

OpNormResult op_norm_dist(const OperatorDesc& a, const OperatorDesc& b) {
  if (a.domain != b.domain || a.codomain != b.codomain)
    throw DomainMismatch("op_norm_dist: mismatched spaces");
  const auto na = op_normal_form(a);
  const auto nb = op_normal_form(b);
  if (!na || !nb) throw UnsupportedOperator("op_norm_dist needs diagonal-plus-finite-rank shapes");
  const SeqElement diag = seq_sub(na->diag, nb->diag);
  std::vector<std::pair<DualFunctionalC, Element>> ranks = na->ranks;
  for (const auto& [f, y] : nb->ranks) ranks.emplace_back(f, el_scale(Rat(-1), y));

  if (ranks.empty()) return {seq_sup_norm(diag), true};

  // Finite-rank bound sum ||f_k|| ||y_k||; exact for a single rank with the
  // diagonal part zero.
  Rat bound(0);
  for (const auto& [f, y] : ranks) bound += f.norm() * el_sup_norm(y);
  if (diag.is_zero() && ranks.size() == 1) return {bound, true};
  bound += seq_sup_norm(diag);
  return {bound, false};
}

PreimageResult diagonal_preimage(const OpDiagonal& d, const SeqElement& y, SeqSpace domain_tag) {
  // Coefficients must never vanish.
  for (Index j = 1; j < d.coeffs.start(); ++j)
    if (d.coeffs.value_at(j) == 0) throw ZeroCoefficient();
  {
    const auto sig = eventual_sign(d.coeffs.tail());
    const Index l = tail_lcm_modulus(d.coeffs.tail());
    for (Index r = 0; r < l; ++r) {
      bool covered = false;
      for (const auto& t : d.coeffs.tail())
        if (mask_intersect(t.mask, ResidueMask(l, r))) covered = true;
      if (!covered) throw ZeroCoefficient();
    }
    for (const auto& cs : sig.classes)
      if (cs.sign == 0) throw ZeroCoefficient();
  }

  const Index start = std::max({y.start(), d.coeffs.start()});
  std::map<Index, Rat> ov;
  for (Index j = 1; j < start; ++j) {
    const Rat c = d.coeffs.value_at(j);
    if (c == 0) throw ZeroCoefficient();
    const Rat v = y.value_at(j) / c;
    if (v != 0) ov[j] = v;
  }
  TailList tail;
  for (const auto& ty : y.tail()) {
    for (const auto& tc : d.coeffs.tail()) {
      const auto meet = mask_intersect(ty.mask, tc.mask);
      if (!meet) continue;
      const Rat ratio = ty.ratio / tc.ratio;
      if (ratio > 1) {
        PreimageResult out;
        out.certificate = NoPreimage{"coordinatewise solution x(n) = y(n)/coeff(n) grows like (" +
                                     rat_str(ratio) + ")^n on class " + meet->str() +
                                     ": unbounded, outside every sequence space"};
        return out;
      }
      tail.emplace_back(ty.coeff / tc.coeff, ratio, *meet);
    }
  }
  SeqElement x(start, std::move(ov), std::move(tail));
  const auto membership = seq_membership(x, domain_tag);
  if (membership.verified) {
    PreimageResult out;
    out.preimage = std::move(x);
    return out;
  }
  const auto escape = space_escape(Element(x), [&] {
    switch (domain_tag) {
      case SeqSpace::C00: return Space::C00;
      case SeqSpace::C0: return Space::C0;
      case SeqSpace::C: return Space::C;
      case SeqSpace::LInf: return Space::LInf;
    }
    return Space::LInf;
  }());
  PreimageResult out;
  out.certificate =
      NoPreimage{"coordinatewise solution escapes the domain: " + (escape ? escape->reason : "")};
  return out;
}

std::pair<OpFiniteRank, OpFiniteRank> finite_rank_decompose(const OpFiniteRank& t) {
  OpFiniteRank pos, neg;
  for (const auto& [f, y] : t.ranks) {
    pos.ranks.emplace_back(functional_positive_part(f), y);
    neg.ranks.emplace_back(functional_negative_part(f), y);
  }
  return {pos, neg};
}

FiniteRankLeviResult finite_rank_levi_limit(const OperatorDesc& op, const ElementSequence& s,
                                            const std::optional<Rat>& bound) {
  const auto* fr = std::get_if<OpFiniteRank>(&op.kind);
  if (!fr) throw UnsupportedOperator("finite_rank_levi_limit needs a finite-rank operator");
  const Monotonicity mono = sequence_monotonicity(s);
  if (mono != Monotonicity::Increasing && mono != Monotonicity::Constant) throw NotMonotone();
  if (bound) {
    const auto chk = check_increasing_bounded(s, *bound, 32);
    if (!chk.increasing) throw NotMonotone();
    if (!chk.bounded) throw NotBounded();
  }

  FiniteRankLeviResult out{.pos_limits = {},
                           .neg_limits = {},
                           .limit = el_zero(op.codomain),
                           .witness = ElementSequence::constant(op.codomain, el_zero(op.codomain)),
                           .preimage = std::nullopt,
                           .no_preimage = std::nullopt};
  std::vector<std::pair<ScalarPattern, Element>> residual_parts;
  for (const auto& [f, y] : fr->ranks) {
    const DualFunctionalC fp = functional_positive_part(f);
    const DualFunctionalC fm = functional_negative_part(f);
    const ScalarPattern vp = functional_on_sequence(fp, s);
    const ScalarPattern vm = functional_on_sequence(fm, s);
    const auto limit_of = [](const ScalarPattern& p) {
      const auto limits = seq_class_limits(p);
      Rat l = limits.empty() ? Rat(0) : limits[0].limit;
      for (const auto& cl : limits)
        if (cl.limit != l) throw NotMonotone();  // monotone bounded patterns converge uniformly
      return l;
    };
    const Rat a = limit_of(vp);
    const Rat b = limit_of(vm);
    out.pos_limits.push_back(a);
    out.neg_limits.push_back(b);
    out.limit = el_add(out.limit, el_scale(a - b, y));
    // residual: (a - v+(n)) + (b - v-(n)) against |y|
    const ScalarPattern res = seq_add(seq_sub(ScalarPattern::constant(a), vp),
                                      seq_sub(ScalarPattern::constant(b), vm));
    residual_parts.emplace_back(res, el_abs(y));
  }
  out.witness = ElementSequence::pattern_combo(op.codomain, std::move(residual_parts));

  // Preimage: solve T x = limit within span{unit, e_1..e_J}.
  out.preimage = solve_preimage_in_span(op, out.limit, 12);
  if (!out.preimage)
    out.no_preimage = NoPreimage{"no solution of T x = limit in span{1, e_1..e_12} of the domain"};
  return out;
}

std::optional<Element> solve_preimage_in_span(const OperatorDesc& op, const Element& target,
                                              Index jmax) {
  // Candidate basis of the domain grammar.
  std::vector<SeqElement> basis;
  if (op.domain == Space::C || op.domain == Space::LInf) basis.push_back(SeqElement::ones());
  for (Index j = 1; j <= jmax; ++j) basis.push_back(SeqElement::unit(j));

  // Images; target and images must live in a common coordinate description:
  // canonical positions = override indices + tail slots (ratio, class).
  std::vector<Element> images;
  for (const auto& v : basis) images.push_back(op_apply(op, Element(v)));

  // Assemble linear equations over positions appearing anywhere.
  struct Position {
    bool is_tail;
    Index index;  // override index
    Rat ratio;
    ResidueMask mask{1, 0};
    bool operator<(const Position& o) const {
      if (is_tail != o.is_tail) return is_tail < o.is_tail;
      if (!is_tail) return index < o.index;
      if (ratio != o.ratio) return ratio < o.ratio;
      if (mask.modulus != o.mask.modulus) return mask.modulus < o.mask.modulus;
      return mask.residue < o.mask.residue;
    }
  };

  const auto positions_of = [](const Element& e, std::map<Position, Rat>& row, const Rat& scale) {
    if (const auto* r = std::get_if<Rat>(&e)) {
      row[Position{false, 0, Rat(0)}] += scale * (*r);
      return true;
    }
    const auto* se = std::get_if<SeqElement>(&e);
    if (!se) return false;
    // Expand starts: use value positions up to a joint start plus tail slots.
    for (Index j = 1; j < se->start(); ++j) {
      const Rat v = se->value_at(j);
      if (v != 0) row[Position{false, j, Rat(0)}] += scale * v;
    }
    for (const auto& t : se->tail())
      row[Position{true, 0, t.ratio, t.mask}] += scale * t.coeff;
    return true;
  };

  // The position description must align exactly: normalize every element to
  // a COMMON start so override positions match.
  Index joint_start = 1;
  const auto bump_start = [&](const Element& e) {
    if (const auto* se = std::get_if<SeqElement>(&e)) joint_start = std::max(joint_start, se->start());
  };
  bump_start(target);
  for (const auto& im : images) bump_start(im);

  const auto renormalize = [&](const Element& e) -> Element {
    if (const auto* se = std::get_if<SeqElement>(&e)) {
      std::map<Index, Rat> ov;
      for (Index j = 1; j < joint_start; ++j) {
        const Rat v = se->value_at(j);
        if (v != 0) ov[j] = v;
      }
      // Tail applies from joint_start on; reconstruct with the same tail.
      return SeqElement(joint_start, std::move(ov), se->tail());
    }
    return e;
  };

  std::map<Position, Rat> target_row;
  if (!positions_of(renormalize(target), target_row, Rat(1))) return std::nullopt;
  std::vector<std::map<Position, Rat>> cols;
  for (const auto& im : images) {
    std::map<Position, Rat> col;
    if (!positions_of(renormalize(im), col, Rat(1))) return std::nullopt;
    cols.push_back(std::move(col));
  }

  // Collect all positions.
  std::vector<Position> all;
  for (const auto& [p, v] : target_row) all.push_back(p);
  for (const auto& col : cols)
    for (const auto& [p, v] : col) all.push_back(p);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Position& a, const Position& b) { return !(a < b) && !(b < a); }),
            all.end());

  // Gaussian elimination on the (positions x basis) system.
  const size_t rows = all.size(), ncols = cols.size();
  std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(ncols + 1, Rat(0)));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < ncols; ++j) {
      const auto it = cols[j].find(all[i]);
      if (it != cols[j].end()) m[i][j] = it->second;
    }
    const auto it = target_row.find(all[i]);
    if (it != target_row.end()) m[i][ncols] = it->second;
  }

  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < ncols && rank < rows; ++col) {
    size_t sel = rank;
    while (sel < rows && m[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[rank]);
    const Rat p = m[rank][col];
    for (size_t j = col; j <= ncols; ++j) m[rank][j] /= p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i][col] == 0) continue;
      const Rat f = m[i][col];
      for (size_t j = col; j <= ncols; ++j) m[i][j] -= f * m[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (size_t i = rank; i < rows; ++i)
    if (m[i][ncols] != 0) return std::nullopt;  // inconsistent

  std::vector<Rat> coeff(ncols, Rat(0));
  for (size_t i = 0; i < rank; ++i) coeff[pivot_col[i]] = m[i][ncols];

  SeqElement x = SeqElement::zero();
  for (size_t j = 0; j < ncols; ++j)
    if (coeff[j] != 0) x = seq_add(x, seq_scale(coeff[j], basis[j]));
  // Exact verification plus domain membership.
  const Element image = op_apply(op, Element(x));
  if (!el_eq(image, target, op.codomain)) return std::nullopt;
  if (space_is_sequence(op.domain) &&
      !seq_membership(x, space_seq_tag(op.domain)).verified)
    return std::nullopt;
  return Element(x);
}

std::string op_str(const OperatorDesc& op) {
  std::ostringstream os;
  if (!op.name.empty()) os << op.name << ": ";
  if (const auto* d = std::get_if<OpDiagonal>(&op.kind)) os << "diagonal " << d->coeffs.str();
  else if (const auto* fr = std::get_if<OpFiniteRank>(&op.kind))
    os << "finite rank (" << fr->ranks.size() << ")";
  else if (std::holds_alternative<OpEmbedZeroPhi>(op.kind)) os << "(phi,psi) -> (0,phi)";
  else if (std::holds_alternative<OpIdentity>(op.kind)) os << "identity";
  else if (const auto* ev = std::get_if<OpEvalFunctional>(&op.kind))
    os << "a -> a(" << ev->k << ")";
  else if (const auto* sc = std::get_if<OpScaled>(&op.kind))
    os << rat_str(sc->alpha) << " * [" << op_str(*sc->inner) << "]";
  else {
    const auto& sum = std::get<OpSum>(op.kind);
    os << "[" << op_str(*sum.lhs) << "] + [" << op_str(*sum.rhs) << "]";
  }
  os << " : " << space_name(op.domain) << " -> " << space_name(op.codomain);
  return os.str();
}

}  // namespace levilab
