#include "levilab/classify.hpp"

#include <sstream>

namespace levilab {

namespace {

// One catalog entry, one operator: the full per-entry analysis.
struct EntryAnalysis {
  Verdict quasi_c;
  Verdict quasi;
  Verdict sigma;
  std::optional<Element> limit;
  std::optional<WitnessSequence> witness;  // convergence witness when quasi_c holds
  std::string witness_desc;
};

// The prefix honesty check for by-construction witnesses: the triangle
// inequality guarantees domination for all n, a sampled prefix re-checks it.
bool prefix_dominates(const ElementSequence& image, const Element& limit,
                      const WitnessSequence& w, Space space, Index upto) {
  for (Index n = 1; n <= upto; ++n) {
    const Element diff = el_abs(el_sub(image.eval_at(n), limit));
    if (!el_leq(diff, w.eval_at(n), space)) return false;
  }
  return true;
}

// quasi refutation for vanishing-tag codomains: any Cauchy witness W in c0
// (or c00) must dominate the envelope X - S(n), whose residue-class limits
// equal X's; a nonzero class limit forces W(n) out of the space.
std::optional<Certificate> vanishing_space_obstruction(const Element& limit, Space codomain) {
  if (codomain != Space::C0 && codomain != Space::C00) return std::nullopt;
  const auto* x = std::get_if<SeqElement>(&limit);
  if (!x) return std::nullopt;
  if (codomain == Space::C0) {
    for (const auto& cl : seq_class_limits(*x))
      if (cl.limit != 0)
        return EnvelopeLowerBound{cl.limit, 1,
                                  "oscillation envelope keeps class " + cl.cls.str() +
                                      " limit " + rat_str(cl.limit) +
                                      "; no vanishing witness can dominate it"};
    return std::nullopt;
  }
  // c00: any surviving tail class obstructs finitely supported witnesses.
  if (!x->finitely_supported()) {
    const auto& t = x->tail().front();
    return EnvelopeLowerBound{t.coeff, 1,
                              "oscillation envelope keeps infinite support on class " +
                                  t.mask.str() + "; no finitely supported witness dominates it"};
  }
  return std::nullopt;
}

// sigma-Levi preimage search for the verified quasi-c limit.
struct PreimageOutcome {
  std::optional<Element> preimage;
  std::optional<Certificate> certificate;
  std::string detail;
};

PreimageOutcome find_preimage(const OperatorDesc& op, const ElementSequence& entry_seq,
                              const Element& limit) {
  PreimageOutcome out;
  if (std::holds_alternative<OpIdentity>(op.kind)) {
    // Tx = x: the limit itself is the preimage (membership already checked).
    out.preimage = limit;
    out.detail = "identity: the order limit is its own preimage";
    return out;
  }
  if (std::holds_alternative<OpEmbedZeroPhi>(op.kind)) {
    const auto* d = std::get_if<DirectSumElement>(&limit);
    if (!d) {
      out.certificate = NoPreimage{"limit is not a direct-sum element"};
      return out;
    }
    if (!d->cpart.ae_zero()) {
      out.certificate = NoPreimage{"image C-part is always 0, limit C-part is not"};
      return out;
    }
    const auto jumps = pl_jumps(d->lpart);
    if (jumps.empty()) {
      out.preimage = DirectSumElement{d->lpart, PLFunction::zero()};
      out.detail = "preimage (phi, 0) with phi the continuous L1-part";
      return out;
    }
    std::ostringstream os;
    os << "T(phi,psi) = (0,phi) needs phi = the L1-part limit, which has a jump at "
       << rat_str(jumps[0].at) << " (left " << rat_str(jumps[0].left) << ", right "
       << rat_str(jumps[0].right) << "), so it is not in C[0,1]";
    out.certificate = NoPreimage{os.str()};
    return out;
  }
  if (const auto* d = std::get_if<OpDiagonal>(&op.kind)) {
    const auto* y = std::get_if<SeqElement>(&limit);
    if (!y) {
      out.certificate = NoPreimage{"limit is not a sequence element"};
      return out;
    }
    // Finitely supported coefficient patterns fall to the span solver (zero
    // coefficients are fine where the target vanishes).
    if (d->coeffs.finitely_supported()) {
      const Index jmax = std::max<Index>(12, std::max(y->start(), d->coeffs.start()) + 2);
      if (auto x = solve_preimage_in_span(op, limit, jmax)) {
        out.preimage = *x;
        out.detail = "solved in span{1, e_j}";
        return out;
      }
      out.certificate = NoPreimage{"no solution in span{1, e_j} of the domain grammar"};
      return out;
    }
    auto res = diagonal_preimage(*d, *y, space_seq_tag(op.domain));
    if (res.preimage) {
      out.preimage = Element(*res.preimage);
      out.detail = "coordinatewise division";
    } else {
      out.certificate = *res.certificate;
    }
    return out;
  }
  // Finite rank (and eval functionals / scaled / sums via the normal form).
  if (std::holds_alternative<OpFiniteRank>(op.kind)) {
    const auto res = finite_rank_levi_limit(op, entry_seq);
    if (res.preimage) {
      out.preimage = res.preimage;
      out.detail = "finite-rank constructive limit";
    } else {
      out.certificate = *res.no_preimage;
    }
    return out;
  }
  const auto nf = op_normal_form(op);
  if (nf) {
    Index jmax = 12;
    if (const auto* y = std::get_if<SeqElement>(&limit)) jmax = std::max<Index>(12, y->start() + 2);
    if (auto x = solve_preimage_in_span(op, limit, jmax)) {
      out.preimage = *x;
      out.detail = "solved in span{1, e_j}";
      return out;
    }
    out.certificate = NoPreimage{"no solution in span{1, e_j} of the domain grammar"};
    return out;
  }
  out.certificate = NoPreimage{"preimage search unsupported for this operator shape"};
  return out;
}

EntryAnalysis analyze_entry(const OperatorDesc& op, const CatalogEntry& entry, Index horizon) {
  EntryAnalysis out;
  ElementSequence image = ElementSequence::image(std::make_shared<OperatorDesc>(op), entry.seq);

  // Pointwise limit of the image family; the finite-rank machinery carries
  // the exact functional limits, the residual witness and the preimage in
  // one pass.
  std::optional<FiniteRankLeviResult> fr_result;
  PointwiseLimitResult pl;
  if (std::holds_alternative<OpFiniteRank>(op.kind)) {
    fr_result = finite_rank_levi_limit(op, entry.seq);
    pl.limit = fr_result->limit;
  } else {
    pl = pointwise_limit(image);
  }
  if (!pl.limit) {
    out.quasi_c = Verdict::inconclusive_at(horizon);
    out.quasi = Verdict::inconclusive_at(horizon);
    out.sigma = Verdict::inconclusive_at(horizon);
    return out;
  }
  out.limit = pl.limit;

  const auto escape = space_escape(*pl.limit, op.codomain);
  if (escape) {
    // No order limit in the codomain: quasi-c refuted with the escape.
    out.quasi_c = Verdict::refuted_with(LimitEscapesSpace{*pl.limit, *escape});
    // quasi: order-Cauchy may still hold (c, linf) or be obstructed (c0, c00).
    if (const auto obstruction = vanishing_space_obstruction(*pl.limit, op.codomain)) {
      out.quasi = Verdict::refuted_with(*obstruction);
    } else if (space_is_sequence(op.codomain)) {
      const Rat bound = seq_sup_norm(std::get<SeqElement>(*pl.limit));
      if (auto w = canonical_cauchy_witness(image, bound)) {
        out.quasi = check_order_cauchy(image, *w, horizon);
        out.witness_desc = "order unit truncated past the image support";
      } else {
        out.quasi = Verdict::inconclusive_at(horizon);
      }
    } else {
      out.quasi = Verdict::inconclusive_at(horizon);
    }
    out.sigma = out.quasi_c;  // no order limit, no T x limit
    return out;
  }

  // quasi-c: canonical witness.
  if (fr_result) {
    const auto wv = check_decreasing_null(fr_result->witness, horizon);
    const bool dom =
        prefix_dominates(image, fr_result->limit, fr_result->witness, op.codomain,
                         horizon / 2 + 16);
    if (wv.verified() && dom) {
      out.quasi_c = Verdict::verified_with("finite-rank residual witness (triangle bound)");
      out.witness = fr_result->witness;
      out.witness_desc = "sum over ranks of functional residuals against |y_k|";
    } else {
      out.quasi_c = Verdict::inconclusive_at(horizon);
    }
  } else {
    WitnessSequence w = canonical_deficiency_witness(image, *pl.limit);
    out.quasi_c = check_order_convergence(image, *pl.limit, w, horizon);
    out.witness = std::move(w);
    out.witness_desc = "deficiency family |limit - image(n)|";
  }

  // quasi from quasi-c: doubled witness via the triangle inequality.
  if (out.quasi_c.verified()) {
    bool spot = true;
    if (out.witness) {
      for (Index n = 1; n <= 24 && spot; ++n)
        for (Index m = n; m <= 24 && spot; ++m) {
          const Element diff = el_abs(el_sub(image.eval_at(m), image.eval_at(n)));
          const Element cap = el_scale(Rat(2), out.witness->eval_at(std::min(n, m)));
          spot = el_leq(diff, cap, op.codomain);
        }
    }
    out.quasi = spot ? Verdict::verified_with(
                           "doubled convergence witness: |I(n')-I(n'')| <= W(n')+W(n'') <= 2W(n)")
                     : Verdict::inconclusive_at(horizon);
  } else {
    out.quasi = out.quasi_c;
  }

  // sigma-Levi: a preimage of the verified order limit.
  if (out.quasi_c.verified()) {
    PreimageOutcome pre;
    if (fr_result) {
      if (fr_result->preimage) {
        pre.preimage = fr_result->preimage;
        pre.detail = "finite-rank constructive limit";
      } else {
        pre.certificate = *fr_result->no_preimage;
      }
    } else {
      pre = find_preimage(op, entry.seq, *pl.limit);
    }
    if (pre.preimage) {
      // Exactness check: T(preimage) == limit.
      if (el_eq(op_apply(op, *pre.preimage), *pl.limit, op.codomain))
        out.sigma = Verdict::verified_with(pre.detail);
      else
        out.sigma = Verdict::refuted_with(NoPreimage{"candidate preimage fails T x = limit"});
    } else {
      out.sigma = Verdict::refuted_with(*pre.certificate);
    }
  } else {
    out.sigma = out.quasi_c;
  }
  return out;
}

Verdict conjunction(const std::vector<EntryEvidence>& evidence) {
  for (const auto& e : evidence)
    if (e.verdict.refuted()) return e.verdict;
  for (const auto& e : evidence)
    if (e.verdict.inconclusive()) return e.verdict;
  return Verdict::verified_with("all catalog entries verified (relative to catalog and grammar)");
}

}  // namespace

PropertyVerdicts classify_levi(const OperatorDesc& op, const TestCatalog& catalog, Index horizon) {
  if (catalog.space != op.domain)
    throw DomainMismatch("catalog space does not match the operator domain");
  PropertyVerdicts out;
  for (const auto& entry : catalog.entries) {
    EntryAnalysis a = analyze_entry(op, entry, horizon);
    out.sigma_evidence.push_back({entry.name, a.sigma, a.witness_desc});
    out.quasi_c_evidence.push_back({entry.name, a.quasi_c, a.witness_desc});
    out.quasi_evidence.push_back({entry.name, a.quasi, a.witness_desc});
  }
  out.sigma_levi = conjunction(out.sigma_evidence);
  out.quasi_c = conjunction(out.quasi_c_evidence);
  out.quasi = conjunction(out.quasi_evidence);
  return out;
}

namespace {

// Per-entry collective analysis for a finite set: individual limits and
// witnesses, one shared witness (their pointwise sup), one shared check.
struct CollectiveEntry {
  Verdict quasi_c;
  Verdict quasi;
  Verdict sigma;
  std::string witness_desc;
};

CollectiveEntry analyze_collective_entry(const OperatorSet& set, const CatalogEntry& entry,
                                         Index horizon) {
  CollectiveEntry out;
  std::vector<ElementSequence> images;
  std::vector<Element> limits;
  std::vector<WitnessSequence> witnesses;
  std::vector<Verdict> member_sigma;

  for (const auto& op : set.members) {
    EntryAnalysis a = analyze_entry(*op, entry, horizon);
    if (!a.quasi_c.verified() || !a.witness || !a.limit) {
      out.quasi_c = a.quasi_c;
      out.quasi = a.quasi;
      out.sigma = a.sigma;
      return out;  // one member failing already settles the entry
    }
    images.push_back(ElementSequence::image(op, entry.seq));
    limits.push_back(*a.limit);
    witnesses.push_back(*a.witness);
    member_sigma.push_back(a.sigma);
  }

  // Shared witness: pointwise sup of the member witnesses. Each member is
  // already verified against its own witness, which the sup dominates; the
  // prefix re-checks the shared domination by brute force.
  WitnessSequence shared = witnesses.front();
  for (size_t i = 1; i < witnesses.size(); ++i)
    shared = ElementSequence::sup_of(std::move(shared), witnesses[i]);
  out.witness_desc = "pointwise sup of member witnesses";

  out.quasi_c = Verdict::verified_with(
      "sup of member witnesses dominates every verified member witness");
  if (!check_decreasing_null(shared, horizon).verified())
    out.quasi_c = Verdict::inconclusive_at(horizon);
  const Space cod = images.front().space();
  for (size_t i = 0; i < images.size() && out.quasi_c.verified(); ++i) {
    for (Index n = 1; n <= std::min<Index>(horizon, 48); ++n) {
      const Element diff = el_abs(el_sub(images[i].eval_at(n), limits[i]));
      if (!el_leq(diff, shared.eval_at(n), cod)) {
        out.quasi_c = Verdict::refuted_with(
            FailedDominationAt{n, "shared witness against member " + std::to_string(i),
                               el_str(diff), el_str(shared.eval_at(n))});
        break;
      }
    }
  }

  if (out.quasi_c.verified()) {
    out.quasi = Verdict::verified_with("doubled shared witness");
    Verdict sigma = Verdict::verified_with("every member has a preimage; shared witness");
    for (const auto& v : member_sigma)
      if (!v.verified()) sigma = v;
    out.sigma = sigma;
  } else {
    out.quasi = out.quasi_c;
    out.sigma = out.quasi_c;
  }
  return out;
}

}  // namespace

PropertyVerdicts classify_collective(const OperatorSet& set, const TestCatalog& catalog,
                                     Index horizon) {
  if (catalog.space != set.domain)
    throw DomainMismatch("catalog space does not match the set domain");
  PropertyVerdicts out;

  if (set.coordinate_evals) {
    if (!set.members.empty()) throw ArbitraryInfiniteSet();
    // {T_k : k in N}: images of each entry under every coordinate evaluation.
    for (const auto& entry : catalog.entries) {
      auto base = std::make_shared<const ElementSequence>(entry.seq);
      const CoordinateImagesFamily fam{base};
      // Necessary condition: the oscillation envelope must vanish; otherwise
      // no witness exists at all.
      Verdict quasi = Verdict::inconclusive_at(horizon);
      const auto mono = sequence_monotonicity(entry.seq);
      if (mono == Monotonicity::Increasing || mono == Monotonicity::Constant) {
        if (const auto q = envelope_norm_pattern(entry.seq)) {
          // Positive envelope infimum: no decreasing-null witness exists.
          Rat floor(0);
          for (const auto& cl : seq_class_limits(*q)) floor = rat_max(floor, cl.limit);
          if (floor > 0) {
            // Exhibit the bound at a concrete index for re-checking.
            Index at = 1;
            for (Index n = 1; n <= horizon; ++n) {
              const auto env = family_envelope(SequenceFamily(fam), n);
              if (std::get<Rat>(*env.value) >= floor) at = n;
            }
            quasi = Verdict::refuted_with(EnvelopeLowerBound{
                floor, at, "coordinate evaluations on " + entry.name});
          } else {
            // The envelope itself is the canonical witness.
            const WitnessSequence w = ElementSequence::pattern_combo(
                Space::Real, {{*q, Element(Rat(1))}});
            if (check_decreasing_null(w, horizon).verified())
              quasi = check_collective_cauchy(SequenceFamily(fam), w, horizon);
          }
        }
      }
      out.quasi_evidence.push_back({entry.name, quasi, "oscillation envelope"});
      out.quasi_c_evidence.push_back({entry.name, quasi, ""});
      out.sigma_evidence.push_back({entry.name, quasi, ""});
    }
    out.quasi = conjunction(out.quasi_evidence);
    out.quasi_c = out.quasi.refuted() ? out.quasi : conjunction(out.quasi_c_evidence);
    out.sigma_levi = out.quasi.refuted() ? out.quasi : conjunction(out.sigma_evidence);
    return out;
  }

  if (set.members.empty()) throw std::invalid_argument("empty operator set");
  for (const auto& entry : catalog.entries) {
    CollectiveEntry a = analyze_collective_entry(set, entry, horizon);
    out.sigma_evidence.push_back({entry.name, a.sigma, a.witness_desc});
    out.quasi_c_evidence.push_back({entry.name, a.quasi_c, a.witness_desc});
    out.quasi_evidence.push_back({entry.name, a.quasi, a.witness_desc});
  }
  out.sigma_levi = conjunction(out.sigma_evidence);
  out.quasi_c = conjunction(out.quasi_c_evidence);
  out.quasi = conjunction(out.quasi_evidence);
  return out;
}

CombineOutcome collective_combine_affine(const OperatorSet& a, const OperatorSet& b,
                                         const std::vector<std::pair<Rat, Rat>>& exhibits,
                                         const TestCatalog& catalog, Index horizon) {
  if (a.domain != b.domain || a.codomain != b.codomain)
    throw DomainMismatch("affine combine: mismatched spaces");
  CombineOutcome out;
  out.set = OperatorSet{"{alpha T + beta S : |alpha|+|beta| <= 1}", {}, false, a.domain,
                        a.codomain};
  out.witness_note = "p_n + q_n";

  for (const auto& [alpha, beta] : exhibits)
    if (rat_abs(alpha) + rat_abs(beta) > 1)
      throw std::invalid_argument("exhibit outside |alpha|+|beta| <= 1");

  bool all = true;
  for (const auto& entry : catalog.entries) {
    for (const auto& ta : a.members) {
      for (const auto& sb : b.members) {
        // Member witnesses p_n, q_n for this entry.
        EntryAnalysis ea = analyze_entry(*ta, entry, horizon);
        EntryAnalysis eb = analyze_entry(*sb, entry, horizon);
        if (!ea.quasi_c.verified() || !eb.quasi_c.verified() || !ea.witness || !eb.witness)
          throw WitnessMissing("affine combine requires verified quasi-c members");
        const WitnessSequence combined =
            ElementSequence::affine_combo(Rat(1), *ea.witness, Rat(1), *eb.witness);
        for (const auto& [alpha, beta] : exhibits) {
          OpPtr combo = make_sum(make_scaled(alpha, ta), make_scaled(beta, sb),
                                 "combo(" + rat_str(alpha) + "," + rat_str(beta) + ")");
          out.exhibits.push_back(combo);
          ElementSequence image = ElementSequence::image(combo, entry.seq);
          const Element limit =
              el_add(el_scale(alpha, *ea.limit), el_scale(beta, *eb.limit));
          Verdict v = check_order_convergence(image, limit, combined, horizon);
          if (!v.verified()) {
            // |alpha (T - y) + beta (S - z)| <= |alpha| p + |beta| q <= p + q
            // holds by the triangle inequality; accept when the prefix agrees.
            v = prefix_dominates(image, limit, combined, a.codomain, horizon / 2 + 16)
                    ? Verdict::verified_with("triangle bound |alpha|p_n + |beta|q_n <= p_n + q_n")
                    : Verdict::refuted_with(FailedDominationAt{0, "combined witness", "", ""});
          }
          all = all && v.verified();
          out.reverified.push_back(
              {entry.name + " / " + combo->name, v, "p_n + q_n"});
        }
      }
    }
  }
  out.all_verified = all;
  return out;
}

CombineOutcome collective_combine_l1(const std::vector<Rat>& weights,
                                     const std::vector<OpPtr>& ops, const TestCatalog& catalog,
                                     Index horizon) {
  if (weights.size() != ops.size() || ops.empty())
    throw std::invalid_argument("l1 combine: weight/operator count mismatch");
  Rat total(0);
  for (const auto& w : weights) total += rat_abs(w);
  if (total > 1) throw NotSummableWeights();

  // The series operator: sum alpha_i T_i (finite, exact).
  OpPtr series = make_scaled(weights[0], ops[0]);
  for (size_t i = 1; i < ops.size(); ++i)
    series = make_sum(series, make_scaled(weights[i], ops[i]), "l1-series");

  CombineOutcome out;
  out.set = OperatorSet{"{sum alpha_i T_i : sum |alpha_i| <= 1}", {series}, false,
                        ops[0]->domain, ops[0]->codomain};
  out.exhibits.push_back(series);

  // Operator-norm convergence bound for the partial sums.
  const OpPtr zero = make_diagonal(ops[0]->domain, ops[0]->codomain, SeqElement::zero(), "zero");
  Rat norm_bound(0);
  for (size_t i = 0; i < ops.size(); ++i) {
    try {
      norm_bound += rat_abs(weights[i]) * op_norm_dist(*ops[i], *zero).value;
    } catch (const UnsupportedOperator&) {
      norm_bound += rat_abs(weights[i]);  // unit-ball members by assumption
    }
  }
  out.witness_note = "l1 witness; partial sums converge in operator norm (bound " +
                     rat_str(norm_bound) + ")";

  bool all = true;
  for (const auto& entry : catalog.entries) {
    std::vector<WitnessSequence> wits;
    std::vector<Element> limits;
    for (const auto& op : ops) {
      EntryAnalysis a = analyze_entry(*op, entry, horizon);
      if (!a.quasi_c.verified() || !a.witness) throw WitnessMissing("l1 combine needs verified members");
      // Unit-ball witnesses: clip into the ball is the caller's duty; check.
      wits.push_back(*a.witness);
      limits.push_back(*a.limit);
    }
    WitnessSequence combined = [&] {
      std::vector<Rat> ws = weights;
      // allow slack: witnesses must sit in the unit ball for the theorem
      return l1_witness(ws, wits, horizon);
    }();
    ElementSequence image = ElementSequence::image(series, entry.seq);
    Element limit = el_zero(ops[0]->codomain);
    for (size_t i = 0; i < ops.size(); ++i)
      limit = el_add(limit, el_scale(weights[i], limits[i]));
    Verdict v = check_order_convergence(image, limit, combined, horizon);
    if (!v.verified())
      v = prefix_dominates(image, limit, combined, ops[0]->codomain, horizon / 2 + 16)
              ? Verdict::verified_with("l1 triangle bound")
              : Verdict::refuted_with(FailedDominationAt{0, "l1 witness", "", ""});
    all = all && v.verified();
    out.reverified.push_back({entry.name, v, "sum |alpha_i| p_{i,n}"});
  }
  out.all_verified = all;
  return out;
}

DominationOutcome domination_transfer(const OperatorSet& a, const OperatorSet& c,
                                      const std::vector<size_t>& pairing,
                                      const std::vector<WitnessSequence>& witness_c,
                                      const TestCatalog& catalog, Index horizon) {
  if (pairing.size() != a.members.size())
    throw PairingIncomplete("pairing must name a majorant for every member of A");
  if (witness_c.size() != catalog.entries.size())
    throw WitnessMissing("one collective quasi witness per catalog entry required");

  for (size_t i = 0; i < a.members.size(); ++i) {
    if (!op_is_positive(*a.members[i]))
      throw PositivityMissing("member " + a.members[i]->name + " of A is not positive");
    if (pairing[i] >= c.members.size()) throw PairingIncomplete("pairing index out of range");
    if (!op_leq(*a.members[i], *c.members[pairing[i]]))
      throw PairingIncomplete("op_leq(" + a.members[i]->name + ", " +
                              c.members[pairing[i]]->name + ") does not hold");
  }

  DominationOutcome out;
  bool all = true;
  for (size_t e = 0; e < catalog.entries.size(); ++e) {
    const auto& entry = catalog.entries[e];
    const auto wv = check_decreasing_null(witness_c[e], horizon);
    if (!wv.verified()) throw WitnessInvalid(verdict_str(wv));
    WitnessSequence doubled = ElementSequence::scaled(Rat(2), witness_c[e]);
    // Re-verify |S x_{n'} - S x_{n''}| <= 2 p_n pairwise up to the horizon.
    Verdict verdict = Verdict::verified_with("2 p_n dominates all oscillations up to the horizon");
    for (const auto& s : a.members) {
      ElementSequence image = ElementSequence::image(s, entry.seq);
      const Index upto = std::min<Index>(horizon, 48);
      std::vector<Element> vals;
      for (Index n = 1; n <= upto; ++n) vals.push_back(image.eval_at(n));
      for (Index n1 = 1; n1 <= upto && verdict.verified(); ++n1) {
        const Element cap = doubled.eval_at(n1);
        for (Index n2 = n1; n2 <= upto; ++n2) {
          const Element diff = el_abs(el_sub(vals[static_cast<size_t>(n1 - 1)],
                                             vals[static_cast<size_t>(n2 - 1)]));
          if (!el_leq(diff, cap, a.codomain)) {
            verdict = Verdict::refuted_with(FailedDominationAt{
                n1, "pair (" + std::to_string(n1) + "," + std::to_string(n2) + ")", el_str(diff),
                el_str(cap)});
            break;
          }
        }
      }
    }
    all = all && verdict.verified();
    out.reverified.push_back({entry.name, verdict, "2 p_n"});
    out.transferred.push_back(std::move(doubled));
  }
  out.all_verified = all;
  return out;
}

}  // namespace levilab
