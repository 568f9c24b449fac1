// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is exact (rational equality); every budget is wall-clock.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "levilab/model.hpp"
#include "levilab/scenarios.hpp"

using namespace levilab;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  Index range(Index lo, Index hi) { return lo + static_cast<Index>(next() % (hi - lo + 1)); }
};

DualFunctionalC half_weights() {
  return DualFunctionalC(SeqElement::geometric(Rat(1), Rat(1, 2)), Rat(0));
}

// ---------------------------------------------------------------------------
// Criterion 1: the proper-inclusion scenario with exact certificates.
// ---------------------------------------------------------------------------
bool criterion_1(std::string& why) {
  const Scenario s = run_paper_scenario("embed_and_identity");
  if (!s.pass) {
    why = "scenario failed";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: the diagonal-to-c0 scenario: exact limit, preimage
// certificate, all sixteen operator-norm distances, non-closedness.
// ---------------------------------------------------------------------------
bool criterion_2(std::string& why) {
  const Scenario s = run_paper_scenario("diagonal_c0");
  if (!s.pass) {
    why = "scenario failed";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: the constructive finite-rank suite. For 20 deterministic
// pseudo-random operators of rank <= 4 and every catalog entry, the
// constructive limit sum (a_k - b_k) y_k equals an independent brute-force
// limit exactly, and the constructed witness verifies order convergence.
// ---------------------------------------------------------------------------

// Independent oracle: coordinatewise limit of the images, from plain partial
// sums plus one-term geometric remainders (no CRT machinery).
Rat oracle_functional_limit(const SeqElement& weights, const Rat& lim_coeff,
                            const ElementSequence& s) {
  // pointwise ambient limit of the entry
  const auto pl = pointwise_limit(s);
  const SeqElement x = std::get<SeqElement>(*pl.limit);
  // sum_j w(j) x(j): explicit to 400, then per-term remainders
  Rat acc(0);
  const Index cut = 400;
  for (Index j = 1; j <= cut; ++j) acc += weights.value_at(j) * x.value_at(j);
  for (const auto& tw : weights.tail()) {
    for (const auto& tx : x.tail()) {
      const auto meet = mask_intersect(tw.mask, tx.mask);
      if (!meet) continue;
      const Rat ratio = tw.ratio * tx.ratio;
      const Rat coeff = tw.coeff * tx.coeff;
      const Index first = meet->next_after(cut);
      acc += coeff * rat_pow(ratio, first) / (Rat(1) - rat_pow(ratio, meet->modulus));
    }
  }
  // limit part: catalog entries are prefix sums (c-limit 0), truncations
  // (c-limit of the base) or constants.
  if (lim_coeff != 0) {
    Rat lambda(0);
    if (const auto* g = std::get_if<GenConstant>(&s.gen()))
      lambda = seq_limit(std::get<SeqElement>(g->value));
    else if (const auto* g = std::get_if<GenTailTruncation>(&s.gen()))
      lambda = seq_limit(g->base);
    acc += lim_coeff * lambda;
  }
  return acc;
}

bool criterion_3(std::string& why) {
  const auto t0 = Clock::now();
  Rng rng(0xacc3);
  const TestCatalog cat = catalog_default(Space::C);
  static const Rat ratios[] = {Rat(1, 3), Rat(1, 2), Rat(2, 3)};

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<DualFunctionalC, Element>> ranks;
    const int rank = static_cast<int>(rng.range(1, 4));
    for (int k = 0; k < rank; ++k) {
      std::map<Index, Rat> ov;
      const Index start = rng.range(1, 3);
      for (Index j = 1; j < start; ++j) ov[j] = rat_make(rng.range(-3, 3), rng.range(1, 2));
      TailList tail;
      if (rng.range(0, 1))
        tail.emplace_back(rat_make(rng.range(-2, 2), rng.range(1, 2)), ratios[rng.range(0, 2)],
                          ResidueMask::all());
      DualFunctionalC f(SeqElement(start, std::move(ov), std::move(tail)),
                        rat_make(rng.range(-1, 1), 2));
      SeqElement y = rng.range(0, 1) ? SeqElement::unit(rng.range(1, 6))
                                     : SeqElement::geometric(Rat(1), Rat(1, 2));
      ranks.emplace_back(std::move(f), Element(std::move(y)));
    }
    const OpPtr op = make_finite_rank(Space::C, Space::C, ranks, "F" + std::to_string(trial));

    for (const auto& entry : cat.entries) {
      const auto res = finite_rank_levi_limit(*op, entry.seq, entry.bound);
      // oracle limit: sum over ranks of (independent functional limit) * y_k
      Element oracle = el_zero(Space::C);
      for (const auto& [f, y] : ranks) {
        const Rat a = oracle_functional_limit(f.weights, f.lim_coeff, entry.seq);
        oracle = el_add(oracle, el_scale(a, y));
      }
      if (!el_eq(res.limit, oracle, Space::C)) {
        why = "limit mismatch on " + entry.name + " for operator " + std::to_string(trial);
        return false;
      }
      // a_k - b_k must recombine to the oracle functional limits
      for (size_t k = 0; k < ranks.size(); ++k) {
        const Rat direct =
            oracle_functional_limit(ranks[k].first.weights, ranks[k].first.lim_coeff, entry.seq);
        if (res.pos_limits[k] - res.neg_limits[k] != direct) {
          why = "functional limit mismatch";
          return false;
        }
      }
      // the constructed witness verifies order convergence at horizon 128
      const auto image = ElementSequence::image(op, entry.seq);
      const auto wv = check_decreasing_null(res.witness, 128);
      if (!wv.verified()) {
        why = "constructed witness not decreasing-null on " + entry.name;
        return false;
      }
      for (Index n = 1; n <= 128; ++n) {
        const Element diff = el_abs(el_sub(image.eval_at(n), res.limit));
        if (!el_leq(diff, res.witness.eval_at(n), Space::C)) {
          why = "witness fails domination at n=" + std::to_string(n);
          return false;
        }
      }
    }
  }
  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(Clock::now() - t0).count();
  if (dt >= 30) {
    why = "over budget: " + std::to_string(dt) + " s";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: the collective-order-convergence proposition suite.
// ---------------------------------------------------------------------------
bool criterion_4(std::string& why) {
  const auto t0 = Clock::now();
  Rng rng(0xacc4);

  // union / linear / modulus / convex on 50 sampled family pairs
  static const Rat ratios[] = {Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4)};
  for (int trial = 0; trial < 50; ++trial) {
    const Rat ra = ratios[rng.range(0, 3)];
    const Rat rb = ratios[rng.range(0, 3)];
    const Rat ca = rat_make(rng.range(1, 3), rng.range(1, 2));
    const Rat cb = rat_make(rng.range(1, 3), rng.range(1, 2));
    const Index ma = rng.range(1, 2), sa = rng.range(0, ma - 1);
    const Index mb = rng.range(1, 2), sb = rng.range(0, mb - 1);

    const auto fam_a =
        ElementSequence::prefix_sum(Space::C0, TailTerm(ca, ra, ResidueMask(ma, sa)));
    const auto fam_b =
        ElementSequence::prefix_sum(Space::C0, TailTerm(cb, rb, ResidueMask(mb, sb)));
    const SeqElement lim_a = SeqElement::from_tail({TailTerm(ca, ra, ResidueMask(ma, sa))});
    const SeqElement lim_b = SeqElement::from_tail({TailTerm(cb, rb, ResidueMask(mb, sb))});
    const auto wit_a = ElementSequence::tail_truncation(Space::C0, seq_abs(lim_a), 1, 0);
    const auto wit_b = ElementSequence::tail_truncation(Space::C0, seq_abs(lim_b), 1, 0);

    // union verifies the union family
    const auto u = combine_witness(WitnessCombine::Union, wit_a, &wit_b);
    FiniteFamily both{{fam_a, fam_b}, {Element(lim_a), Element(lim_b)}};
    if (!check_collective(SequenceFamily(both), u).verified()) {
      why = "union combinator failed on trial " + std::to_string(trial);
      return false;
    }
    // linear: |alpha| P + |beta| Q dominates the affine-combined family
    const Rat alpha = rat_make(rng.range(-2, 2), 2);
    const Rat beta = rat_make(rng.range(-2, 2), 2);
    const auto lin = combine_witness(WitnessCombine::Linear, wit_a, &wit_b, alpha, beta);
    const auto combo = ElementSequence::affine_combo(alpha, fam_a, beta, fam_b);
    const Element combo_limit =
        el_add(el_scale(alpha, Element(lim_a)), el_scale(beta, Element(lim_b)));
    const auto vc = check_order_convergence(combo, combo_limit, lin);
    if (vc.refuted()) {
      why = "linear combinator refuted on trial " + std::to_string(trial);
      return false;
    }
    for (Index n = 1; n <= 32; ++n) {
      const Element diff = el_abs(el_sub(combo.eval_at(n), combo_limit));
      if (!el_leq(diff, lin.eval_at(n), Space::C0)) {
        why = "linear witness fails pointwise";
        return false;
      }
    }
    // modulus: |a_n| -> |lim| under the unchanged witness
    const auto mod = combine_witness(WitnessCombine::Modulus, wit_a);
    const auto abs_fam = ElementSequence::abs_of(fam_a);
    for (Index n = 1; n <= 32; ++n) {
      const Element diff = el_abs(el_sub(abs_fam.eval_at(n), el_abs(Element(lim_a))));
      if (!el_leq(diff, mod.eval_at(n), Space::C0)) {
        why = "modulus witness fails pointwise";
        return false;
      }
    }
    // convex: exhibited convex combinations stay dominated
    const auto cvx = combine_witness(WitnessCombine::Convex, wit_a);
    const Rat t = rat_make(rng.range(0, 4), 4);
    const auto mix = ElementSequence::affine_combo(t, fam_a, Rat(1) - t, fam_a);
    for (Index n = 1; n <= 32; ++n) {
      const Element diff = el_abs(el_sub(mix.eval_at(n), Element(lim_a)));
      if (!el_leq(diff, cvx.eval_at(n), Space::C0)) {
        why = "convex witness fails pointwise";
        return false;
      }
    }
  }

  // limit uniqueness and shift equivalence, exactly
  const auto an =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement lim = SeqElement::geometric(Rat(1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0, lim, 1, 0);
  {
    FiniteFamily fam{{an}, {Element(lim)}};
    if (!check_collective(SequenceFamily(fam), w).verified()) {
      why = "base family does not verify";
      return false;
    }
    FiniteFamily other{{an}, {Element(seq_add(lim, SeqElement::unit(3, Rat(1, 5))))}};
    if (!check_collective(SequenceFamily(other), w).refuted()) {
      why = "a second distinct limit assignment was not refuted";
      return false;
    }
    const auto shifted = ElementSequence::affine_combo(
        Rat(1), an, Rat(-1), ElementSequence::constant(Space::C0, Element(lim)));
    FiniteFamily nulled{{shifted}, {Element(SeqElement::zero())}};
    if (!check_collective(SequenceFamily(nulled), w).verified()) {
      why = "shift equivalence failed";
      return false;
    }
  }

  // solid hull and delta refutations with certificates
  {
    ScalarPattern osc = ScalarPattern::from_tail({TailTerm(Rat(1), Rat(1), ResidueMask::even())});
    const auto member = ElementSequence::pattern_scaled(
        osc, ElementSequence::constant(Space::C, Element(SeqElement::ones())));
    const auto wc = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 2, 0);
    const auto v = check_order_convergence(member, Element(SeqElement::zero()), wc);
    if (!(v.refuted() && std::holds_alternative<FailedDominationAt>(*v.certificate))) {
      why = "solid-hull member was not refuted with a domination certificate";
      return false;
    }
    const auto wd = ElementSequence::pattern_combo(
        Space::Real, {{ScalarPattern::geometric(Rat(1), Rat(1, 2)), Element(Rat(1))}});
    const auto vd = check_collective(SequenceFamily(DeltaFamily{}), wd);
    if (!(vd.refuted() && std::holds_alternative<EnvelopeLowerBound>(*vd.certificate))) {
      why = "delta family was not refuted with an envelope certificate";
      return false;
    }
  }

  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(Clock::now() - t0).count();
  if (dt >= 30) {
    why = "over budget: " + std::to_string(dt) + " s";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 5: the Banach-lattice l1 theorem at desk scale.
// ---------------------------------------------------------------------------
bool criterion_5(std::string& why) {
  const auto t0 = Clock::now();
  Rng rng(0xacc5);
  static const Rat ratios[] = {Rat(1, 3), Rat(1, 2), Rat(2, 3)};

  for (int trial = 0; trial < 20; ++trial) {
    const int len = static_cast<int>(rng.range(1, 8));
    std::vector<WitnessSequence> wits;
    std::vector<Rat> weights;
    Rat total(0);
    for (int i = 0; i < len; ++i) {
      // unit-ball witnesses: truncations of patterns below the order unit
      const Rat c = rat_make(1, rng.range(1, 3));
      const Rat r = ratios[rng.range(0, 2)];
      wits.push_back(ElementSequence::tail_truncation(
          Space::C, SeqElement::geometric(c, r), rng.range(1, 2), 0));
      Rat a = rat_make(rng.range(-2, 2), 8);
      if (total + rat_abs(a) > 1) a = 0;
      total += rat_abs(a);
      weights.push_back(a);
    }
    const auto combined = l1_witness(weights, wits);
    if (!check_decreasing_null(combined).verified()) {
      why = "l1 witness fails decreasing-null on trial " + std::to_string(trial);
      return false;
    }
    // |sum alpha_i a_{i,n}| <= sum |alpha_i| p_{i,n} for members a_{i,n} with
    // |a_{i,n}| <= p_{i,n}: exhibit a_{i,n} = sigma_i p_{i,n}, sigma = +/-1.
    for (Index n = 1; n <= 64; ++n) {
      Element combo = el_zero(Space::C);
      for (int i = 0; i < len; ++i) {
        const Rat sign = rng.range(0, 1) ? Rat(1) : Rat(-1);
        combo = el_add(combo, el_scale(weights[static_cast<size_t>(i)] * sign,
                                       wits[static_cast<size_t>(i)].eval_at(n)));
      }
      if (!el_leq(el_abs(combo), combined.eval_at(n), Space::C)) {
        why = "l1 domination fails at n=" + std::to_string(n);
        return false;
      }
    }
  }
  // geometric collapse: weights 2^-i against one repeated witness
  const auto p = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 1, 0);
  if (!l1_witness_geometric(Rat(1, 2), Rat(1, 2), p).equal_structure(p)) {
    why = "geometric weights did not collapse to the witness";
    return false;
  }

  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(Clock::now() - t0).count();
  if (dt >= 30) {
    why = "over budget: " + std::to_string(dt) + " s";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 6: the collective operator-set suite.
// ---------------------------------------------------------------------------
bool criterion_6(std::string& why) {
  const TestCatalog cat_c0 = catalog_default(Space::C0);
  const TestCatalog cat_c = catalog_default(Space::C);

  // {T_k}: envelope exactly 1 at every n <= 128, classification refuted
  {
    const auto xn =
        ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1), ResidueMask::all()));
    const auto pl = pointwise_limit(xn);
    const SeqElement x = std::get<SeqElement>(*pl.limit);
    for (Index n = 1; n <= 128; ++n) {
      const Rat q = seq_sup_norm(seq_abs(seq_sub(x, std::get<SeqElement>(xn.eval_at(n)))));
      if (q != 1) {
        why = "envelope not exactly 1 at n=" + std::to_string(n);
        return false;
      }
    }
    OperatorSet tk{"{T_k}", {}, true, Space::C0, Space::Real};
    const auto v = classify_collective(tk, cat_c0);
    if (!v.quasi.refuted()) {
      why = "{T_k} was not refuted";
      return false;
    }
  }

  const OpPtr s = make_diagonal(Space::C, Space::C, SeqElement::geometric(Rat(1), Rat(1, 2)), "S");
  const OpPtr t = make_finite_rank(Space::C, Space::C,
                                   {{half_weights(), Element(SeqElement::ones())}}, "T");

  // affine-pair combinator with witness p_n + q_n
  {
    OperatorSet a{"{T}", {t}, false, Space::C, Space::C};
    OperatorSet b{"{S}", {s}, false, Space::C, Space::C};
    const auto out = collective_combine_affine(
        a, b, {{Rat(1), Rat(0)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1, 3), Rat(-2, 3)}}, cat_c);
    if (!out.all_verified || out.witness_note != "p_n + q_n") {
      why = "affine combinator did not verify with p_n + q_n";
      return false;
    }
  }

  // domination transfer reproduces the 2 p_n bound; sigma-Levi stays refuted
  {
    std::vector<WitnessSequence> wc;
    for (const auto& entry : cat_c.entries)
      wc.push_back(ElementSequence::scaled(
          Rat(2), finite_rank_levi_limit(*t, entry.seq, entry.bound).witness));
    OperatorSet a{"{S}", {s}, false, Space::C, Space::C};
    OperatorSet c{"{T}", {t}, false, Space::C, Space::C};
    const auto out = domination_transfer(a, c, {0}, wc, cat_c);
    if (!out.all_verified) {
      why = "2 p_n transfer failed";
      return false;
    }
    const auto vs = classify_levi(*s, cat_c);
    if (!vs.sigma_levi.refuted() || !vs.quasi.verified()) {
      why = "S's verdicts changed under domination";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: the property suites, >= 1000 deterministic cases, exact.
// ---------------------------------------------------------------------------
bool criterion_7(std::string& why) {
  Rng rng(0xacc7);
  long cases = 0;
  static const Rat ratios[] = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(1)};

  const auto random_element = [&] {
    std::map<Index, Rat> ov;
    const Index start = rng.range(1, 4);
    for (Index j = 1; j < start; ++j)
      if (rng.range(0, 1)) ov[j] = rat_make(rng.range(-5, 5), rng.range(1, 3));
    TailList tail;
    const Index terms = rng.range(0, 2);
    for (Index i = 0; i < terms; ++i) {
      const Index m = rng.range(1, 3);
      tail.emplace_back(rat_make(rng.range(-4, 4), rng.range(1, 3)), ratios[rng.range(1, 5)],
                        ResidueMask(m, rng.range(0, m - 1)));
    }
    return SeqElement(start, std::move(ov), std::move(tail));
  };

  // lattice laws
  for (int i = 0; i < 120; ++i) {
    const SeqElement x = random_element();
    const SeqElement y = random_element();
    const SeqElement z = random_element();
    if (seq_sup(x, y) != seq_sup(y, x) || seq_inf(x, y) != seq_inf(y, x)) {
      why = "commutativity failed";
      return false;
    }
    if (seq_sup(seq_sup(x, y), z) != seq_sup(x, seq_sup(y, z))) {
      why = "associativity failed";
      return false;
    }
    if (seq_sup(x, seq_inf(x, y)) != x || seq_inf(x, seq_sup(x, y)) != x) {
      why = "absorption failed";
      return false;
    }
    if (!seq_leq(seq_abs(seq_sub(seq_abs(x), seq_abs(y))), seq_abs(seq_sub(x, y)))) {
      why = "the modulus inequality failed";
      return false;
    }
    cases += 4;
  }

  // eventual_compare soundness at N0..N0+64 on the mask
  for (int i = 0; i < 150; ++i) {
    TailList a, b;
    const Index terms = rng.range(1, 3);
    for (Index t = 0; t < terms; ++t) {
      const Index m = rng.range(1, 3);
      a.emplace_back(rat_make(rng.range(-5, 5), rng.range(1, 3)), ratios[rng.range(0, 5)],
                     ResidueMask(m, rng.range(0, m - 1)));
    }
    if (rng.range(0, 1))
      b.emplace_back(rat_make(rng.range(-5, 5), rng.range(1, 3)), ratios[rng.range(0, 5)],
                     ResidueMask::all());
    const auto cmp = eventual_compare(a, b);
    for (const auto& cs : cmp.classes) {
      Index n = cs.cls.next_after(std::max<Index>(0, cs.stable_from - 1));
      for (int step = 0; step < 4; ++step, n += cs.cls.modulus) {
        const Rat diff = tail_value_at(a, n) - tail_value_at(b, n);
        const int sign = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
        if (sign != cs.sign) {
          why = "eventual_compare unsound";
          return false;
        }
        ++cases;
      }
    }
  }

  // verdict chain + singleton agreement on a sampled operator family
  {
    const TestCatalog cat = catalog_default(Space::C);
    std::vector<OpPtr> ops;
    ops.push_back(make_identity(Space::C, "I"));
    ops.push_back(make_diagonal(Space::C, Space::C0, SeqElement::geometric(Rat(1), Rat(1, 2)),
                                "S"));
    for (int i = 0; i < 4; ++i) {
      const Rat c = rat_make(rng.range(1, 2), rng.range(1, 2));
      ops.push_back(make_finite_rank(
          Space::C, Space::C,
          {{DualFunctionalC(SeqElement::geometric(c, ratios[rng.range(2, 4)]), Rat(0)),
            Element(SeqElement::unit(rng.range(1, 4)))}},
          "F" + std::to_string(i)));
    }
    for (const auto& op : ops) {
      const auto v = classify_levi(*op, cat);
      if (v.sigma_levi.verified() && !v.quasi_c.verified()) {
        why = "verdict chain broken (sigma without quasi-c)";
        return false;
      }
      if (v.quasi_c.verified() && !v.quasi.verified()) {
        why = "verdict chain broken (quasi-c without quasi)";
        return false;
      }
      if (op->domain == op->codomain) {
        OperatorSet single{"{" + op->name + "}", {op}, false, op->domain, op->codomain};
        const auto vc = classify_collective(single, cat);
        if (vc.sigma_levi.state != v.sigma_levi.state || vc.quasi_c.state != v.quasi_c.state ||
            vc.quasi.state != v.quasi.state) {
          why = "singleton disagreement for " + op->name;
          return false;
        }
      }
      cases += 3;
    }
  }

  // positive-part identities
  for (int i = 0; i < 150; ++i) {
    SeqElement w = random_element();
    TailList tl;
    for (auto t : w.tail()) {
      if (t.ratio == 1) t.ratio = Rat(1, 2);
      tl.push_back(t);
    }
    const DualFunctionalC f(
        SeqElement(w.start(), std::map<Index, Rat>(w.overrides().begin(), w.overrides().end()),
                   tl),
        rat_make(rng.range(-2, 2), rng.range(1, 2)));
    const DualFunctionalC fp = functional_positive_part(f);
    const DualFunctionalC fm = functional_negative_part(f);
    if (functional_add(fp, functional_scale(Rat(-1), fm)).weights != f.weights ||
        fp.lim_coeff - fm.lim_coeff != f.lim_coeff) {
      why = "f+ - f- != f";
      return false;
    }
    if (!fp.is_positive() || !fm.is_positive()) {
      why = "positive parts not positive";
      return false;
    }
    SeqElement x = seq_abs(random_element());
    if (seq_membership(x, SeqSpace::C).verified) {
      const Rat fx = functional_eval(f, x);
      const Rat fpx = functional_eval(fp, x);
      if (fpx < rat_max(fx, Rat(0)) || fx != fpx - functional_eval(fm, x)) {
        why = "positive-part evaluation identity failed";
        return false;
      }
    }
    cases += 3;
  }

  if (cases < 1000) {
    why = "only " + std::to_string(cases) + " cases ran";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"criterion 1: embed/identity scenario, exact certificates, < 5 s", 5.0, criterion_1},
      {"criterion 2: diagonal-to-c0 scenario, exact norms and preimage, < 5 s", 5.0, criterion_2},
      {"criterion 3: constructive finite-rank limits vs brute force, < 30 s", 30.0, criterion_3},
      {"criterion 4: collective proposition suite, < 30 s", 30.0, criterion_4},
      {"criterion 5: l1-combination domination, < 30 s", 30.0, criterion_5},
      {"criterion 6: operator-set suite with envelope 1 and 2 p_n, < 10 s", 10.0, criterion_6},
      {"criterion 7: property suites, >= 1000 exact cases", 600.0, criterion_7},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    std::string why;
    bool ok = false;
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count() / 1000.0;
    if (ok && secs > c.budget_seconds) {
      ok = false;
      why = "over budget";
    }
    std::printf("%s %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", c.name, secs,
                why.empty() ? "" : " -- ", why.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
