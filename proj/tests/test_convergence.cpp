#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levilab/convergence.hpp"
#include "levilab/operators.hpp"

using namespace levilab;

namespace {

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

SeqElement seq_of(const Element& e) { return std::get<SeqElement>(e); }

// p_n = 1 - sum_{j <= 2n} e_j: the identity-on-c witness.
WitnessSequence unit_truncation_witness(Space s, Index stride, Index offset) {
  return ElementSequence::tail_truncation(s, SeqElement::ones(), stride, offset);
}

}  // namespace

TEST_CASE("decreasing-null: unit truncation in c (sup-norm 1, order-inf 0)") {
  const auto w = unit_truncation_witness(Space::C, 2, 0);
  const auto v = check_decreasing_null(w);
  CHECK(v.verified());
  // every member keeps sup norm 1 and c-limit 1; nullness is order-theoretic
  CHECK(seq_sup_norm(seq_of(w.eval_at(5))) == 1);
  CHECK(seq_limit(seq_of(w.eval_at(5))) == 1);
}

TEST_CASE("decreasing-null: geometric tail truncation") {
  const SeqElement base = SeqElement::geometric(Rat(1), Rat(1, 2), ResidueMask::even());
  const auto w = ElementSequence::tail_truncation(Space::C0, base, 1, 0);
  CHECK(check_decreasing_null(w).verified());
}

TEST_CASE("decreasing-null: constant witness is refuted with the coordinate bound") {
  const auto w = ElementSequence::constant(Space::C, Element(SeqElement::ones()));
  const auto v = check_decreasing_null(w);
  REQUIRE(v.refuted());
  const auto* p = std::get_if<PointwiseInfPositive>(&*v.certificate);
  REQUIRE(p != nullptr);
  CHECK(p->coordinate == "1");
  CHECK(p->bound == 1);
}

TEST_CASE("decreasing-null: increasing family is refuted as not decreasing") {
  const auto w =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::odd()));
  const auto v = check_decreasing_null(w);
  REQUIRE(v.refuted());
  CHECK(std::holds_alternative<NotDecreasingAt>(*v.certificate));
}

TEST_CASE("order convergence: diagonal image of the even prefix family") {
  // S x_n = sum_{k<=n} 4^-k e_{2k} -> limit with witness = truncated limit
  const auto xn =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::even()));
  const OpPtr diag =
      make_diagonal(Space::C, Space::C0, SeqElement::geometric(Rat(1), Rat(1, 2)), "alpha");
  const auto image = ElementSequence::image(diag, xn);
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2), ResidueMask::even());
  const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
  const auto v = check_order_convergence(image, Element(limit), w);
  CHECK(v.verified());
  INFO(verdict_str(v));
  CHECK(v.argument.find("truncation") != std::string::npos);
}

TEST_CASE("order convergence: constant family, zero-after-prefix witness") {
  const auto s = ElementSequence::constant(Space::C, Element(SeqElement::unit(3, Rat(2))));
  const auto w = unit_truncation_witness(Space::C, 1, 0);
  CHECK(check_order_convergence(s, Element(SeqElement::unit(3, Rat(2))), w).verified());
}

TEST_CASE("order convergence: oscillating family is refuted by domination failure") {
  ScalarPattern osc = ScalarPattern::from_tail({TailTerm(Rat(1), Rat(1), ResidueMask::even())});
  const auto s = ElementSequence::pattern_scaled(
      osc, ElementSequence::constant(Space::C, Element(SeqElement::ones())));
  const auto w = unit_truncation_witness(Space::C, 2, 0);
  for (const Element cand :
       {Element(SeqElement::zero()), Element(SeqElement::ones()),
        Element(seq_scale(Rat(1, 2), SeqElement::ones()))}) {
    const auto v = check_order_convergence(s, cand, w);
    REQUIRE(v.refuted());
    CHECK(std::holds_alternative<FailedDominationAt>(*v.certificate));
  }
}

TEST_CASE("order convergence: wrong limit of a convergent family is refuted") {
  const auto xn =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
  const auto v = check_order_convergence(xn, Element(seq_add(limit, SeqElement::unit(1))), w);
  CHECK(v.refuted());
}

TEST_CASE("order Cauchy: identity on c over the odd prefix family") {
  const auto fn =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::odd()));
  const auto w = unit_truncation_witness(Space::C, 2, 0);  // 1 - sum_{j<=2n} e_j
  const auto v = check_order_cauchy(fn, w);
  CHECK(v.verified());
  INFO(verdict_str(v));
}

TEST_CASE("order Cauchy: constant families pass with any valid witness") {
  const auto s = ElementSequence::constant(Space::C, Element(SeqElement::ones()));
  CHECK(check_order_cauchy(s, unit_truncation_witness(Space::C, 1, 0)).verified());
}

TEST_CASE("order Cauchy: invalid witness throws") {
  const auto fn =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::odd()));
  const auto bad = ElementSequence::constant(Space::C, Element(SeqElement::ones()));
  CHECK_THROWS_AS(check_order_cauchy(fn, bad), WitnessInvalid);
}

TEST_CASE("collective: singleton family behaves like ordinary convergence") {
  const auto an =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
  FiniteFamily fam{{an}, {Element(limit)}};
  CHECK(check_collective(SequenceFamily(fam), w).verified());
  CHECK(check_order_convergence(an, Element(limit), w).verified());
}

TEST_CASE("collective: the delta family is refuted by the envelope bound") {
  const auto w = ElementSequence::pattern_combo(
      Space::Real, {{ScalarPattern::geometric(Rat(1), Rat(1, 2)), Element(Rat(1))}});
  CHECK(check_decreasing_null(w).verified());
  const auto v = check_collective(SequenceFamily(DeltaFamily{}), w);
  REQUIRE(v.refuted());
  const auto* e = std::get_if<EnvelopeLowerBound>(&*v.certificate);
  REQUIRE(e != nullptr);
  CHECK(e->bound == 1);
}

TEST_CASE("collective: scalar-scaled family of a nonzero sequence is refuted") {
  const auto base =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
  ScalarScaledFamily fam{std::make_shared<const ElementSequence>(base)};
  const auto v = check_collective(SequenceFamily(fam), w);
  REQUIRE(v.refuted());
  CHECK(std::holds_alternative<EnvelopeLowerBound>(*v.certificate));
}

TEST_CASE("family envelope closed forms") {
  CHECK(std::get<Rat>(*family_envelope(SequenceFamily(DeltaFamily{}), 7).value) == 1);
  // coordinate evaluations on the full prefix family oscillate by exactly 1
  const auto xn =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1), ResidueMask::all()));
  CoordinateImagesFamily fam{std::make_shared<const ElementSequence>(xn)};
  for (Index n = 1; n <= 8; ++n)
    CHECK(std::get<Rat>(*family_envelope(SequenceFamily(fam), n).value) == 1);
  // singleton convergent family: envelope equals |a_n - c|, which vanishes
  const auto an =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  FiniteFamily single{{an}, {Element(SeqElement::geometric(Rat(1), Rat(1, 2)))}};
  const auto q3 = std::get<SeqElement>(*family_envelope(SequenceFamily(single), 3).value);
  CHECK(q3 == seq_restrict_above(SeqElement::geometric(Rat(1), Rat(1, 2)), 3));
}

TEST_CASE("witness combinators") {
  const auto p = ElementSequence::tail_truncation(
      Space::C0, SeqElement::geometric(Rat(1), Rat(1, 2)), 1, 0);
  const auto q = ElementSequence::tail_truncation(
      Space::C0, SeqElement::geometric(Rat(1), Rat(1, 3)), 2, 0);

  SUBCASE("union is the pointwise sup and idempotent on equal inputs") {
    const auto u = combine_witness(WitnessCombine::Union, p, &p);
    for (Index n = 1; n <= 16; ++n)
      CHECK(seq_of(u.eval_at(n)) == seq_of(p.eval_at(n)));
    const auto upq = combine_witness(WitnessCombine::Union, p, &q);
    for (Index n = 1; n <= 16; ++n)
      CHECK(seq_of(upq.eval_at(n)) == seq_sup(seq_of(p.eval_at(n)), seq_of(q.eval_at(n))));
  }
  SUBCASE("linear combination stays decreasing-null") {
    const auto lin = combine_witness(WitnessCombine::Linear, p, &q, Rat(1, 2), Rat(-1, 2));
    CHECK(check_decreasing_null(lin).verified());
    for (Index n = 1; n <= 16; ++n) {
      const SeqElement expect = seq_add(seq_scale(Rat(1, 2), seq_of(p.eval_at(n))),
                                        seq_scale(Rat(1, 2), seq_of(q.eval_at(n))));
      CHECK(seq_of(lin.eval_at(n)) == expect);
    }
  }
  SUBCASE("modulus and convex leave the witness unchanged") {
    CHECK(combine_witness(WitnessCombine::Modulus, p).equal_structure(p));
    CHECK(combine_witness(WitnessCombine::Convex, p).equal_structure(p));
  }
  SUBCASE("invalid input witness throws") {
    const auto bad = ElementSequence::constant(Space::C0, Element(SeqElement::unit(1)));
    CHECK_THROWS_AS(combine_witness(WitnessCombine::Union, bad, &p), WitnessInvalid);
  }
}

TEST_CASE("modulus combinator verifies |A| with the unchanged witness") {
  const auto an =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(-1), Rat(1, 2), ResidueMask::all()));
  const SeqElement lim = SeqElement::geometric(Rat(-1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0,
                                                  SeqElement::geometric(Rat(1), Rat(1, 2)), 1, 0);
  REQUIRE(check_order_convergence(an, Element(lim), w).verified());
  // |a_n| converges to |lim| under the same witness
  const auto abs_family = ElementSequence::abs_of(an);
  const auto v = check_order_convergence(abs_family, el_abs(Element(lim)),
                                         combine_witness(WitnessCombine::Modulus, w));
  CHECK_FALSE(v.refuted());
  // ||a_n| - |lim|| <= |a_n - lim| <= w(n) holds pointwise; spot-check
  for (Index n = 1; n <= 32; ++n) {
    const Element d = el_abs(el_sub(abs_family.eval_at(n), el_abs(Element(lim))));
    CHECK(el_leq(d, w.eval_at(n), Space::C0));
  }
}

TEST_CASE("l1 witness: single weight, averages, geometric collapse") {
  const auto p = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 1, 0);
  const auto q = ElementSequence::tail_truncation(
      Space::C, SeqElement::geometric(Rat(1), Rat(1, 2)), 1, 0);

  const auto single = l1_witness({Rat(1)}, {p});
  for (Index n = 1; n <= 12; ++n) CHECK(seq_of(single.eval_at(n)) == seq_of(p.eval_at(n)));

  const auto avg = l1_witness({Rat(1, 2), Rat(1, 2)}, {p, q});
  CHECK(check_decreasing_null(avg).verified());
  for (Index n = 1; n <= 12; ++n) {
    const SeqElement expect = seq_add(seq_scale(Rat(1, 2), seq_of(p.eval_at(n))),
                                      seq_scale(Rat(1, 2), seq_of(q.eval_at(n))));
    CHECK(seq_of(avg.eval_at(n)) == expect);
  }

  // alpha_i = 2^-i with one repeated witness collapses to the witness itself
  const auto collapsed = l1_witness_geometric(Rat(1, 2), Rat(1, 2), p);
  CHECK(collapsed.equal_structure(p));

  CHECK_THROWS_AS(l1_witness({Rat(2, 3), Rat(2, 3)}, {p, q}), NotSummableWeights);
  const auto big = ElementSequence::tail_truncation(
      Space::C, seq_scale(Rat(3), SeqElement::ones()), 1, 0);
  CHECK_THROWS_AS(l1_witness({Rat(1)}, {big}), UnboundedWitness);
}

TEST_CASE("l1 witness dominates exhibited combinations (theorem desk-scale)") {
  Rng rng(0x11a5eedULL);
  const auto p = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 1, 0);
  // family members |a_{i,n}| <= p_{i,n}: take a_{i,n} = +/- p(n) scaled
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rat> weights;
    Rat total(0);
    const int len = static_cast<int>(rng.range(1, 8));
    for (int i = 0; i < len; ++i) {
      Rat w = rat_make(rng.range(-2, 2), 8);
      if (total + rat_abs(w) > 1) w = 0;
      total += rat_abs(w);
      weights.push_back(w);
    }
    const auto combined = l1_witness(weights, std::vector<WitnessSequence>(weights.size(), p));
    CHECK(check_decreasing_null(combined).verified());
    for (Index n = 1; n <= 16; ++n) {
      Element combo = el_zero(Space::C);
      for (const auto& w : weights) combo = el_add(combo, el_scale(w, p.eval_at(n)));
      CHECK(el_leq(el_abs(combo), combined.eval_at(n), Space::C));
    }
  }
}

TEST_CASE("construct_limit: increasing bounded family in the bounded grammar") {
  const auto xn =
      ElementSequence::prefix_sum(Space::LInf, TailTerm(Rat(1), Rat(1), ResidueMask::odd()));
  const auto w = unit_truncation_witness(Space::LInf, 2, 0);
  const auto res = construct_limit(xn, w, Space::LInf);
  REQUIRE(res.limit.has_value());
  CHECK(seq_of(*res.limit) == SeqElement::geometric(Rat(1), Rat(1), ResidueMask::odd()));
  CHECK(res.domination.verified());
}

TEST_CASE("construct_limit: odd prefix sums escape c") {
  const auto fn =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::odd()));
  const auto w = unit_truncation_witness(Space::C, 2, 0);
  const auto res = construct_limit(fn, w, Space::C);
  REQUIRE_FALSE(res.limit.has_value());
  REQUIRE(res.refutation.has_value());
  const auto* esc = std::get_if<LimitEscapesSpace>(&*res.refutation);
  REQUIRE(esc != nullptr);
  CHECK(esc->why.space == Space::C);
}

TEST_CASE("construct_limit: constant family returns its value") {
  const auto s = ElementSequence::constant(Space::C, Element(SeqElement::unit(2)));
  const auto res = construct_limit(s, unit_truncation_witness(Space::C, 1, 0), Space::C);
  REQUIRE(res.limit.has_value());
  CHECK(seq_of(*res.limit) == SeqElement::unit(2));
}

TEST_CASE("property: truncation-domination verdicts are sound both ways") {
  Rng rng(0x7a11c071);
  static const Rat ratios[] = {Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3)};
  int verified_seen = 0, refuted_seen = 0;
  for (int trial = 0; trial < 80; ++trial) {
    // positive geometric bases; W's base gets a chance to dominate D's
    TailList td, tw;
    const Index md = rng.range(1, 3);
    td.emplace_back(rat_make(rng.range(1, 4), rng.range(1, 2)), ratios[rng.range(0, 3)],
                    ResidueMask(md, rng.range(0, md - 1)));
    tw = td;
    if (rng.range(0, 1))
      tw[0].coeff = tw[0].coeff * rat_make(rng.range(1, 3), rng.range(1, 2));
    else
      tw[0].coeff = tw[0].coeff / 2;
    if (rng.range(0, 2) == 0) {
      const Index mw = rng.range(1, 2);
      tw.emplace_back(rat_make(rng.range(1, 2), 2), ratios[rng.range(0, 3)],
                      ResidueMask(mw, rng.range(0, mw - 1)));
    }
    const SeqElement base_d = SeqElement::from_tail(td);
    const SeqElement base_w = SeqElement::from_tail(tw);
    const Index sd = rng.range(1, 3), od = rng.range(-1, 2);
    const Index sw = rng.range(1, 3), ow = rng.range(-1, 2);

    const auto s = ElementSequence::tail_truncation(Space::LInf, base_d, sd, od);
    const auto w = ElementSequence::tail_truncation(Space::LInf, base_w, sw, ow);
    Verdict v;
    try {
      v = check_order_convergence(s, Element(SeqElement::zero()), w, 24);
    } catch (const WitnessInvalid&) {
      continue;
    }
    // brute-force oracle over a long prefix
    std::optional<Index> brute;
    for (Index n = 1; n <= 400 && !brute; ++n) {
      const Element diff = el_abs(el_sub(s.eval_at(n), Element(SeqElement::zero())));
      if (!el_leq(diff, w.eval_at(n), Space::LInf)) brute = n;
    }
    if (v.verified()) {
      CHECK_FALSE(brute.has_value());
      ++verified_seen;
    }
    if (v.refuted()) {
      const auto* f = std::get_if<FailedDominationAt>(&*v.certificate);
      REQUIRE(f != nullptr);
      const Element diff = el_abs(el_sub(s.eval_at(f->n), Element(SeqElement::zero())));
      CHECK_FALSE(el_leq(diff, w.eval_at(f->n), Space::LInf));
      ++refuted_seen;
    }
  }
  // the generator must exercise both outcomes
  CHECK(verified_seen >= 10);
  CHECK(refuted_seen >= 10);
}

TEST_CASE("witness soundness: verified verdicts re-check at random indices") {
  Rng rng(0x600dbeef);
  const auto xn =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1, 2), ResidueMask::even()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2), ResidueMask::even());
  const auto w = ElementSequence::tail_truncation(Space::C, limit, 1, 0);
  REQUIRE(check_order_convergence(xn, Element(limit), w).verified());
  for (int i = 0; i < 256; ++i) {
    const Index n = rng.range(1, 4096);
    const Element diff = el_abs(el_sub(xn.eval_at(n), Element(limit)));
    CHECK(el_leq(diff, w.eval_at(n), Space::C));
  }
}

TEST_CASE("uniqueness: a perturbed limit assignment cannot verify") {
  const auto an =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
  FiniteFamily good{{an}, {Element(limit)}};
  REQUIRE(check_collective(SequenceFamily(good), w).verified());
  for (const Rat eps : {Rat(1, 7), Rat(-1, 9), Rat(1)}) {
    FiniteFamily bad{{an}, {Element(seq_add(limit, SeqElement::unit(2, eps)))}};
    CHECK(check_collective(SequenceFamily(bad), w).refuted());
  }
}

TEST_CASE("monotone norm-convergent families are order convergent (canonical witness)") {
  // ||S(n) - L||_inf -> 0 for the geometric prefix family; the canonical
  // tail witness then certifies order convergence.
  const auto s =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2));
  REQUIRE(sequence_monotonicity(s) == Monotonicity::Increasing);
  // norm convergence, verified on the exact envelope-norm pattern
  const auto q = envelope_norm_pattern(s);
  REQUIRE(q.has_value());
  for (const auto& cl : seq_class_limits(*q)) CHECK(cl.limit == 0);
  for (Index n = 1; n < 32; ++n) CHECK(q->value_at(n + 1) <= q->value_at(n));
  // order convergence with the canonical deficiency witness
  const auto w = canonical_deficiency_witness(s, Element(limit));
  CHECK(check_order_convergence(s, Element(limit), w).verified());
}

TEST_CASE("shift equivalence: family minus limits verifies with the identical witness") {
  const auto an =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2));
  const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
  FiniteFamily fam{{an}, {Element(limit)}};
  const auto direct = check_collective(SequenceFamily(fam), w);

  const auto shifted = ElementSequence::affine_combo(
      Rat(1), an, Rat(-1), ElementSequence::constant(Space::C0, Element(limit)));
  FiniteFamily null_fam{{shifted}, {Element(SeqElement::zero())}};
  const auto via_shift = check_collective(SequenceFamily(null_fam), w);
  CHECK(direct.verified() == via_shift.verified());
  CHECK(direct.verified());
}
