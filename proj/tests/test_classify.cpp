#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levilab/classify.hpp"

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

OpPtr halving_diagonal(Space dom = Space::C, Space cod = Space::C0) {
  return make_diagonal(dom, cod, SeqElement::geometric(Rat(1), Rat(1, 2)), "S", true);
}

DualFunctionalC half_weights() {
  return DualFunctionalC(SeqElement::geometric(Rat(1), Rat(1, 2)), Rat(0));
}

// Deterministic random finite-rank operator, rank <= 4, as in the paper's
// constructive lemma.
OpPtr random_finite_rank(Rng& rng, Space dom, Space cod, const std::string& name) {
  std::vector<std::pair<DualFunctionalC, Element>> ranks;
  const int rank = static_cast<int>(rng.range(1, 4));
  static const Rat ratios[] = {Rat(1, 3), Rat(1, 2), Rat(2, 3)};
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
    if (rng.range(0, 1)) y = seq_scale(rat_make(rng.range(-2, 2), rng.range(1, 2)), y);
    ranks.emplace_back(std::move(f), Element(std::move(y)));
  }
  return make_finite_rank(dom, cod, std::move(ranks), name);
}

}  // namespace

TEST_CASE("catalog entries are increasing and bounded in every space") {
  for (const Space s : {Space::C, Space::C0, Space::LInf, Space::CSumL1}) {
    const TestCatalog cat = catalog_default(s);
    CHECK(cat.entries.size() >= 3);
    for (const auto& entry : cat.entries) {
      const auto chk = check_increasing_bounded(entry.seq, entry.bound, 32);
      CHECK(chk.increasing);
      CHECK(chk.bounded);
    }
  }
  // canonical members: odd prefix in c, full prefix in c0
  const TestCatalog c = catalog_default(Space::C);
  CHECK(c.entries[0].name == "odd-prefix");
  const TestCatalog c0 = catalog_default(Space::C0);
  CHECK(c0.entries[0].name == "full-prefix");
}

TEST_CASE("identity on c: quasi verified, quasi-c refuted by the escaping limit") {
  const OpPtr id = make_identity(Space::C, "I_c");
  const auto v = classify_levi(*id, catalog_default(Space::C));
  CHECK(v.quasi.verified());
  REQUIRE(v.quasi_c.refuted());
  const auto* esc = std::get_if<LimitEscapesSpace>(&*v.quasi_c.certificate);
  REQUIRE(esc != nullptr);
  // 1 on odds, 0 on evens
  const auto& lim = std::get<SeqElement>(esc->pointwise_limit);
  CHECK(lim == SeqElement::geometric(Rat(1), Rat(1), ResidueMask::odd()));
  CHECK(v.sigma_levi.refuted());
}

TEST_CASE("halving diagonal c -> c0: quasi-c verified, sigma-Levi refuted") {
  const auto v = classify_levi(*halving_diagonal(), catalog_default(Space::C));
  CHECK(v.quasi_c.verified());
  CHECK(v.quasi.verified());
  REQUIRE(v.sigma_levi.refuted());
  const auto* np = std::get_if<NoPreimage>(&*v.sigma_levi.certificate);
  REQUIRE(np != nullptr);
  // the residue-class certificate: limits 1 vs 0
  CHECK(np->reason.find("limit") != std::string::npos);
}

TEST_CASE("embed (phi,psi) -> (0,phi): quasi-c verified, sigma-Levi refuted at the jump") {
  const OpPtr t = make_embed_zero_phi("T");
  const auto v = classify_levi(*t, catalog_default(Space::CSumL1));
  CHECK(v.quasi_c.verified());
  CHECK(v.quasi.verified());
  REQUIRE(v.sigma_levi.refuted());
  const auto* np = std::get_if<NoPreimage>(&*v.sigma_levi.certificate);
  REQUIRE(np != nullptr);
  CHECK(np->reason.find("1/2") != std::string::npos);
  CHECK(np->reason.find("left 1") != std::string::npos);
  CHECK(np->reason.find("right 0") != std::string::npos);
}

TEST_CASE("verdict chain: sigma => quasi-c => quasi on sampled operators") {
  Rng rng(0xc4a10ULL);
  const TestCatalog cat = catalog_default(Space::C);
  std::vector<OpPtr> ops;
  ops.push_back(halving_diagonal());
  ops.push_back(make_identity(Space::C, "I"));
  for (int i = 0; i < 10; ++i)
    ops.push_back(random_finite_rank(rng, Space::C, Space::C, "F" + std::to_string(i)));
  for (const auto& op : ops) {
    const auto v = classify_levi(*op, cat);
    if (v.sigma_levi.verified()) CHECK(v.quasi_c.verified());
    if (v.quasi_c.verified()) CHECK(v.quasi.verified());
  }
}

TEST_CASE("finite-rank operators classify sigma-Levi on every catalog entry") {
  Rng rng(0xf820ULL);
  const TestCatalog cat = catalog_default(Space::C);
  for (int i = 0; i < 20; ++i) {
    const OpPtr op = random_finite_rank(rng, Space::C, Space::C, "F" + std::to_string(i));
    const auto v = classify_levi(*op, cat);
    INFO("operator ", i, ": ", verdict_str(v.sigma_levi));
    CHECK(v.sigma_levi.verified());
  }
}

TEST_CASE("diagonals with vanishing coefficients classify quasi-c") {
  Rng rng(0xd1a6ULL);
  const TestCatalog cat = catalog_default(Space::C);
  static const Rat ratios[] = {Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4)};
  for (int i = 0; i < 8; ++i) {
    const SeqElement coeffs =
        SeqElement::geometric(rat_make(rng.range(1, 3), rng.range(1, 2)), ratios[rng.range(0, 3)]);
    const OpPtr op = make_diagonal(Space::C, Space::C0, coeffs, "D" + std::to_string(i), true);
    const auto v = classify_levi(*op, cat);
    CHECK(v.quasi_c.verified());
  }
}

TEST_CASE("singleton collective classification agrees with the single classifier") {
  Rng rng(0x516713ULL);
  const TestCatalog cat = catalog_default(Space::C);
  std::vector<OpPtr> ops;
  ops.push_back(halving_diagonal());
  ops.push_back(make_identity(Space::C, "I"));
  for (int i = 0; i < 18; ++i)
    ops.push_back(random_finite_rank(rng, Space::C, Space::C, "F" + std::to_string(i)));
  for (const auto& op : ops) {
    const auto single = classify_levi(*op, cat);
    OperatorSet set{"{" + op->name + "}", {op}, false, op->domain, op->codomain};
    const auto collective = classify_collective(set, cat);
    CHECK(single.sigma_levi.state == collective.sigma_levi.state);
    CHECK(single.quasi_c.state == collective.quasi_c.state);
    CHECK(single.quasi.state == collective.quasi.state);
  }
}

TEST_CASE("coordinate evaluations are not collectively quasi-sigma-Levi on c0") {
  OperatorSet tk{"{T_k}", {}, true, Space::C0, Space::Real};
  const auto v = classify_collective(tk, catalog_default(Space::C0));
  REQUIRE(v.quasi.refuted());
  const auto* env = std::get_if<EnvelopeLowerBound>(&*v.quasi.certificate);
  REQUIRE(env != nullptr);
  CHECK(env->bound == 1);
  CHECK(v.quasi_c.refuted());
  CHECK(v.sigma_levi.refuted());
}

TEST_CASE("finite collective set: shared witness via the pointwise sup") {
  const OpPtr s = halving_diagonal();
  const OpPtr half_s = make_scaled(Rat(1, 2), s, "S/2");
  OperatorSet set{"{S, S/2}", {s, half_s}, false, Space::C, Space::C0};
  const auto v = classify_collective(set, catalog_default(Space::C));
  CHECK(v.quasi_c.verified());
  CHECK(v.quasi.verified());
}

TEST_CASE("affine pair combinator keeps collective quasi-c with witness p+q") {
  const OpPtr s = halving_diagonal(Space::C, Space::C);
  const OpPtr t = make_finite_rank(Space::C, Space::C,
                                   {{half_weights(), Element(SeqElement::ones())}}, "T");
  OperatorSet a{"{T}", {t}, false, Space::C, Space::C};
  OperatorSet b{"{S}", {s}, false, Space::C, Space::C};
  const std::vector<std::pair<Rat, Rat>> exhibits = {
      {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1, 3), Rat(-2, 3)}};
  const auto out = collective_combine_affine(a, b, exhibits, catalog_default(Space::C));
  CHECK(out.all_verified);
  CHECK(out.witness_note == "p_n + q_n");
  CHECK(out.exhibits.size() >= exhibits.size());
}

TEST_CASE("l1 series combinator collapses geometric weights over one operator") {
  const OpPtr s = halving_diagonal(Space::C, Space::C);
  // weights 2^-i for i = 1..6 (partial sum 63/64 <= 1)
  std::vector<Rat> weights;
  std::vector<OpPtr> ops;
  for (int i = 1; i <= 6; ++i) {
    weights.push_back(rat_pow(Rat(1, 2), i));
    ops.push_back(s);
  }
  const auto out = collective_combine_l1(weights, ops, catalog_default(Space::C));
  CHECK(out.all_verified);
  // sum alpha_i S = (63/64) S: exact on a sample element
  const Element image = op_apply(*out.exhibits[0], Element(SeqElement::unit(1)));
  CHECK(std::get<SeqElement>(image) ==
        seq_scale(Rat(63, 64), std::get<SeqElement>(op_apply(*s, Element(SeqElement::unit(1))))));
}

TEST_CASE("domination transfer: the example pairing yields the doubled witness") {
  const OpPtr s = make_diagonal(Space::C, Space::C, SeqElement::geometric(Rat(1), Rat(1, 2)), "S");
  const OpPtr t = make_finite_rank(Space::C, Space::C,
                                   {{half_weights(), Element(SeqElement::ones())}}, "T");
  REQUIRE(op_leq(*s, *t));

  const TestCatalog cat = catalog_default(Space::C);
  // Collective quasi witnesses for {T} per entry: from its classification.
  OperatorSet c_set{"{T}", {t}, false, Space::C, Space::C};
  std::vector<WitnessSequence> wc;
  for (const auto& entry : cat.entries) {
    const auto res = finite_rank_levi_limit(*t, entry.seq, entry.bound);
    // Cauchy witness: doubled residual (|Tx_n' - Tx_n''| <= W(n')+W(n'')).
    wc.push_back(ElementSequence::scaled(Rat(2), res.witness));
  }
  OperatorSet a_set{"{S}", {s}, false, Space::C, Space::C};
  const auto out = domination_transfer(a_set, c_set, {0}, wc, cat);
  CHECK(out.all_verified);
  CHECK(out.transferred.size() == cat.entries.size());

  // sigma-Levi must NOT transfer: S stays refuted.
  const auto vs = classify_levi(*s, cat);
  CHECK(vs.sigma_levi.refuted());
  CHECK(vs.quasi.verified());
  const auto vt = classify_levi(*t, cat);
  CHECK(vt.sigma_levi.verified());
}

TEST_CASE("domination transfer rejects unverified pairings") {
  const OpPtr s = make_diagonal(Space::C, Space::C, SeqElement::geometric(Rat(1), Rat(1, 2)), "S");
  const OpPtr small = make_scaled(Rat(1, 4), s, "S/4");
  OperatorSet a{"{S}", {s}, false, Space::C, Space::C};
  OperatorSet c{"{S/4}", {small}, false, Space::C, Space::C};
  const TestCatalog cat = catalog_default(Space::C);
  std::vector<WitnessSequence> wc(cat.entries.size(),
                                  ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 1, 0));
  CHECK_THROWS_AS(domination_transfer(a, c, {0}, wc, cat), PairingIncomplete);
}

TEST_CASE("parametric sets beyond the coordinate evaluations are rejected") {
  OperatorSet bad{"weird", {make_identity(Space::C, "I")}, true, Space::C, Space::Real};
  CHECK_THROWS_AS(classify_collective(bad, catalog_default(Space::C)), ArbitraryInfiniteSet);
}

TEST_CASE("catalog/domain mismatches are rejected") {
  CHECK_THROWS_AS(classify_levi(*make_identity(Space::C, "I"), catalog_default(Space::C0)),
                  DomainMismatch);
  const auto xn =
      ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1), ResidueMask::all()));
  CHECK_THROWS_AS(ElementSequence::image(make_identity(Space::C, "I"), xn), DomainMismatch);
}
