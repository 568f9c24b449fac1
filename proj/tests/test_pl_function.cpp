#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levilab/pl_function.hpp"

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
  long range(long lo, long hi) { return lo + static_cast<long>(next() % (hi - lo + 1)); }
};

// The paper's ramp: 1 on [0, 1/2 - 2^-n], 0 on [1/2, 1], linear between.
PLFunction phi(Index n) { return PLFunction::ramp(Rat(1), Rat(1, 2), rat_pow(Rat(1, 2), n)); }

// Independent trapezoid oracle over a refinement of both functions' breaks.
Rat integral_oracle(const PLFunction& f) {
  Rat total(0);
  const auto& br = f.breakpoints();
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    const Rat a = br[i], b = br[i + 1];
    const Rat mid = (a + b) / 2;
    // affine on the open interval: sample two interior points
    const Rat p = (a + mid) / 2, q = (mid + b) / 2;
    const Rat fp = f.value_at(p), fq = f.value_at(q);
    const Rat slope = (fq - fp) / (q - p);
    const Rat at_a = fp + slope * (a - p);
    const Rat at_b = fp + slope * (b - p);
    total += (b - a) * (at_a + at_b) / 2;
  }
  return total;
}

PLFunction random_pl(Rng& rng) {
  std::vector<Rat> breaks{Rat(0)};
  const long cuts = rng.range(0, 3);
  for (long i = 0; i < cuts; ++i) breaks.push_back(rat_make(rng.range(1, 15), 16));
  breaks.push_back(Rat(1));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<PLFunction::Piece> pieces;
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    pieces.push_back({Rat(rng.range(-4, 4)), rat_make(rng.range(-3, 3), rng.range(1, 2))});
  std::vector<Rat> values;
  for (size_t i = 0; i < breaks.size(); ++i) {
    if (rng.range(0, 3) == 0) values.push_back(Rat(rng.range(-2, 2)));  // deliberate jump
    else if (i == 0) values.push_back(pieces.front().at(breaks[0]));
    else values.push_back(pieces[i - 1].at(breaks[i]));
  }
  return PLFunction(breaks, std::move(pieces), std::move(values));
}

}  // namespace

TEST_CASE("phi family shape") {
  const PLFunction p2 = phi(2);
  // breakpoints {0, 1/4, 1/2, 1}
  REQUIRE(p2.breakpoints().size() == 4);
  CHECK(p2.breakpoints()[1] == Rat(1, 4));
  CHECK(p2.breakpoints()[2] == Rat(1, 2));
  CHECK(p2.value_at(Rat(0)) == 1);
  CHECK(p2.value_at(Rat(1, 4)) == 1);
  CHECK(p2.value_at(Rat(3, 8)) == Rat(1, 2));
  CHECK(p2.value_at(Rat(1, 2)) == 0);
  CHECK(p2.value_at(Rat(3, 4)) == 0);
  CHECK(pl_continuous(p2));

  // n = 1 degenerates to a pure ramp on [0, 1/2]
  const PLFunction p1 = phi(1);
  CHECK(p1.value_at(Rat(0)) == 1);
  CHECK(p1.value_at(Rat(1, 4)) == Rat(1, 2));
  CHECK(pl_continuous(p1));
}

TEST_CASE("sup is idempotent, crossing points become breakpoints") {
  const PLFunction f = PLFunction::affine(Rat(1), Rat(0));    // x
  const PLFunction g = PLFunction::affine(Rat(-1), Rat(1));   // 1 - x
  CHECK(pl_sup(f, f) == f);
  const PLFunction s = pl_sup(f, g);
  bool has_half = false;
  for (const auto& b : s.breakpoints()) has_half = has_half || b == Rat(1, 2);
  CHECK(has_half);
  CHECK(s.value_at(Rat(1, 2)) == Rat(1, 2));
  CHECK(s.value_at(Rat(0)) == 1);
  CHECK(s.value_at(Rat(1)) == 1);
}

TEST_CASE("add and negation cancel") {
  const PLFunction p = phi(2);
  CHECK(pl_add(p, pl_scale(Rat(-1), p)).ae_zero());
  CHECK(pl_add(p, pl_scale(Rat(-1), p)) == PLFunction::zero());
}

TEST_CASE("pl_leq: the ramp family increases; indicator dominates a.e.") {
  for (Index n = 1; n <= 5; ++n) {
    CHECK(pl_leq(phi(n), phi(n + 1), PLOrderMode::Everywhere));
    CHECK_FALSE(pl_leq(phi(n + 1), phi(n), PLOrderMode::Everywhere));
  }
  CHECK(pl_leq(phi(3), phi(3), PLOrderMode::Everywhere));
  CHECK(pl_leq(phi(3), phi(3), PLOrderMode::AlmostEverywhere));

  // g: indicator of [0, 1/2] (value 1 at the jump, as in the paper)
  const PLFunction g = PLFunction::step(Rat(1), Rat(1, 2), Rat(1));
  for (Index n = 1; n <= 6; ++n) CHECK(pl_leq(phi(n), g, PLOrderMode::AlmostEverywhere));
  CHECK(pl_leq(phi(4), g, PLOrderMode::Everywhere));  // phi_n(1/2) = 0 <= 1

  // point values matter only in the everywhere order
  const PLFunction z = PLFunction::zero();
  const PLFunction spike = PLFunction::step(Rat(0), Rat(1, 2), Rat(5));
  CHECK(pl_leq(spike, z, PLOrderMode::AlmostEverywhere));
  CHECK_FALSE(pl_leq(spike, z, PLOrderMode::Everywhere));
}

TEST_CASE("integrals: constants, identity, and the ramp deficiency") {
  CHECK(pl_integral(PLFunction::one()) == 1);
  CHECK(pl_integral(PLFunction::affine(Rat(1), Rat(0))) == Rat(1, 2));
  // integral of g - phi_n is the ramp triangle: 2^-(n+1)
  const PLFunction g = PLFunction::step(Rat(1), Rat(1, 2), Rat(1));
  for (Index n = 1; n <= 8; ++n) {
    const PLFunction diff = pl_sub(g, phi(n));
    const Rat expect = rat_pow(Rat(1, 2), n + 1);
    CHECK(pl_integral(diff) == expect);
    CHECK(integral_oracle(diff) == expect);
  }
}

TEST_CASE("continuity certificates") {
  CHECK(pl_continuous(PLFunction::zero()));
  for (Index n = 1; n <= 4; ++n) CHECK(pl_continuous(phi(n)));
  const PLFunction g = PLFunction::step(Rat(1), Rat(1, 2), Rat(1));
  const auto jumps = pl_jumps(g);
  REQUIRE(jumps.size() == 1);
  CHECK(jumps[0].at == Rat(1, 2));
  CHECK(jumps[0].left == 1);
  CHECK(jumps[0].right == 0);
}

TEST_CASE("property: sup/inf pointwise exact at many rational abscissae") {
  Rng rng(0xf00dcafe);
  int points = 0;
  for (int iter = 0; iter < 25; ++iter) {
    const PLFunction f = random_pl(rng);
    const PLFunction g = random_pl(rng);
    const PLFunction s = pl_sup(f, g);
    const PLFunction i = pl_inf(f, g);
    const PLFunction a = pl_add(f, g);
    for (int p = 0; p <= 40; ++p) {
      const Rat x = rat_make(p, 40);
      CHECK(s.value_at(x) == rat_max(f.value_at(x), g.value_at(x)));
      CHECK(i.value_at(x) == rat_min(f.value_at(x), g.value_at(x)));
      CHECK(a.value_at(x) == f.value_at(x) + g.value_at(x));
      ++points;
    }
  }
  CHECK(points >= 1000);
}

TEST_CASE("property: integral is additive and matches the oracle") {
  Rng rng(0xdeadf00d);
  for (int iter = 0; iter < 50; ++iter) {
    const PLFunction f = random_pl(rng);
    const PLFunction g = random_pl(rng);
    CHECK(pl_integral(pl_add(f, g)) == pl_integral(f) + pl_integral(g));
    CHECK(pl_integral(f) == integral_oracle(f));
  }
}
