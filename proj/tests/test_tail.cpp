#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levilab/tail.hpp"

using namespace levilab;

namespace {

// Independent oracle: evaluate term lists pointwise.
Rat direct_value(const TailList& terms, Index n) {
  Rat v(0);
  for (const auto& t : terms)
    if (t.mask.contains(n)) v += (t.ratio == 1 ? t.coeff : t.coeff * rat_pow(t.ratio, n));
  return v;
}

int sign_of(const Rat& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

// Deterministic generator for property runs.
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

TailList random_terms(Rng& rng, int count) {
  static const Rat ratios[] = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4),
                               Rat(1)};
  TailList out;
  for (int i = 0; i < count; ++i) {
    const Rat coeff = rat_make(rng.range(-6, 6), rng.range(1, 4));
    const Index m = rng.range(1, 4);
    const Index s = rng.range(0, m - 1);
    out.emplace_back(coeff, ratios[rng.range(0, 6)], ResidueMask(m, s));
  }
  return out;
}

}  // namespace

TEST_CASE("residue mask arithmetic") {
  const ResidueMask odd = ResidueMask::odd();
  CHECK(odd.first() == 1);
  CHECK(odd.nth(3) == 5);
  CHECK(odd.next_after(5) == 7);
  CHECK(odd.next_after(0) == 1);
  CHECK(odd.count_upto(7) == 4);
  const ResidueMask even = ResidueMask::even();
  CHECK(even.first() == 2);
  CHECK(even.nth(2) == 4);

  CHECK(mask_intersect(odd, even) == std::nullopt);
  const auto meet = mask_intersect(ResidueMask(2, 1), ResidueMask(3, 0));
  REQUIRE(meet.has_value());
  CHECK(meet->modulus == 6);
  CHECK(meet->residue == 3);
  CHECK(mask_subset(*meet, odd));
}

TEST_CASE("normalization merges equal classes and minimizes moduli") {
  // 1 on evens + 1 on odds at the same ratio collapses to the all mask.
  TailList t{{Rat(1), Rat(1, 2), ResidueMask::even()}, {Rat(1), Rat(1, 2), ResidueMask::odd()}};
  const TailList n = tail_normalize(t);
  REQUIRE(n.size() == 1);
  CHECK(n[0].mask == ResidueMask::all());

  // Cancellation leaves nothing.
  TailList c{{Rat(1), Rat(1, 2), ResidueMask::all()}, {Rat(-1), Rat(1, 2), ResidueMask::all()}};
  CHECK(tail_normalize(c).empty());

  // Ratio-0 and coeff-0 terms vanish.
  TailList z{{Rat(5), Rat(0), ResidueMask::all()}, {Rat(0), Rat(1, 2), ResidueMask::all()}};
  CHECK(tail_normalize(z).empty());
}

TEST_CASE("eventual_compare: geometric against geometric") {
  // (1/2)^n vs (1/3)^n: positive from n = 1 on.
  TailList a{{Rat(1), Rat(1, 2), ResidueMask::all()}};
  TailList b{{Rat(1), Rat(1, 3), ResidueMask::all()}};
  const auto cmp = eventual_compare(a, b);
  CHECK(cmp.uniform);
  CHECK(cmp.sign == 1);
  CHECK(cmp.stable_from == 1);
  for (Index n = 1; n <= 64; ++n)
    CHECK(sign_of(direct_value(a, n) - direct_value(b, n)) == 1);
}

TEST_CASE("eventual_compare: constant beats transient geometric") {
  // -1 + 2*(1/2)^n: zero at n=1, negative from n=2.
  TailList a{{Rat(-1), Rat(1), ResidueMask::all()}, {Rat(2), Rat(1, 2), ResidueMask::all()}};
  const auto cmp = eventual_compare(a, {});
  CHECK(cmp.uniform);
  CHECK(cmp.sign == -1);
  CHECK(cmp.stable_from == 2);
  CHECK(direct_value(a, 1) == 0);
  for (Index n = 2; n <= 64; ++n) CHECK(direct_value(a, n) < 0);
}

TEST_CASE("eventual_compare: identical lists compare equal") {
  TailList a{{Rat(3, 7), Rat(2, 3), ResidueMask::odd()}};
  const auto cmp = eventual_compare(a, a);
  CHECK(cmp.uniform);
  CHECK(cmp.sign == 0);
  CHECK(cmp.stable_from == 0);
}

TEST_CASE("eventual_compare: per-class profile for mixed masks") {
  // +1 constant on evens only: evens sign +1, odds sign 0 — not uniform.
  TailList a{{Rat(1), Rat(1), ResidueMask::even()}};
  const auto cmp = eventual_compare(a, {});
  CHECK_FALSE(cmp.uniform);
  for (const auto& cs : cmp.classes) {
    const int expect = cs.cls.residue % 2 == 0 ? 1 : 0;
    CHECK(cs.sign == expect);
  }
}

TEST_CASE("property: eventual_compare sound at stabilization and beyond") {
  Rng rng(0x1eafcafe);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const TailList a = random_terms(rng, static_cast<int>(rng.range(1, 3)));
    const TailList b = random_terms(rng, static_cast<int>(rng.range(0, 2)));
    const auto cmp = eventual_compare(a, b);
    for (const auto& cs : cmp.classes) {
      Index n = cs.cls.next_after(std::max<Index>(0, cs.stable_from - 1));
      if (n < cs.stable_from) n = cs.cls.next_after(cs.stable_from - 1);
      for (int step = 0; step < 64; ++step) {
        CHECK(sign_of(direct_value(a, n) - direct_value(b, n)) == cs.sign);
        n += cs.cls.modulus;
        ++checked;
      }
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("property: normalization preserves values") {
  Rng rng(0xfeedbeef);
  for (int iter = 0; iter < 100; ++iter) {
    const TailList a = random_terms(rng, static_cast<int>(rng.range(1, 4)));
    const TailList n = tail_normalize(a);
    for (Index i = 1; i <= 48; ++i) CHECK(direct_value(a, i) == direct_value(n, i));
  }
}
