#include "levilab/catalog.hpp"

#include <stdexcept>

namespace levilab {

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

void push_checked(TestCatalog& cat, CatalogEntry entry, Index horizon) {
  const auto chk = check_increasing_bounded(entry.seq, entry.bound, horizon);
  if (!chk.increasing || !chk.bounded)
    throw std::logic_error("catalog entry '" + entry.name + "' failed verification: " + chk.detail);
  cat.entries.push_back(std::move(entry));
}

void add_random_sequence_entries(TestCatalog& cat, Index horizon) {
  Rng rng(kCatalogSeed ^ static_cast<std::uint64_t>(cat.space));
  static const Rat ratios[] = {Rat(1), Rat(1), Rat(1, 2), Rat(1, 3), Rat(2, 3), Rat(3, 4)};
  for (int i = 0; i < 10; ++i) {
    const Rat coeff = rat_make(rng.range(1, 4), rng.range(1, 3));
    const Rat ratio = ratios[rng.range(0, 5)];
    const Index m = rng.range(1, 3);
    const ResidueMask mask(m, rng.range(0, m - 1));
    ElementSequence seq = ElementSequence::prefix_sum(cat.space, TailTerm(coeff, ratio, mask));
    push_checked(cat, {"random-" + std::to_string(i), std::move(seq), coeff}, horizon);
  }
}

void add_random_ramp_entries(TestCatalog& cat, Index horizon) {
  Rng rng(kCatalogSeed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < 10; ++i) {
    GenRampFamily params;
    params.level = rat_make(rng.range(1, 4), rng.range(1, 2));
    params.hi = rat_make(rng.range(1, 7), 8);
    params.width0 = rat_make(1, rng.range(1, 2));
    params.width_ratio = rat_make(1, rng.range(2, 3));
    params.as_direct_sum = cat.space == Space::CSumL1;
    ElementSequence seq = ElementSequence::ramp_family(cat.space, params);
    push_checked(cat, {"random-ramp-" + std::to_string(i), std::move(seq), params.level}, horizon);
  }
}

}  // namespace

TestCatalog catalog_default(Space space, Index horizon) {
  TestCatalog cat{space, {}};
  switch (space) {
    case Space::C:
    case Space::LInf: {
      // sum_{k<=n} e_{2k-1}: the identity counterexample family.
      push_checked(cat,
                   {"odd-prefix",
                    ElementSequence::prefix_sum(space, TailTerm(Rat(1), Rat(1), ResidueMask::odd())),
                    Rat(1)},
                   horizon);
      // sum_{k<=n} e_{2k}: the diagonal counterexample family.
      push_checked(cat,
                   {"even-prefix",
                    ElementSequence::prefix_sum(space, TailTerm(Rat(1), Rat(1), ResidueMask::even())),
                    Rat(1)},
                   horizon);
      // sum_{m<=n} e_m converging up to the order unit.
      push_checked(cat,
                   {"full-prefix",
                    ElementSequence::prefix_sum(space, TailTerm(Rat(1), Rat(1), ResidueMask::all())),
                    Rat(1)},
                   horizon);
      push_checked(cat,
                   {"constant-unit",
                    ElementSequence::constant(space, Element(SeqElement::ones())), Rat(1)},
                   horizon);
      push_checked(cat,
                   {"constant-geometric",
                    ElementSequence::constant(
                        space, Element(SeqElement::geometric(Rat(1), Rat(1, 2)))),
                    Rat(1)},
                   horizon);
      add_random_sequence_entries(cat, horizon);
      break;
    }
    case Space::C0:
    case Space::C00: {
      // Members are finitely supported, so they live in every tag.
      push_checked(cat,
                   {"full-prefix",
                    ElementSequence::prefix_sum(space, TailTerm(Rat(1), Rat(1), ResidueMask::all())),
                    Rat(1)},
                   horizon);
      push_checked(cat,
                   {"even-prefix",
                    ElementSequence::prefix_sum(space, TailTerm(Rat(1), Rat(1), ResidueMask::even())),
                    Rat(1)},
                   horizon);
      push_checked(cat,
                   {"geometric-prefix",
                    ElementSequence::prefix_sum(space, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all())),
                    Rat(1)},
                   horizon);
      push_checked(cat,
                   {"constant-geometric",
                    ElementSequence::constant(
                        space, Element(SeqElement::geometric(Rat(1), Rat(1, 2)))),
                    Rat(1)},
                   horizon);
      add_random_sequence_entries(cat, horizon);
      break;
    }
    case Space::CSumL1: {
      push_checked(cat, {"phi-family", ElementSequence::phi_family_direct_sum(), Rat(1)}, horizon);
      push_checked(cat,
                   {"constant-unit",
                    ElementSequence::constant(
                        space, Element(DirectSumElement{PLFunction::one(), PLFunction::one()})),
                    Rat(1)},
                   horizon);
      add_random_ramp_entries(cat, horizon);
      break;
    }
    case Space::C01:
    case Space::L1: {
      push_checked(cat,
                   {"phi-family",
                    space == Space::C01
                        ? ElementSequence::phi_family()
                        : ElementSequence::ramp_family(space, GenRampFamily{}),
                    Rat(1)},
                   horizon);
      push_checked(cat,
                   {"constant-unit",
                    ElementSequence::constant(space, Element(PLFunction::one())), Rat(1)},
                   horizon);
      add_random_ramp_entries(cat, horizon);
      break;
    }
    case Space::Real: {
      push_checked(cat, {"constant-one", ElementSequence::constant(space, Element(Rat(1))), Rat(1)},
                   horizon);
      break;
    }
  }
  return cat;
}

}  // namespace levilab
