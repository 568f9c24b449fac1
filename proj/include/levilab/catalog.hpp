#ifndef LEVILAB_CATALOG_HPP
#define LEVILAB_CATALOG_HPP

#include "levilab/convergence.hpp"

namespace levilab {

/// One increasing bounded positive family in a named domain space, with the
/// explicit multiple of the order unit witnessing the bound.
struct CatalogEntry {
  std::string name;
  ElementSequence seq;
  Rat bound;
};

/// Desk-scale stand-in for "for every increasing bounded sequence in E_+":
/// the canonical families the paper names plus deterministic pseudo-random
/// grammar entries. Every entry passes increasing+bounded verification.
struct TestCatalog {
  Space space;
  std::vector<CatalogEntry> entries;
  bool default_entries = true;  // false when custom entries were declared
};

/// Fixed seed for the pseudo-random entries (recorded so reports reproduce).
inline constexpr std::uint64_t kCatalogSeed = 0x1ab5eed2024ULL;

TestCatalog catalog_default(Space space, Index horizon = kDefaultHorizon);

}  // namespace levilab

#endif  // LEVILAB_CATALOG_HPP
