#include "levilab/tail.hpp"

#include <cstdlib>
#include <stdexcept>

namespace levilab {

namespace {

// Divisors of m in ascending order.
std::vector<Index> divisors(Index m) {
  std::vector<Index> out;
  for (Index d = 1; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      if (d != m / d) out.push_back(m / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Guard against mask blow-up; grammar moduli are tiny in practice.
constexpr Index kMaxJointModulus = 10080;

}  // namespace

TailList tail_normalize(const TailList& terms) {
  // Group by ratio, skipping terms that contribute nothing (coeff 0, or
  // ratio 0 which vanishes at every n >= 1).
  std::map<Rat, std::vector<const TailTerm*>> by_ratio;
  for (const auto& t : terms) {
    if (t.coeff == 0 || t.ratio == 0) continue;
    by_ratio[t.ratio].push_back(&t);
  }

  TailList out;
  for (auto& [ratio, group] : by_ratio) {
    Index l = 1;
    for (const auto* t : group) l = std::lcm(l, t->mask.modulus);
    if (l > kMaxJointModulus) throw std::invalid_argument("tail_normalize: joint modulus too large");

    // Aggregate coefficients per residue class mod l.
    std::vector<Rat> coeff(static_cast<size_t>(l), Rat(0));
    for (const auto* t : group)
      for (Index r = t->mask.residue; r < l; r += t->mask.modulus)
        coeff[static_cast<size_t>(r)] += t->coeff;

    // Minimal modulus d | l the coefficient pattern factors through.
    Index dmin = l;
    for (Index d : divisors(l)) {
      bool factors = true;
      for (Index r = 0; factors && r < d; ++r)
        for (Index s = r + d; s < l; s += d)
          if (coeff[static_cast<size_t>(s)] != coeff[static_cast<size_t>(r)]) {
            factors = false;
            break;
          }
      if (factors) {
        dmin = d;
        break;
      }
    }

    for (Index r = 0; r < dmin; ++r)
      if (coeff[static_cast<size_t>(r)] != 0)
        out.emplace_back(coeff[static_cast<size_t>(r)], ratio, ResidueMask(dmin, r));
  }

  // Deterministic order: descending ratio, then (modulus, residue).
  std::sort(out.begin(), out.end(), [](const TailTerm& x, const TailTerm& y) {
    if (x.ratio != y.ratio) return x.ratio > y.ratio;
    if (x.mask.modulus != y.mask.modulus) return x.mask.modulus < y.mask.modulus;
    return x.mask.residue < y.mask.residue;
  });
  return out;
}

TailList tail_restrict_to_class(const TailList& terms, const ResidueMask& cls) {
  TailList out;
  for (const auto& t : terms) {
    auto meet = mask_intersect(t.mask, cls);
    if (!meet) continue;
    if (meet->modulus != cls.modulus)
      throw std::invalid_argument("tail_restrict_to_class: class does not refine term mask");
    out.emplace_back(t.coeff, t.ratio, *meet);
  }
  return tail_normalize(out);
}

EventualComparison eventual_compare(const TailList& a, const TailList& b,
                                    const ResidueMask& mask) {
  TailList diff = a;
  for (auto t : b) {
    t.coeff = -t.coeff;
    diff.push_back(std::move(t));
  }
  diff = tail_normalize(diff);

  Index l = std::lcm(mask.modulus, tail_lcm_modulus(diff));
  if (l > kMaxJointModulus) throw std::invalid_argument("eventual_compare: joint modulus too large");

  EventualComparison cmp;
  for (Index r = mask.residue; r < l; r += mask.modulus) {
    ResidueMask cls(l, r);

    // Aggregate per ratio on this class; compare by descending ratio.
    std::map<Rat, Rat, std::greater<Rat>> agg;
    for (const auto& t : diff)
      if (mask_intersect(t.mask, cls)) agg[t.ratio] += t.coeff;

    ClassSign cs;
    cs.cls = cls;
    Rat lead_ratio(0), lead_coeff(0);
    for (const auto& [ratio, c] : agg) {
      if (c != 0) {
        lead_ratio = ratio;
        lead_coeff = c;
        break;
      }
    }
    if (lead_coeff == 0) {
      cs.sign = 0;
      cs.stable_from = 0;
    } else {
      cs.sign = rat_sign(lead_coeff);
      // First class member where the leading aggregate strictly beats the
      // absolute sum of everything smaller. Each ratio quotient is < 1, so
      // the scan terminates; step size doubles after a while as a guard.
      Index n = cls.first();
      Index step = cls.modulus;
      int linear_budget = 4096;
      while (true) {
        Rat lead = rat_abs(lead_coeff) * rat_pow(lead_ratio, n);
        Rat rest(0);
        for (const auto& [ratio, c] : agg)
          if (ratio < lead_ratio && c != 0) rest += rat_abs(c) * rat_pow(ratio, n);
        if (lead > rest) break;
        n += step;
        if (--linear_budget == 0) step *= 2;
      }
      cs.stable_from = n;
    }
    cmp.classes.push_back(cs);
  }

  cmp.uniform = true;
  cmp.sign = cmp.classes.empty() ? 0 : cmp.classes.front().sign;
  cmp.stable_from = 0;
  for (const auto& cs : cmp.classes) {
    if (cs.sign != cmp.sign) cmp.uniform = false;
    cmp.stable_from = std::max(cmp.stable_from, cs.stable_from);
  }
  if (!cmp.uniform) {
    cmp.sign = 0;
    cmp.stable_from = 0;
  }
  return cmp;
}

}  // namespace levilab
