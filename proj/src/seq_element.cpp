#include "levilab/seq_element.hpp"

#include <sstream>

namespace levilab {

std::string seq_space_name(SeqSpace tag) {
  switch (tag) {
    case SeqSpace::C00: return "c00";
    case SeqSpace::C0: return "c0";
    case SeqSpace::C: return "c";
    case SeqSpace::LInf: return "linf";
  }
  return "?";
}

SeqElement::SeqElement(Index start, std::map<Index, Rat> overrides, TailList tail)
    : start_(start), overrides_(std::move(overrides)), tail_(std::move(tail)) {
  if (start_ < 1) throw std::invalid_argument("SeqElement: start must be >= 1");
  for (const auto& [j, v] : overrides_)
    if (j < 1 || j >= start_) throw std::invalid_argument("SeqElement: override index outside [1,start)");
  canonicalize();
}

void SeqElement::canonicalize() {
  tail_ = tail_normalize(tail_);
  // Drop zero overrides (below start the default is 0).
  for (auto it = overrides_.begin(); it != overrides_.end();)
    it = (it->second == 0) ? overrides_.erase(it) : std::next(it);
  // Shrink start while the explicit value at start-1 matches the tail there.
  while (start_ > 1) {
    const Index j = start_ - 1;
    const Rat tv = tail_value_at(tail_, j);
    const auto it = overrides_.find(j);
    const Rat ov = it == overrides_.end() ? Rat(0) : it->second;
    if (ov != tv) break;
    if (it != overrides_.end()) overrides_.erase(it);
    --start_;
  }
}

SeqElement SeqElement::unit(Index j, const Rat& value) {
  if (j < 1) throw std::invalid_argument("unit: index must be >= 1");
  std::map<Index, Rat> ov;
  ov[j] = value;
  return SeqElement(j + 1, std::move(ov), {});
}

SeqElement SeqElement::ones() { return constant(Rat(1)); }

SeqElement SeqElement::constant(const Rat& c) {
  if (c == 0) return zero();
  return SeqElement(1, {}, {TailTerm(c, Rat(1), ResidueMask::all())});
}

SeqElement SeqElement::geometric(const Rat& coeff, const Rat& ratio, const ResidueMask& mask) {
  return SeqElement(1, {}, {TailTerm(coeff, ratio, mask)});
}

Rat SeqElement::value_at(Index n) const {
  if (n < 1) throw std::invalid_argument("value_at: index must be >= 1");
  if (n < start_) {
    const auto it = overrides_.find(n);
    return it == overrides_.end() ? Rat(0) : it->second;
  }
  return tail_value_at(tail_, n);
}

std::string SeqElement::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [j, v] : overrides_) {
    if (!first) os << ", ";
    os << j << "->" << rat_str(v);
    first = false;
  }
  for (const auto& t : tail_) {
    if (!first) os << ", ";
    os << rat_str(t.coeff) << "*(" << rat_str(t.ratio) << ")^n on " << t.mask.str()
       << " from " << start_;
    first = false;
  }
  os << "}";
  return os.str();
}

SeqElement seq_add(const SeqElement& x, const SeqElement& y) {
  const Index s = std::max(x.start(), y.start());
  std::map<Index, Rat> ov;
  for (Index j = 1; j < s; ++j) {
    Rat v = x.value_at(j) + y.value_at(j);
    if (v != 0) ov[j] = std::move(v);
  }
  TailList tail = x.tail();
  tail.insert(tail.end(), y.tail().begin(), y.tail().end());
  return SeqElement(s, std::move(ov), std::move(tail));
}

SeqElement seq_scale(const Rat& alpha, const SeqElement& x) {
  if (alpha == 0) return SeqElement::zero();
  std::map<Index, Rat> ov;
  for (const auto& [j, v] : x.overrides()) ov[j] = alpha * v;
  return SeqElement(x.start(), std::move(ov), tail_scale(alpha, x.tail()));
}

SeqElement seq_mul(const SeqElement& x, const SeqElement& y) {
  const Index s = std::max(x.start(), y.start());
  std::map<Index, Rat> ov;
  for (Index j = 1; j < s; ++j) {
    Rat v = x.value_at(j) * y.value_at(j);
    if (v != 0) ov[j] = std::move(v);
  }
  TailList tail;
  for (const auto& tx : x.tail())
    for (const auto& ty : y.tail())
      if (auto meet = mask_intersect(tx.mask, ty.mask))
        tail.emplace_back(tx.coeff * ty.coeff, tx.ratio * ty.ratio, *meet);
  return SeqElement(s, std::move(ov), std::move(tail));
}

SeqElement seq_combine(const SeqElement& x, const SeqElement& y, CombineKind kind) {
  switch (kind) {
    case CombineKind::Add: return seq_add(x, y);
    case CombineKind::Sup: return seq_sup(x, y);
    case CombineKind::Inf: return seq_inf(x, y);
  }
  throw std::logic_error("seq_combine: bad kind");
}

namespace {

// Shared sup/inf: pick x-or-y per residue class by the eventual sign of x-y,
// materializing explicit values up to every stabilization index. The class
// refinement must also refine both tails' masks so restriction is exact.
SeqElement lattice_pick(const SeqElement& x, const SeqElement& y, bool want_sup) {
  const Index s = std::max(x.start(), y.start());
  const auto cmp = eventual_compare(x.tail(), y.tail());

  Index joint = 1;
  for (const auto& cs : cmp.classes) joint = std::lcm(joint, cs.cls.modulus);
  joint = std::lcm(joint, tail_lcm_modulus(x.tail()));
  joint = std::lcm(joint, tail_lcm_modulus(y.tail()));

  Index stable = s;
  for (const auto& cs : cmp.classes) stable = std::max(stable, cs.stable_from);

  std::map<Index, Rat> ov;
  for (Index j = 1; j < stable; ++j) {
    const Rat xv = x.value_at(j), yv = y.value_at(j);
    Rat v = want_sup ? rat_max(xv, yv) : rat_min(xv, yv);
    if (v != 0) ov[j] = std::move(v);
  }

  TailList tail;
  for (const auto& cs : cmp.classes) {
    const bool pick_x = want_sup ? cs.sign >= 0 : cs.sign <= 0;
    // Split the profile class into subclasses of the joint modulus.
    for (Index r = cs.cls.residue; r < joint; r += cs.cls.modulus) {
      const TailList part =
          tail_restrict_to_class(pick_x ? x.tail() : y.tail(), ResidueMask(joint, r));
      tail.insert(tail.end(), part.begin(), part.end());
    }
  }
  return SeqElement(stable, std::move(ov), std::move(tail));
}

}  // namespace

SeqElement seq_sup(const SeqElement& x, const SeqElement& y) { return lattice_pick(x, y, true); }
SeqElement seq_inf(const SeqElement& x, const SeqElement& y) { return lattice_pick(x, y, false); }

bool seq_leq(const SeqElement& x, const SeqElement& y) {
  const Index s = std::max(x.start(), y.start());
  const auto cmp = eventual_compare(y.tail(), x.tail());
  Index upto = s;
  for (const auto& cs : cmp.classes) {
    if (cs.sign < 0) return false;  // y - x eventually negative on the class
    upto = std::max(upto, cs.stable_from);
  }
  for (Index j = 1; j < upto; ++j)
    if (x.value_at(j) > y.value_at(j)) return false;
  return true;
}

SeqElement seq_restrict_above(const SeqElement& x, Index cut) {
  if (cut < 1) return x;
  std::map<Index, Rat> ov;
  for (const auto& [j, v] : x.overrides())
    if (j > cut) ov[j] = v;
  const Index s = std::max(x.start(), cut + 1);
  // Values from x's tail that fall at or below the cut stay explicit... none:
  // indices in [x.start, cut] are dropped, beyond stays tail.
  return SeqElement(s, std::move(ov), x.tail());
}

SeqElement seq_restrict_mask(const SeqElement& x, const ResidueMask& mask) {
  std::map<Index, Rat> ov;
  for (const auto& [j, v] : x.overrides())
    if (mask.contains(j)) ov[j] = v;
  TailList tail;
  for (const auto& t : x.tail())
    if (auto meet = mask_intersect(t.mask, mask)) tail.emplace_back(t.coeff, t.ratio, *meet);
  return SeqElement(x.start(), std::move(ov), std::move(tail));
}

std::vector<ClassLimit> seq_class_limits(const SeqElement& x) {
  const Index l = tail_lcm_modulus(x.tail());
  std::vector<ClassLimit> out;
  for (Index r = 0; r < l; ++r) {
    ResidueMask cls(l, r);
    Rat lim(0);
    for (const auto& t : x.tail())
      if (t.ratio == 1 && mask_intersect(t.mask, cls)) lim += t.coeff;
    out.push_back({cls, std::move(lim)});
  }
  return out;
}

SeqMembership seq_membership(const SeqElement& x, SeqSpace tag) {
  switch (tag) {
    case SeqSpace::LInf:
      return {true, std::nullopt};  // every grammar element is bounded
    case SeqSpace::C00: {
      if (x.finitely_supported()) return {true, std::nullopt};
      // Canonical tails are nonzero somewhere in every remaining class of the
      // leading ratio; exhibit a concrete index past all stabilization.
      const auto sign = eventual_sign(x.tail());
      for (const auto& cs : sign.classes) {
        if (cs.sign != 0) {
          const Index n = cs.cls.next_after(std::max(cs.stable_from, x.start()) - 1);
          return {false, EventuallyNonzero{cs.cls, n, x.value_at(n)}};
        }
      }
      // All classes aggregate to zero values: semantically finitely supported.
      return {true, std::nullopt};
    }
    case SeqSpace::C0: {
      for (const auto& cl : seq_class_limits(x))
        if (cl.limit != 0) return {false, NonvanishingLimit{cl}};
      return {true, std::nullopt};
    }
    case SeqSpace::C: {
      const auto limits = seq_class_limits(x);
      for (size_t i = 1; i < limits.size(); ++i)
        if (limits[i].limit != limits[0].limit)
          return {false, DistinctClassLimits{limits[0], limits[i]}};
      return {true, std::nullopt};
    }
  }
  throw std::logic_error("seq_membership: bad tag");
}

Rat seq_limit(const SeqElement& x) {
  if (!seq_membership(x, SeqSpace::C).verified) throw NotInC();
  const auto limits = seq_class_limits(x);
  return limits.empty() ? Rat(0) : limits[0].limit;
}

Rat seq_sup_norm(const SeqElement& x) {
  Rat best(0);
  for (const auto& [j, v] : x.overrides()) best = rat_max(best, rat_abs(v));

  // Per refined class: all coefficients must share a sign, making the class
  // value sequence monotone in |.|; the sup is then at the first index at or
  // past start, or at the limit (ratio-1 aggregate).
  const Index l = tail_lcm_modulus(x.tail());
  for (Index r = 0; r < l; ++r) {
    ResidueMask cls(l, r);
    int seen = 0;
    Rat lim(0);
    bool any = false;
    for (const auto& t : x.tail()) {
      if (!mask_intersect(t.mask, cls)) continue;
      any = true;
      const int s = rat_sign(t.coeff);
      if (seen == 0) seen = s;
      else if (s != 0 && s != seen) throw UnsupportedNorm();
      if (t.ratio == 1) lim += t.coeff;
    }
    if (!any) continue;
    const Index first = cls.next_after(x.start() - 1);
    best = rat_max(best, rat_abs(tail_value_at(x.tail(), first)));
    best = rat_max(best, rat_abs(lim));
  }
  return best;
}

Rat seq_dot_sum(const SeqElement& w, const SeqElement& x) {
  const Index s = std::max(w.start(), x.start());
  Rat total(0);
  for (Index j = 1; j < s; ++j) total += w.value_at(j) * x.value_at(j);
  for (const auto& tw : w.tail()) {
    for (const auto& tx : x.tail()) {
      const auto meet = mask_intersect(tw.mask, tx.mask);
      if (!meet) continue;
      const Rat ratio = tw.ratio * tx.ratio;
      if (ratio >= 1) throw NotSummable();
      const Rat coeff = tw.coeff * tx.coeff;
      if (coeff == 0 || ratio == 0) continue;
      const Index first = meet->next_after(s - 1);
      // sum over n = first, first+L, ... of coeff * ratio^n
      total += coeff * rat_pow(ratio, first) / (Rat(1) - rat_pow(ratio, meet->modulus));
    }
  }
  return total;
}

Rat seq_abs_sum(const SeqElement& x) { return seq_dot_sum(seq_abs(x), SeqElement::ones()); }

}  // namespace levilab
