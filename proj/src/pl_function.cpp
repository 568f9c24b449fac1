#include "levilab/pl_function.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace levilab {

PLFunction::PLFunction(std::vector<Rat> breakpoints, std::vector<Piece> pieces,
                       std::vector<Rat> point_values)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), values_(std::move(point_values)) {
  if (breaks_.size() < 2) throw std::invalid_argument("PLFunction: need at least breakpoints 0 and 1");
  if (breaks_.front() != 0 || breaks_.back() != 1)
    throw std::invalid_argument("PLFunction: breakpoints must start at 0 and end at 1");
  for (size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i - 1] < breaks_[i]))
      throw std::invalid_argument("PLFunction: breakpoints must be strictly increasing");
  if (pieces_.size() + 1 != breaks_.size() || values_.size() != breaks_.size())
    throw std::invalid_argument("PLFunction: piece/value count mismatch");
  canonicalize();
}

void PLFunction::canonicalize() {
  // Remove interior breakpoints where adjacent pieces agree and the point
  // value matches (no information carried).
  for (size_t i = 1; i + 1 < breaks_.size();) {
    if (pieces_[i - 1] == pieces_[i] && values_[i] == pieces_[i].at(breaks_[i])) {
      breaks_.erase(breaks_.begin() + static_cast<long>(i));
      values_.erase(values_.begin() + static_cast<long>(i));
      pieces_.erase(pieces_.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
}

PLFunction PLFunction::constant(const Rat& c) {
  return PLFunction({Rat(0), Rat(1)}, {Piece{Rat(0), c}}, {c, c});
}

PLFunction PLFunction::affine(const Rat& slope, const Rat& intercept) {
  Piece p{slope, intercept};
  return PLFunction({Rat(0), Rat(1)}, {p}, {p.at(Rat(0)), p.at(Rat(1))});
}

PLFunction PLFunction::ramp(const Rat& level, const Rat& hi, const Rat& width) {
  if (!(hi > 0 && hi <= 1)) throw std::invalid_argument("ramp: hi outside (0,1]");
  Rat lo = hi - width;
  if (lo < 0) lo = 0;
  std::vector<Rat> breaks;
  std::vector<Piece> pieces;
  std::vector<Rat> values;
  // plateau [0, lo] at level (if nondegenerate)
  breaks.push_back(Rat(0));
  values.push_back(level);
  if (lo > 0) {
    pieces.push_back(Piece{Rat(0), level});
    breaks.push_back(lo);
    values.push_back(level);
  }
  // descent [lo, hi] from level to 0
  const Rat slope = -level / (hi - lo);
  pieces.push_back(Piece{slope, level - slope * lo});
  breaks.push_back(hi);
  values.push_back(Rat(0));
  // zero [hi, 1]
  if (hi < 1) {
    pieces.push_back(Piece{Rat(0), Rat(0)});
    breaks.push_back(Rat(1));
    values.push_back(Rat(0));
  }
  return PLFunction(std::move(breaks), std::move(pieces), std::move(values));
}

PLFunction PLFunction::step(const Rat& level, const Rat& at, const Rat& at_value) {
  if (!(at > 0 && at < 1)) throw std::invalid_argument("step: jump outside (0,1)");
  return PLFunction({Rat(0), at, Rat(1)},
                    {Piece{Rat(0), level}, Piece{Rat(0), Rat(0)}},
                    {level, at_value, Rat(0)});
}

Rat PLFunction::value_at(const Rat& x) const {
  if (x < 0 || x > 1) throw std::invalid_argument("value_at: point outside [0,1]");
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  if (it != breaks_.end() && *it == x)
    return values_[static_cast<size_t>(it - breaks_.begin())];
  const size_t piece = static_cast<size_t>(it - breaks_.begin()) - 1;
  return pieces_[piece].at(x);
}

Rat PLFunction::left_limit_at(size_t bp) const {
  if (bp == 0) return values_[0];
  return pieces_[bp - 1].at(breaks_[bp]);
}

Rat PLFunction::right_limit_at(size_t bp) const {
  if (bp + 1 == breaks_.size()) return values_.back();
  return pieces_[bp].at(breaks_[bp]);
}

bool PLFunction::ae_zero() const {
  for (const auto& p : pieces_)
    if (!(p.slope == 0 && p.intercept == 0)) return false;
  return true;
}

bool PLFunction::ae_equal(const PLFunction& other) const { return pl_sub(*this, other).ae_zero(); }

std::string PLFunction::str() const {
  std::ostringstream os;
  os << "pl[";
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (i) os << "; ";
    os << rat_str(breaks_[i]) << ".." << rat_str(breaks_[i + 1]) << ": " << rat_str(pieces_[i].slope)
       << "x+" << rat_str(pieces_[i].intercept);
  }
  os << "]";
  return os.str();
}

namespace {

// Common refinement plus, for sup/inf, exact crossing points of the two
// affine pieces inserted as new breakpoints.
std::vector<Rat> refined_breaks(const PLFunction& f, const PLFunction& g, bool with_crossings) {
  std::set<Rat> bs(f.breakpoints().begin(), f.breakpoints().end());
  bs.insert(g.breakpoints().begin(), g.breakpoints().end());
  if (with_crossings) {
    std::vector<Rat> base(bs.begin(), bs.end());
    for (size_t i = 0; i + 1 < base.size(); ++i) {
      const Rat mid = (base[i] + base[i + 1]) / 2;
      // affine pieces active on (base[i], base[i+1])
      const auto piece_at = [&](const PLFunction& h) {
        const auto& br = h.breakpoints();
        const auto it = std::upper_bound(br.begin(), br.end(), mid);
        return h.pieces()[static_cast<size_t>(it - br.begin()) - 1];
      };
      const auto pf = piece_at(f), pg = piece_at(g);
      if (pf.slope != pg.slope) {
        const Rat x = (pg.intercept - pf.intercept) / (pf.slope - pg.slope);
        if (x > base[i] && x < base[i + 1]) bs.insert(x);
      }
    }
  }
  return {bs.begin(), bs.end()};
}

PLFunction combine_impl(const PLFunction& f, const PLFunction& g, PLCombineKind kind) {
  const bool lattice = kind != PLCombineKind::Add;
  const std::vector<Rat> breaks = refined_breaks(f, g, lattice);
  std::vector<PLFunction::Piece> pieces;
  std::vector<Rat> values;

  const auto pick = [&](const Rat& a, const Rat& b) -> Rat {
    switch (kind) {
      case PLCombineKind::Add: return Rat(a + b);
      case PLCombineKind::Sup: return rat_max(a, b);
      case PLCombineKind::Inf: return rat_min(a, b);
    }
    throw std::logic_error("pl combine: bad kind");
  };

  for (const Rat& x : breaks) values.push_back(pick(f.value_at(x), g.value_at(x)));
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Rat mid = (breaks[i] + breaks[i + 1]) / 2;
    const auto piece_at = [&](const PLFunction& h) {
      const auto& br = h.breakpoints();
      const auto it = std::upper_bound(br.begin(), br.end(), mid);
      return h.pieces()[static_cast<size_t>(it - br.begin()) - 1];
    };
    const auto pf = piece_at(f), pg = piece_at(g);
    if (kind == PLCombineKind::Add) {
      pieces.push_back({pf.slope + pg.slope, pf.intercept + pg.intercept});
    } else {
      // No crossing strictly inside (crossings were inserted), so the winner
      // at the midpoint wins on the whole open interval.
      const bool f_wins = (kind == PLCombineKind::Sup) == (pf.at(mid) >= pg.at(mid));
      pieces.push_back(f_wins ? pf : pg);
    }
  }
  return PLFunction(breaks, std::move(pieces), std::move(values));
}

}  // namespace

PLFunction pl_combine(const PLFunction& f, const PLFunction& g, PLCombineKind kind) {
  return combine_impl(f, g, kind);
}

PLFunction pl_add(const PLFunction& f, const PLFunction& g) {
  return combine_impl(f, g, PLCombineKind::Add);
}

PLFunction pl_scale(const Rat& alpha, const PLFunction& f) {
  std::vector<PLFunction::Piece> pieces;
  for (const auto& p : f.pieces()) pieces.push_back({alpha * p.slope, alpha * p.intercept});
  std::vector<Rat> values;
  for (const auto& v : f.point_values()) values.push_back(alpha * v);
  return PLFunction(f.breakpoints(), std::move(pieces), std::move(values));
}

PLFunction pl_sup(const PLFunction& f, const PLFunction& g) {
  return combine_impl(f, g, PLCombineKind::Sup);
}

PLFunction pl_inf(const PLFunction& f, const PLFunction& g) {
  return combine_impl(f, g, PLCombineKind::Inf);
}

bool pl_leq(const PLFunction& f, const PLFunction& g, PLOrderMode mode) {
  const std::vector<Rat> breaks = refined_breaks(f, g, false);
  // Open intervals: affine difference is nonnegative iff nonnegative at both
  // endpoint limits.
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Rat mid = (breaks[i] + breaks[i + 1]) / 2;
    const auto piece_at = [&](const PLFunction& h) {
      const auto& br = h.breakpoints();
      const auto it = std::upper_bound(br.begin(), br.end(), mid);
      return h.pieces()[static_cast<size_t>(it - br.begin()) - 1];
    };
    const auto pf = piece_at(f), pg = piece_at(g);
    if (pf.at(breaks[i]) > pg.at(breaks[i])) return false;
    if (pf.at(breaks[i + 1]) > pg.at(breaks[i + 1])) return false;
  }
  if (mode == PLOrderMode::Everywhere)
    for (const Rat& x : breaks)
      if (f.value_at(x) > g.value_at(x)) return false;
  return true;
}

Rat pl_integral(const PLFunction& f) {
  Rat total(0);
  const auto& br = f.breakpoints();
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    const auto& p = f.pieces()[i];
    total += (br[i + 1] - br[i]) * (p.at(br[i]) + p.at(br[i + 1])) / 2;
  }
  return total;
}

std::vector<PLJump> pl_jumps(const PLFunction& f) {
  std::vector<PLJump> out;
  for (size_t i = 0; i < f.breakpoints().size(); ++i) {
    const Rat left = f.left_limit_at(i);
    const Rat right = f.right_limit_at(i);
    const Rat& point = f.point_values()[i];
    if (left != right || left != point)
      out.push_back({f.breakpoints()[i], left, right, point});
  }
  return out;
}

Rat pl_sup_norm(const PLFunction& f) {
  Rat best(0);
  for (const auto& v : f.point_values()) best = rat_max(best, rat_abs(v));
  const auto& br = f.breakpoints();
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    best = rat_max(best, rat_abs(f.pieces()[i].at(br[i])));
    best = rat_max(best, rat_abs(f.pieces()[i].at(br[i + 1])));
  }
  return best;
}

}  // namespace levilab
