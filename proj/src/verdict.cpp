#include "levilab/verdict.hpp"

#include <sstream>

namespace levilab {

std::string certificate_str(const Certificate& c) {
  std::ostringstream os;
  if (const auto* f = std::get_if<FailedDominationAt>(&c)) {
    os << "domination fails at n=" << f->n;
    if (!f->where.empty()) os << " (" << f->where << ": " << f->lhs << " > " << f->rhs << ")";
  } else if (const auto* d = std::get_if<NotDecreasingAt>(&c)) {
    os << "witness not decreasing at n=" << d->n;
  } else if (const auto* p = std::get_if<PointwiseInfPositive>(&c)) {
    os << "pointwise infimum >= " << rat_str(p->bound) << " at " << p->coordinate;
  } else if (const auto* l = std::get_if<LimitEscapesSpace>(&c)) {
    os << "pointwise limit escapes " << space_name(l->why.space) << ": " << l->why.reason;
  } else if (const auto* e = std::get_if<EnvelopeLowerBound>(&c)) {
    os << "envelope lower bound " << rat_str(e->bound) << " at n=" << e->at;
    if (!e->family.empty()) os << " for " << e->family;
  } else if (const auto* n = std::get_if<NoPreimage>(&c)) {
    os << "no preimage: " << n->reason;
  }
  return os.str();
}

std::string verdict_state_str(VerdictState s) {
  switch (s) {
    case VerdictState::Verified: return "verified";
    case VerdictState::Refuted: return "refuted";
    case VerdictState::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string verdict_str(const Verdict& v) {
  std::ostringstream os;
  os << verdict_state_str(v.state);
  if (v.certificate) os << " [" << certificate_str(*v.certificate) << "]";
  if (v.state == VerdictState::Inconclusive) os << " (horizon " << v.horizon << ")";
  if (!v.argument.empty() && v.state == VerdictState::Verified) os << " (" << v.argument << ")";
  return os.str();
}

}  // namespace levilab
