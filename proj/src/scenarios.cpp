#include "levilab/scenarios.hpp"

#include <chrono>
#include <sstream>

namespace levilab {

namespace {

using Clock = std::chrono::steady_clock;

struct ClaimTimer {
  Scenario& scenario;
  std::string claim;
  Clock::time_point t0 = Clock::now();

  void record(bool pass, std::string computed, std::string certificate = {}) {
    const auto dt =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
    scenario.claims.push_back({std::move(claim), pass, std::move(computed),
                               std::move(certificate), dt});
  }
};

void finish(Scenario& s, Clock::time_point t0) {
  s.pass = true;
  for (const auto& c : s.claims) s.pass = s.pass && c.pass;
  s.micros = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
}

std::string state_str(const Verdict& v) { return verdict_state_str(v.state); }

DualFunctionalC half_weights() {
  return DualFunctionalC(SeqElement::geometric(Rat(1), Rat(1, 2)), Rat(0));
}

// Bundle 1: the proper inclusions. T(phi,psi) = (0,phi) is quasi-c but not
// sigma-Levi (the limit's L1 part jumps at 1/2); the identity on c is quasi
// but not quasi-c (the odd prefix sums escape c).
Scenario scenario_embed_and_identity(Index horizon) {
  const auto t0 = Clock::now();
  Scenario s{"embed_and_identity", {}, false, 0};

  {
    ClaimTimer timer{s, "T(phi,psi) = (0,phi) is quasi-c-sigma-Levi on the catalog"};
    const auto v = classify_levi(*make_embed_zero_phi("T"), catalog_default(Space::CSumL1), horizon);
    timer.record(v.quasi_c.verified(), state_str(v.quasi_c));
  }
  {
    ClaimTimer timer{s, "T is not sigma-Levi: certificate is the jump at 1/2 (left 1, right 0)"};
    const auto v = classify_levi(*make_embed_zero_phi("T"), catalog_default(Space::CSumL1), horizon);
    const bool refuted = v.sigma_levi.refuted();
    std::string cert = refuted ? certificate_str(*v.sigma_levi.certificate) : "";
    const bool cert_ok = refuted && cert.find("1/2") != std::string::npos &&
                         cert.find("left 1") != std::string::npos &&
                         cert.find("right 0") != std::string::npos;
    timer.record(cert_ok, state_str(v.sigma_levi), cert);
  }
  {
    ClaimTimer timer{s, "I_c is quasi-sigma-Levi (bounded increasing sequences are order Cauchy)"};
    const auto v = classify_levi(*make_identity(Space::C, "I_c"), catalog_default(Space::C), horizon);
    timer.record(v.quasi.verified(), state_str(v.quasi));
  }
  {
    ClaimTimer timer{s, "I_c is not quasi-c: the odd prefix limit (1 on odds, 0 on evens) escapes c"};
    const auto v = classify_levi(*make_identity(Space::C, "I_c"), catalog_default(Space::C), horizon);
    bool ok = v.quasi_c.refuted();
    std::string cert;
    if (ok) {
      cert = certificate_str(*v.quasi_c.certificate);
      const auto* esc = std::get_if<LimitEscapesSpace>(&*v.quasi_c.certificate);
      ok = esc != nullptr &&
           std::get<SeqElement>(esc->pointwise_limit) ==
               SeqElement::geometric(Rat(1), Rat(1), ResidueMask::odd());
    }
    timer.record(ok, state_str(v.quasi_c), cert);
  }
  {
    ClaimTimer timer{s, "the identity-on-c Cauchy witness is 1 - sum_{j<=2n} e_j"};
    const auto fn =
        ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::odd()));
    const auto w = canonical_cauchy_witness(fn, Rat(1));
    bool ok = w.has_value();
    if (ok) {
      const auto expect = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 2, 0);
      ok = w->equal_structure(expect) && check_order_cauchy(fn, *w, horizon).verified();
    }
    timer.record(ok, ok ? "verified" : "missing");
  }

  finish(s, t0);
  return s;
}

// Bundle 2: the diagonal operator S(sum a_n e_n) = sum alpha_n a_n e_n with
// alpha_n = 2^-n, from c to c0.
Scenario scenario_diagonal_c0(Index horizon) {
  const auto t0 = Clock::now();
  Scenario s{"diagonal_c0", {}, false, 0};

  const SeqElement alpha = SeqElement::geometric(Rat(1), Rat(1, 2));
  const OpPtr diag = make_diagonal(Space::C, Space::C0, alpha, "S", true);
  const auto xn =
      ElementSequence::prefix_sum(Space::C, TailTerm(Rat(1), Rat(1), ResidueMask::even()));
  const SeqElement limit = SeqElement::geometric(Rat(1), Rat(1, 2), ResidueMask::even());

  {
    ClaimTimer timer{s, "(S x_n) order converges to sum_k 4^-k e_{2k} (exact rational equality)"};
    const auto image = ElementSequence::image(diag, xn);
    const auto pl = pointwise_limit(image);
    bool ok = pl.limit && std::get<SeqElement>(*pl.limit) == limit;
    if (ok) {
      const auto w = ElementSequence::tail_truncation(Space::C0, limit, 1, 0);
      ok = check_order_convergence(image, Element(limit), w, horizon).verified();
    }
    timer.record(ok, ok ? "verified, limit exact" : "mismatch");
  }
  {
    ClaimTimer timer{s, "no preimage in c: coordinates force 1 on evens, 0 on odds"};
    const auto res = diagonal_preimage(OpDiagonal{alpha}, limit, SeqSpace::C);
    const bool ok = !res.preimage && res.certificate &&
                    res.certificate->reason.find("limit 1") != std::string::npos &&
                    res.certificate->reason.find("limit 0") != std::string::npos;
    timer.record(ok, ok ? "no preimage" : "unexpected",
                 res.certificate ? res.certificate->reason : "");
  }
  {
    ClaimTimer timer{s, "||S - S_i|| = 2^-(i+1) exactly for i = 1..16"};
    bool ok = true;
    for (Index i = 1; i <= 16 && ok; ++i) {
      std::map<Index, Rat> prefix;
      for (Index n = 1; n <= i; ++n) prefix[n] = rat_pow(Rat(1, 2), n);
      const OpPtr si = make_diagonal(Space::C, Space::C0, SeqElement(i + 1, std::move(prefix), {}),
                                     "S" + std::to_string(i));
      const auto dist = op_norm_dist(*diag, *si);
      ok = dist.exact && dist.value == rat_pow(Rat(1, 2), i + 1);
    }
    timer.record(ok, ok ? "all sixteen distances exact" : "mismatch");
  }
  {
    ClaimTimer timer{s, "S_i are sigma-Levi while S is refuted (norm closure fails)"};
    const TestCatalog cat = catalog_default(Space::C, horizon);
    bool ok = true;
    for (Index i : {1, 2, 3, 4, 8, 16}) {
      if (!ok) break;
      std::map<Index, Rat> prefix;
      for (Index n = 1; n <= i; ++n) prefix[n] = rat_pow(Rat(1, 2), n);
      const OpPtr si = make_diagonal(Space::C, Space::C0, SeqElement(i + 1, std::move(prefix), {}),
                                     "S" + std::to_string(i));
      ok = classify_levi(*si, cat, horizon).sigma_levi.verified();
    }
    const auto vs = classify_levi(*diag, cat, horizon);
    ok = ok && vs.sigma_levi.refuted() && vs.quasi_c.verified();
    timer.record(ok, ok ? "S_i verified, S refuted, S quasi-c verified" : "mismatch",
                 vs.sigma_levi.certificate ? certificate_str(*vs.sigma_levi.certificate) : "");
  }

  finish(s, t0);
  return s;
}

// Bundle 3: the section-2 remarks on solid hulls, the delta family, and
// scalar scalings.
Scenario scenario_collective_remarks(Index horizon) {
  const auto t0 = Clock::now();
  Scenario s{"collective_remarks", {}, false, 0};

  {
    ClaimTimer timer{s, "a singleton constant family is collective order convergent"};
    const auto cx = ElementSequence::constant(Space::C, Element(SeqElement::ones()));
    FiniteFamily fam{{cx}, {Element(SeqElement::ones())}};
    const auto w = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 1, 0);
    const auto v = check_collective(SequenceFamily(fam), w, horizon);
    timer.record(v.verified(), state_str(v));
  }
  {
    ClaimTimer timer{s, "the solid-hull member ((1+(-1)^n)/2) x does not order converge"};
    ScalarPattern osc = ScalarPattern::from_tail({TailTerm(Rat(1), Rat(1), ResidueMask::even())});
    const auto member = ElementSequence::pattern_scaled(
        osc, ElementSequence::constant(Space::C, Element(SeqElement::ones())));
    const auto w = ElementSequence::tail_truncation(Space::C, SeqElement::ones(), 2, 0);
    bool all_refuted = true;
    std::string cert;
    for (const Element cand : {Element(SeqElement::zero()), Element(SeqElement::ones()),
                               Element(seq_scale(Rat(1, 2), SeqElement::ones()))}) {
      const auto v = check_order_convergence(member, cand, w, horizon);
      all_refuted = all_refuted && v.refuted() &&
                    std::holds_alternative<FailedDominationAt>(*v.certificate);
      if (v.refuted()) cert = certificate_str(*v.certificate);
    }
    timer.record(all_refuted, all_refuted ? "refuted for every candidate limit" : "unexpected",
                 cert);
  }
  {
    ClaimTimer timer{s, "{(delta_k^n)_n : k} is not collective order-null"};
    const auto w = ElementSequence::pattern_combo(
        Space::Real, {{ScalarPattern::geometric(Rat(1), Rat(1, 2)), Element(Rat(1))}});
    const auto v = check_collective(SequenceFamily(DeltaFamily{}), w, horizon);
    const auto* env = v.refuted() ? std::get_if<EnvelopeLowerBound>(&*v.certificate) : nullptr;
    const bool ok = env != nullptr && env->bound == 1;
    timer.record(ok, state_str(v), v.certificate ? certificate_str(*v.certificate) : "");
  }
  {
    ClaimTimer timer{s, "{lambda a : lambda in R} is not collective order-null for a != 0"};
    const auto base =
        ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1, 2), ResidueMask::all()));
    const auto w = ElementSequence::tail_truncation(
        Space::C0, SeqElement::geometric(Rat(1), Rat(1, 2)), 1, 0);
    ScalarScaledFamily fam{std::make_shared<const ElementSequence>(base)};
    const auto v = check_collective(SequenceFamily(fam), w, horizon);
    const bool ok = v.refuted() && std::holds_alternative<EnvelopeLowerBound>(*v.certificate);
    timer.record(ok, state_str(v), v.certificate ? certificate_str(*v.certificate) : "");
  }

  finish(s, t0);
  return s;
}

// Bundle 4: {T_k} on c0 with x_n = sum_{m<=n} e_m.
Scenario scenario_coordinate_evals(Index horizon) {
  const auto t0 = Clock::now();
  Scenario s{"coordinate_evals", {}, false, 0};

  {
    ClaimTimer timer{s, "the oscillation envelope equals 1 at every n <= 128"};
    const auto xn =
        ElementSequence::prefix_sum(Space::C0, TailTerm(Rat(1), Rat(1), ResidueMask::all()));
    CoordinateImagesFamily fam{std::make_shared<const ElementSequence>(xn)};
    bool ok = true;
    for (Index n = 1; n <= 128 && ok; ++n) {
      const auto env = family_envelope(SequenceFamily(fam), n);
      ok = env.value && std::get<Rat>(*env.value) == 1;
    }
    timer.record(ok, ok ? "envelope constant 1" : "mismatch");
  }
  {
    ClaimTimer timer{s, "{T_k} is not even collectively quasi-sigma-Levi"};
    OperatorSet tk{"{T_k}", {}, true, Space::C0, Space::Real};
    const auto v = classify_collective(tk, catalog_default(Space::C0, horizon), horizon);
    const auto* env = v.quasi.refuted() ? std::get_if<EnvelopeLowerBound>(&*v.quasi.certificate)
                                        : nullptr;
    const bool ok = env != nullptr && env->bound == 1 && v.quasi_c.refuted() &&
                    v.sigma_levi.refuted();
    timer.record(ok, state_str(v.quasi),
                 v.quasi.certificate ? certificate_str(*v.quasi.certificate) : "");
  }
  {
    ClaimTimer timer{s, "each T_k alone is sigma-Levi (rank one)"};
    const TestCatalog cat = catalog_default(Space::C0, horizon);
    bool ok = true;
    for (Index k = 1; k <= 3 && ok; ++k) {
      const OpPtr tk = make_eval_functional(Space::C0, k, "T" + std::to_string(k));
      ok = classify_levi(*tk, cat, horizon).sigma_levi.verified();
    }
    timer.record(ok, ok ? "verified for k = 1..3" : "mismatch");
  }

  finish(s, t0);
  return s;
}

// Bundle 5: the domination example 0 <= S <= T where T has rank one.
Scenario scenario_domination(Index horizon) {
  const auto t0 = Clock::now();
  Scenario s{"domination", {}, false, 0};

  const OpPtr diag = make_diagonal(Space::C, Space::C, SeqElement::geometric(Rat(1), Rat(1, 2)),
                                   "S");
  const OpPtr rank_one = make_finite_rank(Space::C, Space::C,
                                          {{half_weights(), Element(SeqElement::ones())}}, "T");
  const TestCatalog cat = catalog_default(Space::C, horizon);

  {
    ClaimTimer timer{s, "0 <= S <= T holds row-wise"};
    const OpPtr zero = make_diagonal(Space::C, Space::C, SeqElement::zero(), "0");
    const bool ok = op_leq(*zero, *diag) && op_leq(*diag, *rank_one);
    timer.record(ok, ok ? "verified" : "violated");
  }
  {
    ClaimTimer timer{s, "T has rank one and is sigma-Levi"};
    const auto v = classify_levi(*rank_one, cat, horizon);
    timer.record(v.sigma_levi.verified(), state_str(v.sigma_levi));
  }
  {
    ClaimTimer timer{s, "the transferred quasi witness 2 p_n verifies for {S}"};
    std::vector<WitnessSequence> wc;
    for (const auto& entry : cat.entries) {
      const auto res = finite_rank_levi_limit(*rank_one, entry.seq, entry.bound);
      wc.push_back(ElementSequence::scaled(Rat(2), res.witness));
    }
    OperatorSet a{"{S}", {diag}, false, Space::C, Space::C};
    OperatorSet c{"{T}", {rank_one}, false, Space::C, Space::C};
    const auto out = domination_transfer(a, c, {0}, wc, cat, horizon);
    timer.record(out.all_verified, out.all_verified ? "verified" : "failed", "2 p_n");
  }
  {
    ClaimTimer timer{s, "domination does not transfer sigma-Levi: S stays refuted"};
    const auto v = classify_levi(*diag, cat, horizon);
    const bool ok = v.sigma_levi.refuted() && v.quasi.verified();
    timer.record(ok, state_str(v.sigma_levi),
                 v.sigma_levi.certificate ? certificate_str(*v.sigma_levi.certificate) : "");
  }

  finish(s, t0);
  return s;
}

}  // namespace

ScenarioReport run_paper_scenarios(Index horizon) {
  ScenarioReport report;
  report.scenarios.push_back(scenario_embed_and_identity(horizon));
  report.scenarios.push_back(scenario_diagonal_c0(horizon));
  report.scenarios.push_back(scenario_collective_remarks(horizon));
  report.scenarios.push_back(scenario_coordinate_evals(horizon));
  report.scenarios.push_back(scenario_domination(horizon));
  report.all_pass = true;
  for (const auto& s : report.scenarios) report.all_pass = report.all_pass && s.pass;
  return report;
}

Scenario run_paper_scenario(const std::string& name, Index horizon) {
  if (name == "embed_and_identity") return scenario_embed_and_identity(horizon);
  if (name == "diagonal_c0") return scenario_diagonal_c0(horizon);
  if (name == "collective_remarks") return scenario_collective_remarks(horizon);
  if (name == "coordinate_evals") return scenario_coordinate_evals(horizon);
  if (name == "domination") return scenario_domination(horizon);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace levilab
