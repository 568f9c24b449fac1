#ifndef LEVILAB_OPERATORS_HPP
#define LEVILAB_OPERATORS_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levilab/sequence.hpp"

namespace levilab {

/// Element of the dual of c, modeled as a summable weight family over N plus
/// a coefficient at infinity: f(x) = sum_n weights(n) x(n) + lim_coeff lim(x).
/// The lattice structure is coordinatewise on (weights, lim_coeff).
struct DualFunctionalC {
  SeqElement weights;  // all tail ratios < 1 (absolutely summable)
  Rat lim_coeff;

  DualFunctionalC() : lim_coeff(0) {}
  DualFunctionalC(SeqElement w, Rat lc);

  /// sum_n |weights(n)| + |lim_coeff| — the c' norm under the summable-family
  /// identification.
  Rat norm() const;
  bool is_positive() const;
  bool is_zero() const { return weights.is_zero() && lim_coeff == 0; }

  bool operator==(const DualFunctionalC&) const = default;
};

/// Exact evaluation; requires membership in c whenever lim_coeff != 0.
Rat functional_eval(const DualFunctionalC& f, const SeqElement& x);

/// f+ = (weights+, max(lim_coeff,0)); f- = (-f)+; f = f+ - f- by construction.
DualFunctionalC functional_positive_part(const DualFunctionalC& f);
DualFunctionalC functional_negative_part(const DualFunctionalC& f);

DualFunctionalC functional_add(const DualFunctionalC& a, const DualFunctionalC& b);
DualFunctionalC functional_scale(const Rat& alpha, const DualFunctionalC& f);

/// Exact value sequence m -> f(S(m)) as a scalar pattern, for the raw
/// catalog generator shapes.
ScalarPattern functional_on_sequence(const DualFunctionalC& f, const ElementSequence& s);

// --- operator descriptions ---

/// (Tx)(n) = coeffs(n) * x(n).
struct OpDiagonal {
  SeqElement coeffs;
};

/// T = sum_k f_k (x) y_k.
struct OpFiniteRank {
  std::vector<std::pair<DualFunctionalC, Element>> ranks;
};

/// T(phi, psi) = (0, phi) on C[0,1] (+) L1.
struct OpEmbedZeroPhi {};

struct OpIdentity {};

/// T x = x(k), into the reals.
struct OpEvalFunctional {
  Index k = 1;
};

struct OpScaled {
  Rat alpha;
  std::shared_ptr<const OperatorDesc> inner;
};

struct OpSum {
  std::shared_ptr<const OperatorDesc> lhs, rhs;
};

using OperatorKind =
    std::variant<OpDiagonal, OpFiniteRank, OpEmbedZeroPhi, OpIdentity, OpEvalFunctional, OpScaled,
                 OpSum>;

struct OperatorDesc {
  Space domain;
  Space codomain;
  OperatorKind kind;
  std::string name;            // for reports
  bool compact_assumed = false;  // tagged assumption, never decided

  OperatorDesc(Space dom, Space cod, OperatorKind k, std::string nm = {},
               bool compact = false)
      : domain(dom), codomain(cod), kind(std::move(k)), name(std::move(nm)),
        compact_assumed(compact) {}
};

using OpPtr = std::shared_ptr<const OperatorDesc>;

OpPtr make_diagonal(Space dom, Space cod, SeqElement coeffs, std::string name = {},
                    bool compact = false);
OpPtr make_finite_rank(Space dom, Space cod,
                       std::vector<std::pair<DualFunctionalC, Element>> ranks,
                       std::string name = {});
OpPtr make_embed_zero_phi(std::string name = {});
OpPtr make_identity(Space s, std::string name = {});
OpPtr make_eval_functional(Space dom, Index k, std::string name = {});
OpPtr make_scaled(const Rat& alpha, OpPtr inner, std::string name = {});
OpPtr make_sum(OpPtr lhs, OpPtr rhs, std::string name = {});

Element op_apply(const OperatorDesc& op, const Element& x);

/// Structural positivity (maps the positive cone into itself) for the
/// supported variants.
bool op_is_positive(const OperatorDesc& op);

/// Flattens scaled/sum chains onto a diagonal part plus a finite-rank part;
/// nullopt when a summand is outside that normal form (e.g. EmbedZeroPhi).
struct DiagPlusFiniteRank {
  SeqElement diag;
  std::vector<std::pair<DualFunctionalC, Element>> ranks;
};
std::optional<DiagPlusFiniteRank> op_normal_form(const OperatorDesc& op);

/// S <= T in the operator order: every row functional of T - S is positive.
/// Decided from the normal form row-wise; requires matching spaces.
bool op_leq(const OperatorDesc& s, const OperatorDesc& t);

struct UnsupportedOperator : std::runtime_error {
  explicit UnsupportedOperator(const std::string& what) : std::runtime_error(what) {}
};

/// Exact operator norm of A - B for diagonal differences (sup of |coeffs|),
/// exact-or-upper-bound sum ||f_k|| ||y_k|| for finite-rank differences.
struct OpNormResult {
  Rat value;
  bool exact;
};
OpNormResult op_norm_dist(const OperatorDesc& a, const OperatorDesc& b);

struct ZeroCoefficient : std::runtime_error {
  ZeroCoefficient() : std::runtime_error("diagonal preimage: zero coefficient") {}
};

/// Solve coeffs(n) x(n) = y(n) in the grammar, then run membership in the
/// domain space. Returns the solution or the no-preimage certificate.
struct PreimageResult {
  std::optional<SeqElement> preimage;
  std::optional<NoPreimage> certificate;
};
PreimageResult diagonal_preimage(const OpDiagonal& d, const SeqElement& y, SeqSpace domain_tag);

/// T = T1 - T2 with T1 from the positive parts, T2 from the negative parts.
std::pair<OpFiniteRank, OpFiniteRank> finite_rank_decompose(const OpFiniteRank& t);

struct NotMonotone : std::runtime_error {
  NotMonotone() : std::runtime_error("sequence is not increasing") {}
};
struct NotBounded : std::runtime_error {
  NotBounded() : std::runtime_error("sequence exceeds its stated bound") {}
};

/// The constructive sigma-Levi limit of a finite-rank operator on an
/// increasing bounded positive sequence: exact functional limits a_k, b_k,
/// the order limit sum (a_k - b_k) y_k, the canonical residual witness, and
/// a preimage in the domain grammar (or a certificate that the span search
/// found none).
struct FiniteRankLeviResult {
  std::vector<Rat> pos_limits;  // a_k
  std::vector<Rat> neg_limits;  // b_k
  Element limit;
  ElementSequence witness;  // pattern combo: sum (a_k - v_k+(n)) |y_k| + ...
  std::optional<Element> preimage;
  std::optional<NoPreimage> no_preimage;
};
FiniteRankLeviResult finite_rank_levi_limit(const OperatorDesc& op, const ElementSequence& s,
                                            const std::optional<Rat>& bound = std::nullopt);

/// A diagonal with finitely supported coefficients as a sum of rank-one maps.
std::optional<OpFiniteRank> diagonal_as_finite_rank(const OpDiagonal& d);

/// Solve T x = target for x in span{unit, e_1..e_jmax} over the domain
/// grammar; exact linear algebra, membership-checked.
std::optional<Element> solve_preimage_in_span(const OperatorDesc& op, const Element& target,
                                              Index jmax);

std::string op_str(const OperatorDesc& op);

}  // namespace levilab

#endif  // LEVILAB_OPERATORS_HPP
