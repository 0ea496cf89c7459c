// Fragment-restricted canonical worlds and the two rescaling constructions
// that realise e(v,□φ) = v(□φ) and e(v,◇φ) = v(◇φ) in the canonical model.
//
// A canonical world is a valuation of the atoms a fragment F needs. Γ and U
// range over F. "Satisfies every theorem" is approximated by the F-instances
// of the modal schemes plus a few rule-derived surrogates
// (fragment_axiom_instances).

#ifndef GKL_CANONICAL_HPP
#define GKL_CANONICAL_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/kripke.hpp"
#include "gkl/propositional.hpp"
#include "gkl/schemes.hpp"
#include "gkl/truth_value.hpp"

namespace gkl {

enum class CanonicalErrc {
  MismatchedFragment,
  IncompleteWorld,
  Precondition,
  Fact,
  Sequence,
  Postcondition,
  Epsilon,
};

inline const char* to_string(CanonicalErrc c) {
  switch (c) {
    case CanonicalErrc::MismatchedFragment: return "mismatched-fragment";
    case CanonicalErrc::IncompleteWorld: return "incomplete-world";
    case CanonicalErrc::Precondition: return "precondition";
    case CanonicalErrc::Fact: return "fact";
    case CanonicalErrc::Sequence: return "sequence-invariant";
    case CanonicalErrc::Postcondition: return "postcondition";
    case CanonicalErrc::Epsilon: return "epsilon";
  }
  return "?";
}

class CanonicalError : public Error {
 public:
  CanonicalError(CanonicalErrc code, const std::string& msg)
      : Error(std::string(to_string(code)) + ": " + msg), code_(code) {}
  CanonicalErrc code() const { return code_; }

 private:
  CanonicalErrc code_;
};

struct CanonicalWorld {
  Fragment fragment;
  PropValuation values;

  TruthValue operator()(const Formula& f) const { return eval_prop(values, f); }

  /// World atoms of the fragment without a value, in Formula order.
  std::vector<Formula> missing_atoms() const {
    std::vector<Formula> out;
    for (const auto& a : fragment.world_atoms()) {
      if (!values.count(a)) out.push_back(a);
    }
    return out;
  }
  bool complete() const { return missing_atoms().empty(); }
};

/// The canonical world of x: every world atom of F valued as in m.
inline CanonicalWorld world_from_model(const GKModel& m, std::size_t x, const Fragment& fragment) {
  detail::require_declared(m, fragment.variables());
  const auto atoms = fragment.world_atoms();
  const std::vector<Formula> list(atoms.begin(), atoms.end());
  Circuit c(list, Circuit::Mode::Modal);
  const auto table = evaluate(m, c);
  CanonicalWorld w{fragment, {}};
  for (std::size_t i = 0; i < list.size(); ++i) w.values.emplace(list[i], table[c.roots()[i]][x]);
  return w;
}

namespace detail {

inline bool atoms_within(const Formula& f, const FormulaSet& allowed) {
  for (const auto& a : prop_atoms(f)) {
    if (!allowed.count(a)) return false;
  }
  return true;
}

inline void require_complete(const CanonicalWorld& v, const Fragment& fragment, const char* who) {
  if (!(v.fragment == fragment)) throw CanonicalError(CanonicalErrc::MismatchedFragment, std::string(who) + " has a different fragment");
  const auto missing = v.missing_atoms();
  if (!missing.empty()) {
    throw CanonicalError(CanonicalErrc::IncompleteWorld, std::string(who) + " has no value for " + render(missing[0]));
  }
}

}  // namespace detail

/// F-instances of the modal schemes and T1–T4 whose atoms are world atoms
/// of F, followed by the rule surrogates: □θ for GD-tautologies θ ∈ F, and
/// □θ₁→□θ₂, ◇θ₁→◇θ₂ whenever θ₁→θ₂ is a GD-tautology over F.
inline std::vector<Formula> fragment_axiom_instances(const Fragment& fragment) {
  const auto allowed = fragment.world_atoms();
  const auto& fs = fragment.formulas();
  FormulaSet seen;
  std::vector<Formula> out;
  auto add = [&](const Formula& f) {
    if (detail::atoms_within(f, allowed) && seen.insert(f).second) out.push_back(f);
  };
  std::vector<Scheme> all = schemes::modal();
  for (const auto& s : schemes::derived()) all.push_back(s);
  for (const auto& s : all) {
    std::vector<std::size_t> idx(s.arity(), 0);
    for (;;) {
      Substitution sigma;
      for (std::size_t i = 0; i < idx.size(); ++i) sigma.emplace(s.metavariables[i], fs[idx[i]]);
      add(instantiate(s, sigma));
      std::size_t k = idx.size();
      while (k > 0 && ++idx[k - 1] == fs.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  for (const auto& t : fs) {
    if (gd_tautology(t)) add(Formula::box(t));
  }
  for (const auto& a : fs) {
    for (const auto& b : fs) {
      if (a == b || !gd_tautology(Formula::imp(a, b))) continue;
      add(Formula::imp(Formula::box(a), Formula::box(b)));
      add(Formula::imp(Formula::dia(a), Formula::dia(b)));
    }
  }
  return out;
}

/// Instances from fragment_axiom_instances that v does not send to 1.
inline std::vector<Formula> axiom_violations(const CanonicalWorld& v) {
  std::vector<Formula> bad;
  for (const auto& f : fragment_axiom_instances(v.fragment)) {
    if (!v(f).is_one()) bad.push_back(f);
  }
  return bad;
}

/// S^F vw = min over ψ ∈ F of (v(□ψ) ⇒ w(ψ)) ∧ (w(ψ) ⇒ v(◇ψ)).
inline TruthValue canonical_s(const CanonicalWorld& v, const CanonicalWorld& w, const Fragment& fragment) {
  detail::require_complete(v, fragment, "v");
  if (!(w.fragment == fragment)) throw CanonicalError(CanonicalErrc::MismatchedFragment, "w has a different fragment");
  TruthValue acc = TruthValue::one();
  for (const auto& psi : fragment) {
    TruthValue wv;
    try {
      wv = w(psi);
    } catch (const UnknownAtomError& e) {
      throw CanonicalError(CanonicalErrc::IncompleteWorld, std::string("w: ") + e.what());
    }
    acc = meet(acc, meet(residuum(v(Formula::box(psi)), wv), residuum(wv, v(Formula::dia(psi)))));
  }
  return acc;
}

/// e(family[i], φ) in the canonical model restricted to `family`: variables
/// read off the world, and □ψ, ◇ψ as min/max over the family with S^F and
/// w(ψ) taken from each world's own valuation.
inline TruthValue canonical_eval(const std::vector<CanonicalWorld>& family, std::size_t i, const Formula& phi) {
  const auto& v = family.at(i);
  switch (phi.kind()) {
    case Connective::Bot: return TruthValue::zero();
    case Connective::Var: return v(phi);
    case Connective::And: return meet(canonical_eval(family, i, phi.lhs()), canonical_eval(family, i, phi.rhs()));
    case Connective::Or: return join(canonical_eval(family, i, phi.lhs()), canonical_eval(family, i, phi.rhs()));
    case Connective::Imp: return residuum(canonical_eval(family, i, phi.lhs()), canonical_eval(family, i, phi.rhs()));
    case Connective::Box: {
      TruthValue acc = TruthValue::one();
      for (const auto& w : family) acc = meet(acc, residuum(canonical_s(v, w, v.fragment), w(phi.sub())));
      return acc;
    }
    case Connective::Dia: {
      TruthValue acc = TruthValue::zero();
      for (const auto& w : family) acc = join(acc, meet(canonical_s(v, w, v.fragment), w(phi.sub())));
      return acc;
    }
  }
  return TruthValue::zero();
}

namespace detail {

inline TruthValue require_alpha(const CanonicalWorld& v, const Fragment& fragment, const Formula& modal,
                                const TruthValue& alpha) {
  require_complete(v, fragment, "v");
  if (!fragment.contains(modal)) {
    throw CanonicalError(CanonicalErrc::Precondition, render(modal) + " is not in the fragment");
  }
  const auto actual = v(modal);
  if (actual != alpha) {
    throw CanonicalError(CanonicalErrc::Precondition,
                         "v(" + render(modal) + ") is " + actual.str() + ", not " + alpha.str());
  }
  return actual;
}

}  // namespace detail

/// Γ = {θ : v(□θ) > α} ∪ {θ₁→θ₂ : v(◇θ₁) ≤ v(□θ₂)} ∪ {(θ₂→θ₁)→θ₁ : v(◇θ₁) < v(□θ₂)},
/// all θ ranging over F.
inline FormulaSet gamma_set(const CanonicalWorld& v, const Fragment& fragment, const Formula& phi,
                            const TruthValue& alpha) {
  detail::require_alpha(v, fragment, Formula::box(phi), alpha);
  if (alpha.is_one()) throw CanonicalError(CanonicalErrc::Precondition, "v(□φ) must be below 1");
  FormulaSet out;
  for (const auto& t : fragment) {
    if (v(Formula::box(t)) > alpha) out.insert(t);
  }
  for (const auto& t1 : fragment) {
    const auto d1 = v(Formula::dia(t1));
    for (const auto& t2 : fragment) {
      const auto b2 = v(Formula::box(t2));
      if (d1 <= b2) out.insert(Formula::imp(t1, t2));
      if (d1 < b2) out.insert(Formula::imp(Formula::imp(t2, t1), t1));
    }
  }
  return out;
}

/// U = {θ : v(◇θ) < α} ∪ {ϑ₂→ϑ₁ : v(◇ϑ₁) < v(□ϑ₂), v(◇ϑ₁) < α}
///   ∪ {(ϑ₁→ϑ₂)→ϑ₁ : v(◇ϑ₁) = v(□ϑ₂) < α}, over F.
inline FormulaSet u_set(const CanonicalWorld& v, const Fragment& fragment, const Formula& phi,
                        const TruthValue& alpha) {
  detail::require_alpha(v, fragment, Formula::dia(phi), alpha);
  if (alpha.is_zero()) throw CanonicalError(CanonicalErrc::Precondition, "v(◇φ) must be above 0");
  FormulaSet out;
  for (const auto& t : fragment) {
    if (v(Formula::dia(t)) < alpha) out.insert(t);
  }
  for (const auto& t1 : fragment) {
    const auto d1 = v(Formula::dia(t1));
    if (!(d1 < alpha)) continue;
    for (const auto& t2 : fragment) {
      const auto b2 = v(Formula::box(t2));
      if (d1 < b2) out.insert(Formula::imp(t2, t1));
      if (d1 == b2) out.insert(Formula::imp(Formula::imp(t1, t2), t1));
    }
  }
  return out;
}

struct FactViolation {
  std::string fact;  // "#1".."#6" or "##1".."##5"
  Formula theta1, theta2;

  std::string str() const {
    return "fact " + fact + " fails for θ1 = " + render(theta1) + ", θ2 = " + render(theta2);
  }
};

/// First failure of facts #1–#6 for u relative to v and α, pairs taken in
/// F order. #1 and #5 are unary; there θ1 = θ2.
inline std::optional<FactViolation> check_box_facts(const CanonicalWorld& v, const PropValuation& u,
                                                    const Fragment& fragment, const TruthValue& alpha) {
  const auto one = TruthValue::one();
  const auto zero = TruthValue::zero();
  for (const auto& t : fragment) {
    if (v(Formula::box(t)) > alpha && eval_prop(u, t) != one) return FactViolation{"#1", t, t};
  }
  for (const auto& t1 : fragment) {
    for (const auto& t2 : fragment) {
      const auto d1 = v(Formula::dia(t1)), b2 = v(Formula::box(t2));
      const auto u1 = eval_prop(u, t1), u2 = eval_prop(u, t2);
      if (d1 <= b2 && !(u1 <= u2)) return FactViolation{"#2", t1, t2};
      if (d1 < b2 && !(u1 == one || u1 < u2)) return FactViolation{"#3", t1, t2};
      if (u2 < u1 && !(b2 < d1)) return FactViolation{"#4", t1, t2};
    }
  }
  for (const auto& t : fragment) {
    if (v(Formula::box(t)) > zero && !(eval_prop(u, t) > zero)) return FactViolation{"#5", t, t};
  }
  for (const auto& t1 : fragment) {
    for (const auto& t2 : fragment) {
      const auto u1 = eval_prop(u, t1), u2 = eval_prop(u, t2);
      if (u2 <= u1 && u1 < one && !(v(Formula::box(t2)) <= v(Formula::dia(t1)))) return FactViolation{"#6", t1, t2};
    }
  }
  return std::nullopt;
}

/// First failure of facts ##1–##5.
inline std::optional<FactViolation> check_diamond_facts(const CanonicalWorld& v, const PropValuation& u,
                                                        const Fragment& fragment, const TruthValue& alpha) {
  const auto one = TruthValue::one();
  const auto zero = TruthValue::zero();
  for (const auto& t : fragment) {
    if (v(Formula::dia(t)) < alpha && !(eval_prop(u, t) < one)) return FactViolation{"##1", t, t};
  }
  for (const auto& t1 : fragment) {
    const auto d1 = v(Formula::dia(t1));
    const auto u1 = eval_prop(u, t1);
    for (const auto& t2 : fragment) {
      const auto b2 = v(Formula::box(t2));
      const auto u2 = eval_prop(u, t2);
      if (d1 < b2 && d1 < alpha && !(u1 < u2)) return FactViolation{"##2", t1, t2};
      if (d1 <= b2 && d1 < alpha && !(u1 <= u2)) return FactViolation{"##3", t1, t2};
    }
  }
  for (const auto& t : fragment) {
    if (eval_prop(u, t).is_zero() && !v(Formula::box(t)).is_zero()) return FactViolation{"##4", t, t};
  }
  for (const auto& t : fragment) {
    if (v(Formula::dia(t)).is_zero() && eval_prop(u, t) != zero) return FactViolation{"##5", t, t};
  }
  return std::nullopt;
}

struct WitnessOptions {
  /// Also value every world atom of F and require the fragment axiom
  /// instances, so that the rescaled witness is itself a canonical world.
  bool full_world = true;
  std::uint64_t step_limit = UINT64_MAX;
};

/// u with u(Γ) = 1 and u(φ) < 1, from the GD search.
inline std::optional<PropValuation> box_oracle(const CanonicalWorld& v, const Fragment& fragment, const Formula& phi,
                                               const WitnessOptions& opts = {}) {
  const auto gamma = gamma_set(v, fragment, phi, v(Formula::box(phi)));
  std::vector<Formula> theory(gamma.begin(), gamma.end());
  GdSearchOptions gd;
  gd.step_limit = opts.step_limit;
  gd.extra_atoms = fragment.atoms();
  if (opts.full_world) {
    const auto ax = fragment_axiom_instances(fragment);
    theory.insert(theory.end(), ax.begin(), ax.end());
    gd.extra_atoms = fragment.world_atoms();
  }
  return gd_counter_valuation(theory, {phi}, gd);
}

/// u with u(φ) = 1 and u(ξ) < 1 for every ξ ∈ U.
inline std::optional<PropValuation> diamond_oracle(const CanonicalWorld& v, const Fragment& fragment,
                                                   const Formula& phi, const WitnessOptions& opts = {}) {
  const auto us = u_set(v, fragment, phi, v(Formula::dia(phi)));
  std::vector<Formula> theory{phi};
  GdSearchOptions gd;
  gd.step_limit = opts.step_limit;
  gd.extra_atoms = fragment.atoms();
  if (opts.full_world) {
    const auto ax = fragment_axiom_instances(fragment);
    theory.insert(theory.end(), ax.begin(), ax.end());
    gd.extra_atoms = fragment.world_atoms();
  }
  return gd_counter_valuation(theory, std::vector<Formula>(us.begin(), us.end()), gd);
}

/// One piece of g: the interval lo..hi (each end open or closed) mapped
/// affinely onto img_lo..img_hi with the same openness. A point piece has
/// lo == hi.
struct GPiece {
  TruthValue lo, hi;
  bool lo_closed = true, hi_closed = false;
  TruthValue img_lo, img_hi;

  bool contains(const TruthValue& x) const {
    if (lo == hi) return x == lo;
    return (lo_closed ? lo <= x : lo < x) && (hi_closed ? x <= hi : x < hi);
  }
  TruthValue apply(const TruthValue& x) const {
    if (lo == hi) return img_lo;
    const auto r = img_lo.rational() + (x.rational() - lo.rational()) * (img_hi.rational() - img_lo.rational()) /
                                           (hi.rational() - lo.rational());
    return TruthValue(r);
  }
};

/// Strictly increasing piecewise-affine map of [0,1] onto a subset of [0,1].
struct PiecewiseMap {
  std::vector<GPiece> pieces;

  TruthValue operator()(const TruthValue& x) const {
    for (const auto& p : pieces) {
      if (p.contains(x)) return p.apply(x);
    }
    throw CanonicalError(CanonicalErrc::Sequence, "g is undefined at " + x.str());
  }
};

struct RescaleTrace {
  enum class Kind { Box, Diamond };
  Kind kind = Kind::Box;
  Formula phi;
  TruthValue alpha, epsilon;
  std::vector<TruthValue> levels;    // B or C, ascending
  std::vector<TruthValue> level_u;   // u_b or u_c per level
  std::vector<TruthValue> seq;       // b_0..b_N or c_0..c_N
  std::vector<TruthValue> seq_u;     // u at each sequence element
  std::vector<Formula> reps;         // φ_i attaining seq_u[i]
  std::vector<TruthValue> bounds;    // p_0..p_N or q_0..q_{N-1}
  PiecewiseMap g;
  CanonicalWorld w;
  TruthValue s;       // canonical_s(v, w, F)
  TruthValue w_phi;   // w(φ)
  TruthValue result;  // (s ⇒ w(φ)) for Box, s ∧ w(φ) for Diamond
};

namespace detail {

[[noreturn]] inline void sequence_error(const std::string& msg) {
  throw CanonicalError(CanonicalErrc::Sequence, msg);
}

/// Applies g to u, checks that g commutes with evaluation on F, and fills
/// in the witness fields.
inline void finish_trace(RescaleTrace& t, const CanonicalWorld& v, const PropValuation& u, const Fragment& fragment) {
  for (std::size_t i = 1; i < t.g.pieces.size(); ++i) {
    if (!(t.g.pieces[i - 1].img_hi <= t.g.pieces[i].img_lo)) sequence_error("images of g overlap");
  }
  t.w = CanonicalWorld{fragment, {}};
  for (const auto& [atom, value] : u) t.w.values.emplace(atom, t.g(value));
  for (const auto& psi : fragment) {
    if (t.w(psi) != t.g(eval_prop(u, psi))) sequence_error("g does not commute with " + render(psi));
  }
  t.s = canonical_s(v, t.w, fragment);
  t.w_phi = t.w(t.phi);
}

inline void check_values(const PropValuation& u, const Fragment& fragment) {
  for (const auto& a : fragment.atoms()) {
    if (!u.count(a)) throw CanonicalError(CanonicalErrc::Precondition, "u has no value for " + render(a));
  }
}

}  // namespace detail

/// Box witness: from u with u(Γ) = 1, u(φ) < 1 builds w = g∘u with
/// (S^F vw ⇒ w(φ)) < α+ε where α = v(□φ).
inline RescaleTrace rescale_box_witness(const CanonicalWorld& v, const PropValuation& u, const Fragment& fragment,
                                        const Formula& phi, const TruthValue& epsilon) {
  const auto box_phi = Formula::box(phi);
  detail::require_complete(v, fragment, "v");
  if (!fragment.contains(box_phi)) throw CanonicalError(CanonicalErrc::Precondition, render(box_phi) + " is not in the fragment");
  detail::check_values(u, fragment);
  const auto alpha = v(box_phi);
  const auto one = TruthValue::one();
  if (alpha.is_one()) throw CanonicalError(CanonicalErrc::Precondition, "v(□φ) must be below 1");
  if (epsilon.is_zero() || !(alpha.rational() + epsilon.rational() < 1)) {
    throw CanonicalError(CanonicalErrc::Epsilon, "need 0 < ε and α+ε < 1");
  }
  for (const auto& g : gamma_set(v, fragment, phi, alpha)) {
    if (!eval_prop(u, g).is_one()) throw CanonicalError(CanonicalErrc::Precondition, "u(" + render(g) + ") < 1 for a member of Γ");
  }
  if (eval_prop(u, phi).is_one()) throw CanonicalError(CanonicalErrc::Precondition, "u(φ) = 1");
  if (auto bad = check_box_facts(v, u, fragment, alpha)) throw CanonicalError(CanonicalErrc::Fact, bad->str());

  RescaleTrace t;
  t.kind = RescaleTrace::Kind::Box;
  t.phi = phi;
  t.alpha = alpha;
  t.epsilon = epsilon;

  // B with u_b = min u(θ) over v(□θ) = b; the representative is the first
  // minimiser in F order.
  std::map<TruthValue, std::pair<TruthValue, Formula>> by_level;
  for (const auto& th : fragment) {
    const auto b = v(Formula::box(th));
    const auto ut = eval_prop(u, th);
    auto it = by_level.find(b);
    if (it == by_level.end()) by_level.emplace(b, std::make_pair(ut, th));
    else if (ut < it->second.first) it->second = {ut, th};
  }
  for (const auto& [b, entry] : by_level) {
    t.levels.push_back(b);
    t.level_u.push_back(entry.first);
  }

  TruthValue b = alpha;
  for (;;) {
    const auto& entry = by_level.at(b);
    t.seq.push_back(b);
    t.seq_u.push_back(entry.first);
    t.reps.push_back(entry.second);
    std::optional<TruthValue> next;
    for (const auto& [c, e] : by_level) {
      if (c < b && e.first < entry.first) next = c;  // ascending, so the last hit is the max
    }
    if (!next) break;
    b = *next;
  }
  const std::size_t n = t.seq.size() - 1;
  if (!t.seq.back().is_zero()) detail::sequence_error("b_N = " + t.seq.back().str() + ", expected 0");
  if (!t.seq_u.back().is_zero()) detail::sequence_error("u at b_N is " + t.seq_u.back().str() + ", expected 0");
  if (!(t.seq_u.front() < one)) detail::sequence_error("u at b_0 is 1");

  // p_0 = min(α+ε, min{v(◇θ) > α}); p_i = min(b_{i-1}, min{v(◇θ) > b_i}).
  auto min_dia_above = [&](const TruthValue& x) {
    TruthValue m = one;
    for (const auto& th : fragment) {
      const auto d = v(Formula::dia(th));
      if (d > x && d < m) m = d;
    }
    return m;
  };
  t.bounds.push_back(meet(TruthValue(alpha.rational() + epsilon.rational()), min_dia_above(alpha)));
  for (std::size_t i = 1; i <= n; ++i) t.bounds.push_back(meet(t.seq[i - 1], min_dia_above(t.seq[i])));
  for (std::size_t i = 0; i <= n; ++i) {
    if (!(t.bounds[i] > t.seq[i])) detail::sequence_error("p_" + std::to_string(i) + " does not exceed b_" + std::to_string(i));
  }

  // g: [u_{b_{i+1}}, u_{b_i}) → [b_{i+1}, p_{i+1}), [u_{b_0}, 1) → [α, p_0), 1 ↦ 1.
  for (std::size_t i = n; i-- > 0;) {
    t.g.pieces.push_back({t.seq_u[i + 1], t.seq_u[i], true, false, t.seq[i + 1], t.bounds[i + 1]});
  }
  t.g.pieces.push_back({t.seq_u[0], one, true, false, alpha, t.bounds[0]});
  t.g.pieces.push_back({one, one, true, true, one, one});

  detail::finish_trace(t, v, u, fragment);
  t.result = residuum(t.s, t.w_phi);
  const TruthValue bound(alpha.rational() + epsilon.rational());
  if (!(t.s >= t.bounds[0])) throw CanonicalError(CanonicalErrc::Postcondition, "S(v,w) = " + t.s.str() + " is below p_0");
  if (!(t.w_phi < t.bounds[0])) throw CanonicalError(CanonicalErrc::Postcondition, "w(φ) is not below p_0");
  if (!(t.result < bound)) throw CanonicalError(CanonicalErrc::Postcondition, "(S ⇒ w(φ)) is not below α+ε");
  return t;
}

namespace detail {

struct CSequence {
  std::vector<TruthValue> levels, level_u, seq, seq_u;
  std::vector<Formula> reps;
};

inline CSequence diamond_sequence(const CanonicalWorld& v, const PropValuation& u, const Fragment& fragment,
                                  const Formula& phi, const TruthValue& alpha) {
  for (const auto& xi : u_set(v, fragment, phi, alpha)) {
    if (eval_prop(u, xi).is_one()) throw CanonicalError(CanonicalErrc::Precondition, "u(" + render(xi) + ") = 1 for a member of U");
  }
  if (!eval_prop(u, phi).is_one()) throw CanonicalError(CanonicalErrc::Precondition, "u(φ) < 1");
  if (auto bad = check_diamond_facts(v, u, fragment, alpha)) throw CanonicalError(CanonicalErrc::Fact, bad->str());

  // C with u_c = max u(θ) over v(◇θ) = c ≤ α; first maximiser in F order.
  std::map<TruthValue, std::pair<TruthValue, Formula>> by_level;
  for (const auto& th : fragment) {
    const auto c = v(Formula::dia(th));
    if (c > alpha) continue;
    const auto ut = eval_prop(u, th);
    auto it = by_level.find(c);
    if (it == by_level.end()) by_level.emplace(c, std::make_pair(ut, th));
    else if (ut > it->second.first) it->second = {ut, th};
  }
  CSequence out;
  for (const auto& [c, e] : by_level) {
    out.levels.push_back(c);
    out.level_u.push_back(e.first);
  }
  if (!by_level.count(TruthValue::zero())) sequence_error("0 is not in C");
  TruthValue c = TruthValue::zero();
  for (;;) {
    const auto& entry = by_level.at(c);
    out.seq.push_back(c);
    out.seq_u.push_back(entry.first);
    out.reps.push_back(entry.second);
    std::optional<TruthValue> next;
    for (const auto& [d, e] : by_level) {
      if (d > c && e.first > entry.first) {
        next = d;
        break;
      }
    }
    if (!next) break;
    c = *next;
  }
  if (!out.seq_u.front().is_zero()) sequence_error("u at c_0 is " + out.seq_u.front().str() + ", expected 0");
  if (out.seq.back() != alpha) sequence_error("c_N = " + out.seq.back().str() + ", expected α");
  if (!out.seq_u.back().is_one()) sequence_error("u at c_N is " + out.seq_u.back().str() + ", expected 1");
  return out;
}

inline TruthValue require_dia_alpha(const CanonicalWorld& v, const PropValuation& u, const Fragment& fragment,
                                    const Formula& phi) {
  const auto dia_phi = Formula::dia(phi);
  require_complete(v, fragment, "v");
  if (!fragment.contains(dia_phi)) throw CanonicalError(CanonicalErrc::Precondition, render(dia_phi) + " is not in the fragment");
  check_values(u, fragment);
  const auto alpha = v(dia_phi);
  if (alpha.is_zero()) throw CanonicalError(CanonicalErrc::Precondition, "v(◇φ) must be above 0");
  return alpha;
}

}  // namespace detail

/// The diamond witness needs ε < α − c_{N−1}; this returns that bound.
inline TruthValue diamond_epsilon_bound(const CanonicalWorld& v, const PropValuation& u, const Fragment& fragment,
                                        const Formula& phi) {
  const auto alpha = detail::require_dia_alpha(v, u, fragment, phi);
  const auto cs = detail::diamond_sequence(v, u, fragment, phi, alpha);
  return TruthValue(alpha.rational() - cs.seq[cs.seq.size() - 2].rational());
}

/// Diamond witness: from u with u(φ) = 1, u(U) < 1 builds w = g∘u with
/// S^F vw ∧ w(φ) ≥ α−ε where α = v(◇φ).
inline RescaleTrace rescale_diamond_witness(const CanonicalWorld& v, const PropValuation& u, const Fragment& fragment,
                                            const Formula& phi, const TruthValue& epsilon) {
  const auto alpha = detail::require_dia_alpha(v, u, fragment, phi);
  if (epsilon.is_zero()) throw CanonicalError(CanonicalErrc::Epsilon, "need ε > 0");
  const auto cs = detail::diamond_sequence(v, u, fragment, phi, alpha);
  const std::size_t n = cs.seq.size() - 1;  // ≥ 1 since α > 0
  const auto low = alpha.rational() - epsilon.rational();
  if (!(low > cs.seq[n - 1].rational())) {
    throw CanonicalError(CanonicalErrc::Epsilon, "α−ε must exceed c_{N-1} = " + cs.seq[n - 1].str());
  }
  const TruthValue alpha_minus(low);
  const auto one = TruthValue::one();

  RescaleTrace t;
  t.kind = RescaleTrace::Kind::Diamond;
  t.phi = phi;
  t.alpha = alpha;
  t.epsilon = epsilon;
  t.levels = cs.levels;
  t.level_u = cs.level_u;
  t.seq = cs.seq;
  t.seq_u = cs.seq_u;
  t.reps = cs.reps;

  auto max_box_below = [&](const TruthValue& x) {
    TruthValue m = TruthValue::zero();
    for (const auto& th : fragment) {
      const auto b = v(Formula::box(th));
      if (b < x && b > m) m = b;
    }
    return m;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) t.bounds.push_back(join(t.seq[i], max_box_below(t.seq[i + 1])));
  t.bounds.push_back(join(alpha_minus, max_box_below(alpha)));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t.seq[i] <= t.bounds[i] && t.bounds[i] < t.seq[i + 1])) {
      detail::sequence_error("q_" + std::to_string(i) + " is outside [c_i, c_{i+1})");
    }
  }

  // g: 0 ↦ 0, (u_{c_i}, u_{c_{i+1}}] → (q_i, c_{i+1}], (u_{c_{N-1}}, 1) → (q_{N-1}, α), 1 ↦ 1.
  t.g.pieces.push_back({TruthValue::zero(), TruthValue::zero(), true, true, TruthValue::zero(), TruthValue::zero()});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.g.pieces.push_back({t.seq_u[i], t.seq_u[i + 1], false, true, t.bounds[i], t.seq[i + 1]});
  }
  t.g.pieces.push_back({t.seq_u[n - 1], one, false, false, t.bounds[n - 1], alpha});
  t.g.pieces.push_back({one, one, true, true, one, one});

  detail::finish_trace(t, v, u, fragment);
  t.result = meet(t.s, t.w_phi);
  if (!t.w_phi.is_one()) throw CanonicalError(CanonicalErrc::Postcondition, "w(φ) < 1");
  if (!(t.result >= alpha_minus)) throw CanonicalError(CanonicalErrc::Postcondition, "S(v,w) ∧ w(φ) is below α−ε");
  return t;
}

}  // namespace gkl

#endif  // GKL_CANONICAL_HPP
