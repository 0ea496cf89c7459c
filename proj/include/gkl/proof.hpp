// Hilbert-style proofs for the base system and its extensions. The
// necessitation rules (□ from φ; ◇φ→◇ψ from φ→ψ) only apply to lines that
// do not depend on a hypothesis.

#ifndef GKL_PROOF_HPP
#define GKL_PROOF_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/schemes.hpp"

namespace gkl {

enum class RuleKind { Hypothesis, Axiom, MP, NRBox, RNDia };

inline const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::Hypothesis: return "hyp";
    case RuleKind::Axiom: return "axiom";
    case RuleKind::MP: return "mp";
    case RuleKind::NRBox: return "nr_box";
    case RuleKind::RNDia: return "rn_dia";
  }
  return "?";
}

struct Justification {
  RuleKind kind = RuleKind::Axiom;
  std::size_t first = 0;   // hypothesis index, MP antecedent line, or rule premise
  std::size_t second = 0;  // MP implication line
  std::string scheme;
  std::optional<Substitution> subst;  // absent: found by matching

  static Justification hyp(std::size_t i) { return {RuleKind::Hypothesis, i, 0, {}, {}}; }
  static Justification axiom(std::string name, std::optional<Substitution> s = std::nullopt) {
    return {RuleKind::Axiom, 0, 0, std::move(name), std::move(s)};
  }
  /// Line i proves A, line j proves A → B.
  static Justification mp(std::size_t i, std::size_t j) { return {RuleKind::MP, i, j, {}, {}}; }
  static Justification nr_box(std::size_t i) { return {RuleKind::NRBox, i, 0, {}, {}}; }
  static Justification rn_dia(std::size_t i) { return {RuleKind::RNDia, i, 0, {}, {}}; }

  friend bool operator==(const Justification&, const Justification&) = default;
};

struct Step {
  std::optional<Formula> formula;  // absent: computed from the justification
  Justification by;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Proof {
  SystemId system = SystemId::G_box_dia;
  std::vector<Formula> hypotheses;
  std::vector<Step> steps;

  friend bool operator==(const Proof&, const Proof&) = default;
};

enum class RejectReason {
  Empty,
  BadReference,     // index out of range or not earlier
  UnknownScheme,    // not in the system's registry
  SchemeMismatch,   // formula is not an instance
  ShapeMismatch,    // MP or rule premise has the wrong form
  FormulaMismatch,  // stated formula differs from what the rule yields
  MissingFormula,   // axiom without formula or substitution
  RuleRestriction,  // necessitation applied to a hypothesis-dependent line
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::Empty: return "empty proof";
    case RejectReason::BadReference: return "bad reference";
    case RejectReason::UnknownScheme: return "unknown scheme";
    case RejectReason::SchemeMismatch: return "not an instance of the scheme";
    case RejectReason::ShapeMismatch: return "premise has the wrong shape";
    case RejectReason::FormulaMismatch: return "formula does not follow";
    case RejectReason::MissingFormula: return "missing formula";
    case RejectReason::RuleRestriction: return "rule restriction: premise depends on a hypothesis";
  }
  return "?";
}

struct Verdict {
  bool accepted = false;
  std::optional<std::size_t> step;  // first rejected line
  std::optional<RejectReason> reason;
  std::string message;
  std::vector<Formula> formulas;  // lines checked so far
  std::vector<bool> hypothesis_free;

  bool restriction_violation() const { return reason == RejectReason::RuleRestriction; }
  const Formula& conclusion() const { return formulas.back(); }
};

/// Checks p in its own system, line by line.
inline Verdict check_proof(const Proof& p) {
  Verdict v;
  auto reject = [&](std::size_t k, RejectReason r, std::string msg) {
    v.accepted = false;
    v.step = k;
    v.reason = r;
    v.message = "step " + std::to_string(k) + ": " + to_string(r) + (msg.empty() ? "" : ": " + msg);
    return v;
  };
  if (p.steps.empty()) return reject(0, RejectReason::Empty, "");
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const auto& st = p.steps[k];
    const auto& by = st.by;
    auto earlier = [&](std::size_t i) { return i < k; };
    std::optional<Formula> got;
    bool free = true;
    switch (by.kind) {
      case RuleKind::Hypothesis:
        if (by.first >= p.hypotheses.size()) return reject(k, RejectReason::BadReference, "no hypothesis " + std::to_string(by.first));
        got = p.hypotheses[by.first];
        free = false;
        break;
      case RuleKind::Axiom: {
        auto s = find_scheme(p.system, by.scheme);
        if (!s) return reject(k, RejectReason::UnknownScheme, "'" + by.scheme + "' in " + std::string(to_string(p.system)));
        if (by.subst) {
          try {
            got = instantiate(*s, *by.subst);
          } catch (const SchemaError& e) {
            return reject(k, RejectReason::SchemeMismatch, e.what());
          }
          if (st.formula && *st.formula != *got) {
            return reject(k, RejectReason::SchemeMismatch, render(*st.formula) + " is not " + s->name + " under the substitution");
          }
        } else {
          if (!st.formula) return reject(k, RejectReason::MissingFormula, "axiom needs a formula or a substitution");
          if (!match_scheme(*st.formula, *s)) return reject(k, RejectReason::SchemeMismatch, render(*st.formula) + " is not an instance of " + s->name);
          got = st.formula;
        }
        break;
      }
      case RuleKind::MP: {
        if (!earlier(by.first) || !earlier(by.second)) return reject(k, RejectReason::BadReference, "mp premises must be earlier lines");
        const auto& a = v.formulas[by.first];
        const auto& imp = v.formulas[by.second];
        if (!imp.is(Connective::Imp) || imp.lhs() != a) {
          return reject(k, RejectReason::ShapeMismatch, "line " + std::to_string(by.second) + " is not " + render(a) + " -> ...");
        }
        got = imp.rhs();
        free = v.hypothesis_free[by.first] && v.hypothesis_free[by.second];
        break;
      }
      case RuleKind::NRBox:
      case RuleKind::RNDia: {
        if (!earlier(by.first)) return reject(k, RejectReason::BadReference, "rule premise must be an earlier line");
        const auto& a = v.formulas[by.first];
        if (by.kind == RuleKind::NRBox) {
          got = Formula::box(a);
        } else {
          if (!a.is(Connective::Imp)) return reject(k, RejectReason::ShapeMismatch, "rn_dia premise must be an implication");
          got = Formula::imp(Formula::dia(a.lhs()), Formula::dia(a.rhs()));
        }
        if (!v.hypothesis_free[by.first]) {
          return reject(k, RejectReason::RuleRestriction, std::string(to_string(by.kind)) + " applied to line " + std::to_string(by.first));
        }
        break;
      }
    }
    if (st.formula && *st.formula != *got) {
      return reject(k, RejectReason::FormulaMismatch, "stated " + render(*st.formula) + ", derived " + render(*got));
    }
    v.formulas.push_back(*got);
    v.hypothesis_free.push_back(free);
  }
  v.accepted = true;
  return v;
}

inline Verdict check_proof(Proof p, SystemId sys) {
  p.system = sys;
  return check_proof(p);
}

/// hypothesis_free recomputed from scratch: a line is free iff no hypothesis
/// line is reachable through its premises.
inline std::vector<bool> recompute_hypothesis_free(const Proof& p) {
  const std::size_t n = p.steps.size();
  std::vector<int> memo(n, -1);
  auto visit = [&](auto&& self, std::size_t k) -> bool {
    if (memo[k] >= 0) return memo[k];
    const auto& by = p.steps[k].by;
    bool uses = false;
    switch (by.kind) {
      case RuleKind::Hypothesis: uses = true; break;
      case RuleKind::Axiom: break;
      case RuleKind::MP: uses = !self(self, by.first) || !self(self, by.second); break;
      case RuleKind::NRBox:
      case RuleKind::RNDia: uses = !self(self, by.first); break;
    }
    memo[k] = uses ? 0 : 1;
    return !uses;
  };
  std::vector<bool> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = visit(visit, k);
  return out;
}

/// From an accepted proof of T, ψ ⊢ φ (ψ the last hypothesis, φ the last
/// line) builds a proof of T ⊢ ψ → φ. Lines that do not use ψ are copied;
/// the others are rewritten through A1 and A2.
inline Proof deduction_wrap(const Proof& p) {
  const auto verdict = check_proof(p);
  if (!verdict.accepted) throw Error("deduction_wrap needs an accepted proof (" + verdict.message + ")");
  if (p.hypotheses.empty()) throw Error("deduction_wrap needs a hypothesis to discharge");
  const std::size_t last_hyp = p.hypotheses.size() - 1;
  const Formula psi = p.hypotheses[last_hyp];
  const auto& fs = verdict.formulas;

  Proof out;
  out.system = p.system;
  out.hypotheses.assign(p.hypotheses.begin(), p.hypotheses.end() - 1);
  auto push = [&](Formula f, Justification j) {
    out.steps.push_back({std::move(f), std::move(j)});
    return out.steps.size() - 1;
  };
  auto a1 = [&](const Formula& a, const Formula& b) {
    return push(Formula::imp(a, Formula::imp(b, a)), Justification::axiom("A1", Substitution{{"?a", a}, {"?b", b}}));
  };
  auto a2 = [&](const Formula& a, const Formula& b, const Formula& c) {
    const auto f = Formula::imp(Formula::imp(a, Formula::imp(b, c)),
                                Formula::imp(Formula::imp(a, b), Formula::imp(a, c)));
    return push(f, Justification::axiom("A2", Substitution{{"?a", a}, {"?b", b}, {"?c", c}}));
  };
  auto mp = [&](std::size_t i, std::size_t j) {
    return push(out.steps[j].formula->rhs(), Justification::mp(i, j));
  };

  std::vector<bool> uses_psi(p.steps.size(), false);
  std::vector<std::optional<std::size_t>> plain(p.steps.size()), wrapped(p.steps.size());
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const auto& by = p.steps[k].by;
    const Formula& chi = fs[k];
    switch (by.kind) {
      case RuleKind::Hypothesis: uses_psi[k] = by.first == last_hyp; break;
      case RuleKind::MP: uses_psi[k] = uses_psi[by.first] || uses_psi[by.second]; break;
      default: break;
    }
    if (!uses_psi[k]) {
      Justification j = by;
      switch (by.kind) {
        case RuleKind::MP: j = Justification::mp(*plain[by.first], *plain[by.second]); break;
        case RuleKind::NRBox:
        case RuleKind::RNDia: j.first = *plain[by.first]; break;
        default: break;
      }
      plain[k] = push(chi, j);
      // ψ → χ from χ and A1.
      wrapped[k] = mp(*plain[k], a1(chi, psi));
      continue;
    }
    if (by.kind == RuleKind::Hypothesis) {
      // ψ → ψ.
      const Formula pp = Formula::imp(psi, psi);
      const auto s1 = a1(psi, pp);
      const auto s2 = a2(psi, pp, psi);
      const auto s3 = mp(s1, s2);
      const auto s4 = a1(psi, psi);
      wrapped[k] = mp(s4, s3);
      continue;
    }
    // MP with χ_i and χ_i → χ: A2 gives (ψ→χ_i→χ) → (ψ→χ_i) → ψ→χ.
    const auto& ci = fs[by.first];
    const auto s = a2(psi, ci, chi);
    const auto t = mp(*wrapped[by.second], s);
    wrapped[k] = mp(*wrapped[by.first], t);
  }
  return out;
}

/// Drops lines the conclusion does not need and merges repeated formulas
/// into their earliest occurrence that is at least as hypothesis-free.
inline Proof compact_proof(const Proof& p) {
  const auto verdict = check_proof(p);
  if (!verdict.accepted) throw Error("compact_proof needs an accepted proof (" + verdict.message + ")");
  const std::size_t n = p.steps.size();
  std::vector<std::size_t> rep(n);
  std::map<Formula, std::vector<std::size_t>> seen;
  for (std::size_t k = 0; k < n; ++k) {
    rep[k] = k;
    auto& prior = seen[verdict.formulas[k]];
    for (auto i : prior) {
      if (verdict.hypothesis_free[i] || !verdict.hypothesis_free[k]) {
        rep[k] = i;
        break;
      }
    }
    if (rep[k] == k) prior.push_back(k);
  }
  auto remap = [&](Justification j) {
    switch (j.kind) {
      case RuleKind::MP: j.second = rep[j.second]; [[fallthrough]];
      case RuleKind::NRBox:
      case RuleKind::RNDia: j.first = rep[j.first]; break;
      default: break;
    }
    return j;
  };
  std::vector<bool> needed(n, false);
  needed[rep[n - 1]] = true;
  for (std::size_t k = n; k-- > 0;) {
    if (!needed[k]) continue;
    const auto j = remap(p.steps[k].by);
    if (j.kind == RuleKind::MP) needed[j.second] = true;
    if (j.kind == RuleKind::MP || j.kind == RuleKind::NRBox || j.kind == RuleKind::RNDia) needed[j.first] = true;
  }
  Proof out;
  out.system = p.system;
  out.hypotheses = p.hypotheses;
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!needed[k]) continue;
    auto j = remap(p.steps[k].by);
    switch (j.kind) {
      case RuleKind::MP: j.second = pos[j.second]; [[fallthrough]];
      case RuleKind::NRBox:
      case RuleKind::RNDia: j.first = pos[j.first]; break;
      default: break;
    }
    pos[k] = out.steps.size();
    out.steps.push_back({verdict.formulas[k], j});
  }
  return out;
}

/// Formula-addressed proof construction: lines are referred to by what they
/// prove, and discharge() applies deduction_wrap to the newest hypothesis.
class ProofBuilder {
 public:
  explicit ProofBuilder(SystemId sys = SystemId::G_box_dia) { p_.system = sys; }

  const Proof& proof() const { return p_; }

  Formula hyp(const Formula& f) {
    p_.hypotheses.push_back(f);
    return add(f, Justification::hyp(p_.hypotheses.size() - 1), false);
  }

  Formula axiom(const std::string& scheme, const Substitution& sigma) {
    auto s = find_scheme(p_.system, scheme);
    if (!s) throw Error("unknown scheme " + scheme);
    return add(instantiate(*s, sigma), Justification::axiom(scheme, sigma), true);
  }

  /// From a and a → b, yields b.
  Formula mp(const Formula& a, const Formula& a_imp_b) {
    if (!a_imp_b.is(Connective::Imp) || a_imp_b.lhs() != a) throw Error("mp shape: " + render(a_imp_b));
    const auto i = line(a), j = line(a_imp_b);
    return add(a_imp_b.rhs(), Justification::mp(i, j), free_[i] && free_[j]);
  }

  Formula nr_box(const Formula& a) { return add(Formula::box(a), Justification::nr_box(line(a)), true); }

  Formula rn_dia(const Formula& imp) {
    return add(Formula::imp(Formula::dia(imp.lhs()), Formula::dia(imp.rhs())), Justification::rn_dia(line(imp)), true);
  }

  /// Makes f the last line (re-deriving it if needed), then discharges the
  /// newest hypothesis; returns ψ → f.
  Formula discharge(const Formula& f) {
    if (!p_.steps.back().formula || *p_.steps.back().formula != f) {
      const auto t = axiom("A1", {{"?a", f}, {"?b", f}});
      mp(f, mp(f, t));
    }
    const Formula psi = p_.hypotheses.back();
    p_ = deduction_wrap(p_);
    reindex();
    return Formula::imp(psi, f);
  }

  bool has(const Formula& f) const { return index_.count(f) > 0; }

 private:
  Formula add(const Formula& f, Justification j, bool free) {
    p_.steps.push_back({f, std::move(j)});
    free_.push_back(free);
    note(f, p_.steps.size() - 1);
    return f;
  }

  void note(const Formula& f, std::size_t k) {
    auto it = index_.find(f);
    if (it == index_.end() || (!free_[it->second] && free_[k])) index_[f] = k;
  }

  std::size_t line(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) throw Error("no line proves " + render(f));
    return it->second;
  }

  void reindex() {
    index_.clear();
    free_ = recompute_hypothesis_free(p_);
    for (std::size_t k = 0; k < p_.steps.size(); ++k) note(*p_.steps[k].formula, k);
  }

  Proof p_;
  std::vector<bool> free_;
  std::map<Formula, std::size_t> index_;
};

}  // namespace gkl

#endif  // GKL_PROOF_HPP
