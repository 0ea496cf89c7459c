// Test-only helpers: random generators and independent reference
// evaluators that share no code with the library's circuit evaluator.

#ifndef GKL_TESTS_SUPPORT_HPP
#define GKL_TESTS_SUPPORT_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gkl/formula.hpp"
#include "gkl/kripke.hpp"
#include "gkl/proof.hpp"
#include "gkl/schemes.hpp"
#include "gkl/truth_value.hpp"

namespace gkl::fuzz {

using Rng = std::mt19937_64;

inline TruthValue chain_value(int i, int n) {
  return TruthValue(TruthValue::Integer(i), TruthValue::Integer(n - 1));
}

inline TruthValue random_chain_value(Rng& rng, int n) {
  return chain_value(std::uniform_int_distribution<int>(0, n - 1)(rng), n);
}

/// Random formula over `vars` with nesting depth at most `depth`.
inline Formula random_formula(Rng& rng, const std::vector<std::string>& vars, int depth,
                              bool modal = true) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : (modal ? 6 : 4));
  switch (pick(rng)) {
    case 0:
      if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) return Formula::bot();
      [[fallthrough]];
    case 1: return Formula::var(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
    case 2: return Formula::conj(random_formula(rng, vars, depth - 1, modal), random_formula(rng, vars, depth - 1, modal));
    case 3: return Formula::disj(random_formula(rng, vars, depth - 1, modal), random_formula(rng, vars, depth - 1, modal));
    case 4: return Formula::imp(random_formula(rng, vars, depth - 1, modal), random_formula(rng, vars, depth - 1, modal));
    case 5: return Formula::box(random_formula(rng, vars, depth - 1, modal));
    default: return Formula::dia(random_formula(rng, vars, depth - 1, modal));
  }
}

/// Random model with values in the n-element evenly spaced chain.
inline GKModel random_model(Rng& rng, int worlds, const std::vector<std::string>& vars, int chain) {
  std::vector<std::string> names;
  for (int i = 0; i < worlds; ++i) names.push_back("w" + std::to_string(i));
  GKModel m(names, vars);
  for (int x = 0; x < worlds; ++x) {
    for (int y = 0; y < worlds; ++y) m.set_s(x, y, random_chain_value(rng, chain));
    for (std::size_t v = 0; v < vars.size(); ++v) m.set_e(x, v, random_chain_value(rng, chain));
  }
  return m;
}

/// Reference modal evaluator: direct recursion over plain rationals.
class ReferenceEvaluator {
 public:
  using Q = TruthValue::Rational;

  explicit ReferenceEvaluator(const GKModel& m) : m_(m) {}

  Q operator()(std::size_t x, const Formula& f) const {
    switch (f.kind()) {
      case Connective::Bot: return Q(0);
      case Connective::Var: return m_.e(x, *m_.var_index(f.name())).rational();
      case Connective::And: return std::min((*this)(x, f.lhs()), (*this)(x, f.rhs()));
      case Connective::Or: return std::max((*this)(x, f.lhs()), (*this)(x, f.rhs()));
      case Connective::Imp: {
        Q a = (*this)(x, f.lhs());
        Q b = (*this)(x, f.rhs());
        return a <= b ? Q(1) : b;
      }
      case Connective::Box: {
        Q acc(1);
        for (std::size_t y = 0; y < m_.world_count(); ++y) {
          Q s = m_.s(x, y).rational();
          Q b = (*this)(y, f.sub());
          acc = std::min(acc, s <= b ? Q(1) : b);
        }
        return acc;
      }
      case Connective::Dia: {
        Q acc(0);
        for (std::size_t y = 0; y < m_.world_count(); ++y) {
          acc = std::max(acc, std::min(m_.s(x, y).rational(), (*this)(y, f.sub())));
        }
        return acc;
      }
    }
    return Q(0);
  }

 private:
  const GKModel& m_;
};

/// Reference Gödel-Dummett check: raw enumeration of atom values over the
/// (n+2)-element chain, n = number of atoms.
inline bool reference_gd_countervaluation_exists(const std::vector<Formula>& theory,
                                                 const std::vector<Formula>& goals) {
  FormulaSet atoms;
  for (const auto& f : theory) collect_prop_atoms(f, atoms);
  for (const auto& f : goals) collect_prop_atoms(f, atoms);
  const std::vector<Formula> list(atoms.begin(), atoms.end());
  const int chain = static_cast<int>(list.size()) + 2;
  std::vector<int> idx(list.size(), 0);
  std::function<int(const Formula&)> ev = [&](const Formula& f) -> int {
    switch (f.kind()) {
      case Connective::Bot: return 0;
      case Connective::And: return std::min(ev(f.lhs()), ev(f.rhs()));
      case Connective::Or: return std::max(ev(f.lhs()), ev(f.rhs()));
      case Connective::Imp: {
        int a = ev(f.lhs()), b = ev(f.rhs());
        return a <= b ? chain - 1 : b;
      }
      default: return idx[std::lower_bound(list.begin(), list.end(), f) - list.begin()];
    }
  };
  while (true) {
    bool ok = true;
    for (const auto& t : theory) ok = ok && ev(t) == chain - 1;
    for (const auto& g : goals) ok = ok && ev(g) < chain - 1;
    if (ok) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == chain) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

/// Single-justification mutations of step k: other schemes, shifted or
/// swapped indices, and changes of rule kind. Never the original.
inline std::vector<Justification> mutations(const Proof& p, std::size_t k) {
  const Justification& j = p.steps[k].by;
  std::vector<Justification> out;
  auto add = [&](Justification m) {
    if (m != j && std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
  };
  auto near = [&](std::size_t i) {
    std::vector<std::size_t> r{i + 1};
    if (i > 0) r.push_back(i - 1);
    return r;
  };
  switch (j.kind) {
    case RuleKind::Axiom:
      for (const auto& s : list_schemes(p.system)) add(Justification::axiom(s.name, j.subst));
      if (j.subst) {
        for (const auto& [mv, f] : *j.subst) {
          auto sigma = *j.subst;
          sigma[mv] = f.is(Connective::Bot) ? Formula::top() : Formula::bot();
          add(Justification::axiom(j.scheme, sigma));
        }
      }
      break;
    case RuleKind::MP:
      add(Justification::mp(j.second, j.first));
      add(Justification::mp(j.first, j.first));
      for (auto i : near(j.first)) add(Justification::mp(i, j.second));
      for (auto i : near(j.second)) add(Justification::mp(j.first, i));
      for (auto i : {j.first, j.second}) {
        add(Justification::nr_box(i));
        add(Justification::rn_dia(i));
      }
      break;
    case RuleKind::NRBox:
    case RuleKind::RNDia:
      for (auto i : near(j.first)) add(Justification{j.kind, i, 0, {}, {}});
      add(Justification{j.kind == RuleKind::NRBox ? RuleKind::RNDia : RuleKind::NRBox, j.first, 0, {}, {}});
      add(Justification::mp(j.first, j.first));
      break;
    case RuleKind::Hypothesis:
      add(Justification::hyp(j.first + 1));
      break;
  }
  add(Justification::hyp(p.hypotheses.size()));
  if (k > 0) {
    add(Justification::nr_box(k - 1));
    add(Justification::rn_dia(k - 1));
  }
  if (k > 1) add(Justification::mp(k - 2, k - 1));
  return out;
}

}  // namespace gkl::fuzz

#endif  // GKL_TESTS_SUPPORT_HPP
