// Gödel-Dummett propositional semantics over L(Var ∪ X): variables and
// modal formulas are atoms, valued in [0,1].

#ifndef GKL_PROPOSITIONAL_HPP
#define GKL_PROPOSITIONAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gkl/circuit.hpp"
#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/order_types.hpp"
#include "gkl/truth_value.hpp"

namespace gkl {

/// Finite assignment of truth values to atoms (variables or modal formulas).
using PropValuation = std::map<Formula, TruthValue>;

/// Homomorphic extension of v. Throws UnknownAtomError for an atom outside
/// the domain of v.
inline TruthValue eval_prop(const PropValuation& v, const Formula& phi) {
  switch (phi.kind()) {
    case Connective::Bot: return TruthValue::zero();
    case Connective::And: return meet(eval_prop(v, phi.lhs()), eval_prop(v, phi.rhs()));
    case Connective::Or: return join(eval_prop(v, phi.lhs()), eval_prop(v, phi.rhs()));
    case Connective::Imp: return residuum(eval_prop(v, phi.lhs()), eval_prop(v, phi.rhs()));
    default: {
      auto it = v.find(phi);
      if (it == v.end()) throw UnknownAtomError("no value for atom " + render(phi));
      return it->second;
    }
  }
}

struct GdSearchOptions {
  /// Extra atoms to value even if no formula mentions them.
  FormulaSet extra_atoms;
  std::uint64_t step_limit = UINT64_MAX;
};

/// Searches for v with v(θ) = 1 for every θ in `theory` and v(g) < 1 for
/// every g in `goals`. Absence means theory ⊢ g₁ ∨ … ∨ g_k in Gödel-Dummett
/// logic (atoms read as in L(Var ∪ X)).
///
/// The search is complete: valuations are enumerated up to order type, and
/// the first one in enumeration order (values tried in ascending order,
/// atoms in Formula order) is returned.
inline std::optional<PropValuation> gd_counter_valuation(const std::vector<Formula>& theory,
                                                         const std::vector<Formula>& goals,
                                                         const GdSearchOptions& opts = {}) {
  FormulaSet atom_set = opts.extra_atoms;
  for (const auto& f : theory) collect_prop_atoms(f, atom_set);
  for (const auto& f : goals) collect_prop_atoms(f, atom_set);
  const std::vector<Formula> atoms(atom_set.begin(), atom_set.end());

  std::vector<Formula> roots = theory;
  roots.insert(roots.end(), goals.begin(), goals.end());
  Circuit circuit(roots, Circuit::Mode::Propositional);
  const auto& nodes = circuit.nodes();

  // Slot s of the search holds atoms[s]; circuit leaves map onto slots.
  std::vector<int> leaf_slot(circuit.leaves().size());
  for (std::size_t i = 0; i < circuit.leaves().size(); ++i) {
    leaf_slot[i] = static_cast<int>(
        std::lower_bound(atoms.begin(), atoms.end(), circuit.leaves()[i]) - atoms.begin());
  }

  // A node becomes evaluable once the last slot it depends on is assigned.
  std::vector<int> ready(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.leaf >= 0) ready[i] = leaf_slot[n.leaf];
    if (n.left >= 0) ready[i] = std::max(ready[i], ready[n.left]);
    if (n.right >= 0) ready[i] = std::max(ready[i], ready[n.right]);
  }
  const int slots = static_cast<int>(atoms.size());
  std::vector<std::vector<int>> nodes_at(static_cast<std::size_t>(slots) + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes_at[ready[i] + 1].push_back(static_cast<int>(i));

  struct Constraint {
    int node;
    bool must_be_one;
  };
  std::vector<std::vector<Constraint>> checks_at(static_cast<std::size_t>(slots) + 1);
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const int node = circuit.roots()[r];
    checks_at[ready[node] + 1].push_back({node, r < theory.size()});
  }

  std::vector<Rank> values(nodes.size());
  const std::vector<std::int64_t>* current = nullptr;
  auto evaluate_level = [&](int level) {
    for (int id : nodes_at[level]) {
      values[id] = eval_prop_node<Rank>(nodes[id], values, [&](int leaf) {
        return Rank{(*current)[leaf_slot[leaf]]};
      });
    }
    for (const auto& c : checks_at[level]) {
      const bool one = values[c.node] == Rank::one();
      if (one != c.must_be_one) return false;
    }
    return true;
  };

  const std::vector<std::int64_t> none;
  current = &none;
  if (!evaluate_level(0)) return std::nullopt;

  LevelDfs dfs(std::vector<SlotSpec>(atoms.size()));
  std::optional<PropValuation> found;
  auto assign = [&](std::size_t s, const std::vector<std::int64_t>& keys) {
    current = &keys;
    return evaluate_level(static_cast<int>(s) + 1);
  };
  auto leaf = [&](const std::vector<std::int64_t>& keys) {
    const auto tv = dfs.to_values(keys);
    PropValuation v;
    for (std::size_t i = 0; i < atoms.size(); ++i) v.emplace(atoms[i], tv[i]);
    found = std::move(v);
    return true;
  };
  const auto result = dfs.run(assign, leaf, opts.step_limit);
  if (result.status == DfsStatus::BudgetExceeded) {
    throw Error("Gödel-Dummett search exceeded its step budget");
  }
  return found;
}

/// theory ⊢ φ in Gödel-Dummett logic.
inline bool gd_entails(const std::vector<Formula>& theory, const Formula& phi) {
  return !gd_counter_valuation(theory, {phi}).has_value();
}

inline bool gd_tautology(const Formula& phi) { return gd_entails({}, phi); }

}  // namespace gkl

#endif  // GKL_PROPOSITIONAL_HPP
