// Formulas compiled into a shared DAG in topological order, so a batch of
// formulas can be evaluated bottom-up without re-walking common subtrees.

#ifndef GKL_CIRCUIT_HPP
#define GKL_CIRCUIT_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gkl/formula.hpp"
#include "gkl/truth_value.hpp"

namespace gkl {

class Circuit {
 public:
  /// In Propositional mode variables and modal subformulas are leaves; in
  /// Modal mode only variables are, and □/◇ are operator nodes.
  enum class Mode { Propositional, Modal };

  struct Node {
    Connective kind;
    int left = -1;
    int right = -1;
    int leaf = -1;  // index into leaves() for leaf nodes
  };

  Circuit(const std::vector<Formula>& roots, Mode mode) : mode_(mode) {
    for (const auto& r : roots) roots_.push_back(add(r));
  }

  /// Adds one more root; returns its node index.
  int add_root(const Formula& f) {
    roots_.push_back(add(f));
    return roots_.back();
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& roots() const { return roots_; }
  const std::vector<Formula>& leaves() const { return leaves_; }
  Mode mode() const { return mode_; }

  int node_of(const Formula& f) const {
    auto it = index_.find(f);
    return it == index_.end() ? -1 : it->second;
  }

  int leaf_index(const Formula& f) const {
    auto it = leaf_index_.find(f);
    return it == leaf_index_.end() ? -1 : it->second;
  }

 private:
  bool is_leaf(const Formula& f) const {
    return f.is(Connective::Var) || (mode_ == Mode::Propositional && f.is_modal());
  }

  int add(const Formula& f) {
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    Node n{f.kind()};
    if (is_leaf(f)) {
      auto [it, inserted] = leaf_index_.emplace(f, static_cast<int>(leaves_.size()));
      if (inserted) leaves_.push_back(f);
      n.leaf = it->second;
    } else if (f.is_modal()) {
      n.left = add(f.sub());
    } else if (f.is_binary()) {
      n.left = add(f.lhs());
      n.right = add(f.rhs());
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(f, id);
    return id;
  }

  Mode mode_;
  std::vector<Node> nodes_;
  std::vector<int> roots_;
  std::vector<Formula> leaves_;
  std::unordered_map<Formula, int, FormulaHash> index_;
  std::unordered_map<Formula, int, FormulaHash> leaf_index_;
};

/// Evaluates one propositional node from already-computed children.
template <GodelChain V, class Leaf>
V eval_prop_node(const Circuit::Node& n, const std::vector<V>& values, Leaf&& leaf) {
  switch (n.kind) {
    case Connective::Bot: return V::zero();
    case Connective::And: return meet(values[n.left], values[n.right]);
    case Connective::Or: return join(values[n.left], values[n.right]);
    case Connective::Imp: return residuum(values[n.left], values[n.right]);
    default: return leaf(n.leaf);
  }
}

}  // namespace gkl

#endif  // GKL_CIRCUIT_HPP
