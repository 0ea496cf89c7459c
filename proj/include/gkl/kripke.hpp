// Finite Gödel-Kripke models: W, a [0,1]-valued accessibility S and a
// [0,1]-valued atomic assignment e.

#ifndef GKL_KRIPKE_HPP
#define GKL_KRIPKE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkl/circuit.hpp"
#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/truth_value.hpp"

namespace gkl {

template <GodelChain V>
class BasicModel {
 public:
  BasicModel(std::vector<std::string> worlds, std::vector<std::string> vars)
      : worlds_(std::move(worlds)), vars_(std::move(vars)) {
    if (worlds_.empty()) throw SchemaError("worlds", "a model needs at least one world");
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
      if (!world_index_.emplace(worlds_[i], i).second) {
        throw SchemaError("worlds", "duplicate world '" + worlds_[i] + "'");
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!var_index_.emplace(vars_[i], i).second) {
        throw SchemaError("vars", "duplicate variable '" + vars_[i] + "'");
      }
    }
    s_.assign(worlds_.size() * worlds_.size(), V::zero());
    e_.assign(worlds_.size() * vars_.size(), V::zero());
  }

  std::size_t world_count() const { return worlds_.size(); }
  std::size_t var_count() const { return vars_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<std::string>& vars() const { return vars_; }

  const V& s(std::size_t x, std::size_t y) const { return s_[x * worlds_.size() + y]; }
  void set_s(std::size_t x, std::size_t y, V v) { s_[x * worlds_.size() + y] = std::move(v); }

  const V& e(std::size_t x, std::size_t var) const { return e_[x * vars_.size() + var]; }
  void set_e(std::size_t x, std::size_t var, V v) { e_[x * vars_.size() + var] = std::move(v); }

  std::size_t world_index(const std::string& name) const {
    auto it = world_index_.find(name);
    if (it == world_index_.end()) throw SchemaError("world", "unknown world '" + name + "'");
    return it->second;
  }

  std::optional<std::size_t> var_index(const std::string& name) const {
    auto it = var_index_.find(name);
    if (it == var_index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const BasicModel& a, const BasicModel& b) {
    return a.worlds_ == b.worlds_ && a.vars_ == b.vars_ && a.s_ == b.s_ && a.e_ == b.e_;
  }

 private:
  std::vector<std::string> worlds_;
  std::vector<std::string> vars_;
  std::map<std::string, std::size_t> world_index_;
  std::map<std::string, std::size_t> var_index_;
  std::vector<V> s_;
  std::vector<V> e_;
};

using GKModel = BasicModel<TruthValue>;

/// Model variable index of each circuit leaf.
template <GodelChain V>
std::vector<std::size_t> bind_leaves(const BasicModel<V>& m, const Circuit& c) {
  std::vector<std::size_t> leaf_var(c.leaves().size());
  for (std::size_t i = 0; i < c.leaves().size(); ++i) {
    auto idx = m.var_index(c.leaves()[i].name());
    if (!idx) throw UnknownAtomError("variable '" + c.leaves()[i].name() + "' not declared in model");
    leaf_var[i] = *idx;
  }
  return leaf_var;
}

/// Fills table[node][world] with the value of every circuit node; the
/// table is reused across calls.
template <GodelChain V>
void evaluate_into(const BasicModel<V>& m, const Circuit& c, const std::vector<std::size_t>& leaf_var,
                   std::vector<std::vector<V>>& table) {
  const std::size_t n = m.world_count();
  table.resize(c.nodes().size());
  for (auto& row : table) row.resize(n);
  for (std::size_t id = 0; id < c.nodes().size(); ++id) {
    const auto& node = c.nodes()[id];
    auto& out = table[id];
    switch (node.kind) {
      case Connective::Box: {
        const auto& sub = table[node.left];
        for (std::size_t x = 0; x < n; ++x) {
          V acc = V::one();
          for (std::size_t y = 0; y < n; ++y) acc = meet(acc, residuum(m.s(x, y), sub[y]));
          out[x] = acc;
        }
        break;
      }
      case Connective::Dia: {
        const auto& sub = table[node.left];
        for (std::size_t x = 0; x < n; ++x) {
          V acc = V::zero();
          for (std::size_t y = 0; y < n; ++y) acc = join(acc, meet(m.s(x, y), sub[y]));
          out[x] = acc;
        }
        break;
      }
      case Connective::Var:
        for (std::size_t x = 0; x < n; ++x) out[x] = m.e(x, leaf_var[node.leaf]);
        break;
      case Connective::Bot:
        for (std::size_t x = 0; x < n; ++x) out[x] = V::zero();
        break;
      case Connective::And:
        for (std::size_t x = 0; x < n; ++x) out[x] = meet(table[node.left][x], table[node.right][x]);
        break;
      case Connective::Or:
        for (std::size_t x = 0; x < n; ++x) out[x] = join(table[node.left][x], table[node.right][x]);
        break;
      case Connective::Imp:
        for (std::size_t x = 0; x < n; ++x) out[x] = residuum(table[node.left][x], table[node.right][x]);
        break;
    }
  }
}

/// Values of every circuit node at every world: table[node][world].
template <GodelChain V>
std::vector<std::vector<V>> evaluate(const BasicModel<V>& m, const Circuit& c) {
  std::vector<std::vector<V>> table;
  evaluate_into(m, c, bind_leaves(m, c), table);
  return table;
}

/// e(x, φ) at every world.
template <GodelChain V>
std::vector<V> eval_all(const BasicModel<V>& m, const Formula& phi) {
  Circuit c({phi}, Circuit::Mode::Modal);
  return evaluate(m, c)[c.roots()[0]];
}

template <GodelChain V>
V eval(const BasicModel<V>& m, std::size_t x, const Formula& phi) {
  if (x >= m.world_count()) throw SchemaError("world", "world index out of range");
  return eval_all(m, phi)[x];
}

inline TruthValue eval(const GKModel& m, const std::string& world, const Formula& phi) {
  return eval(m, m.world_index(world), phi);
}

template <GodelChain V>
struct ValidityReport {
  bool valid = true;
  std::optional<std::size_t> witness;  // first world with value < 1
  V witness_value = V::one();
};

template <GodelChain V>
ValidityReport<V> valid_in_model(const BasicModel<V>& m, const Formula& phi) {
  const auto values = eval_all(m, phi);
  for (std::size_t x = 0; x < values.size(); ++x) {
    if (values[x] < V::one()) return {false, x, values[x]};
  }
  return {};
}

struct FramePropertyReport {
  std::optional<std::size_t> reflexive_violation;                  // x with Sxx < 1
  std::optional<std::array<std::size_t, 3>> transitive_violation;  // min(Sxy,Syz) > Sxz
  std::optional<std::array<std::size_t, 2>> symmetric_violation;   // Sxy != Syx

  bool reflexive() const { return !reflexive_violation; }
  bool transitive() const { return !transitive_violation; }
  bool symmetric() const { return !symmetric_violation; }
};

/// Checks the [0,1]-valued frame conditions; witnesses are the first
/// violations in lexicographic world order.
template <GodelChain V>
FramePropertyReport frame_properties(const BasicModel<V>& m) {
  FramePropertyReport r;
  const std::size_t n = m.world_count();
  for (std::size_t x = 0; x < n && !r.reflexive_violation; ++x) {
    if (m.s(x, x) != V::one()) r.reflexive_violation = x;
  }
  for (std::size_t x = 0; x < n && !r.transitive_violation; ++x) {
    for (std::size_t y = 0; y < n && !r.transitive_violation; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (m.s(x, z) < meet(m.s(x, y), m.s(y, z))) {
          r.transitive_violation = std::array<std::size_t, 3>{x, y, z};
          break;
        }
      }
    }
  }
  for (std::size_t x = 0; x < n && !r.symmetric_violation; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (m.s(x, y) != m.s(y, x)) {
        r.symmetric_violation = std::array<std::size_t, 2>{x, y};
        break;
      }
    }
  }
  return r;
}

namespace detail {

inline void require_declared(const GKModel& m, const std::set<std::string>& vars) {
  for (const auto& v : vars) {
    if (!m.var_index(v)) throw UnknownAtomError("variable '" + v + "' not declared in model");
  }
}

}  // namespace detail

/// Replaces S by the accessibility derived from the fragment:
///   S'xy = min over □ψ ∈ F of (e(x,□ψ) ⇒ e(y,ψ))
///        ∧ min over ◇ψ ∈ F of (e(y,ψ) ⇒ e(x,◇ψ)),   empty min = 1.
/// S ≤ S' pointwise and every member of F keeps its value at every world.
inline GKModel optimize_fragment(const GKModel& m, const Fragment& fragment) {
  detail::require_declared(m, fragment.variables());
  Circuit c(fragment.formulas(), Circuit::Mode::Modal);
  const auto table = evaluate(m, c);
  const std::size_t n = m.world_count();
  GKModel out = m;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      TruthValue acc = TruthValue::one();
      for (const auto& f : fragment) {
        if (!f.is_modal()) continue;
        const auto& whole = table[c.node_of(f)];
        const auto& sub = table[c.node_of(f.sub())];
        acc = meet(acc, f.is(Connective::Box) ? residuum(whole[x], sub[y]) : residuum(sub[y], whole[x]));
      }
      out.set_s(x, y, acc);
    }
  }
  return out;
}

/// Instances of s with metavariables drawn from F, in lexicographic order
/// over the fragment enumeration, at most `cap` of them.
inline std::vector<Formula> scheme_instances(const Scheme& s, const Fragment& fragment,
                                             std::size_t cap = 400) {
  std::vector<Formula> out;
  const auto& fs = fragment.formulas();
  std::vector<std::size_t> idx(s.arity(), 0);
  while (out.size() < cap) {
    Substitution sigma;
    for (std::size_t i = 0; i < idx.size(); ++i) sigma.emplace(s.metavariables[i], fs[idx[i]]);
    out.push_back(instantiate(s, sigma));
    std::size_t k = idx.size();
    while (k > 0 && ++idx[k - 1] == fs.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

/// Instances of s over F (see scheme_instances) that are not valid in m.
inline std::vector<Formula> check_scheme(const GKModel& m, const Scheme& s, const Fragment& fragment,
                                         std::size_t cap = 400) {
  detail::require_declared(m, fragment.variables());
  const auto instances = scheme_instances(s, fragment, cap);
  Circuit c(instances, Circuit::Mode::Modal);
  const auto table = evaluate(m, c);
  std::vector<Formula> bad;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& row = table[c.roots()[i]];
    if (std::any_of(row.begin(), row.end(), [](const TruthValue& v) { return !v.is_one(); })) {
      bad.push_back(instances[i]);
    }
  }
  return bad;
}

/// Converts a rank-valued model to exact values through `to_value`.
template <class F>
GKModel map_model(const BasicModel<Rank>& m, F&& to_value) {
  GKModel out(m.worlds(), m.vars());
  for (std::size_t x = 0; x < m.world_count(); ++x) {
    for (std::size_t y = 0; y < m.world_count(); ++y) out.set_s(x, y, to_value(m.s(x, y)));
    for (std::size_t v = 0; v < m.var_count(); ++v) out.set_e(x, v, to_value(m.e(x, v)));
  }
  return out;
}

}  // namespace gkl

#endif  // GKL_KRIPKE_HPP
