// Bounded counter-model search.
//
// Exhaustive mode sweeps every model with N = 1, 2, ... worlds up to order
// type. The S entries come first, then e, and each S and e entry is one slot
// of a LevelDfs. Evaluation depends only on the order type of these values,
// so the sweep is complete for each world count it finishes. Partial
// assignments are pruned with interval bounds: unassigned entries range
// over [0,1], and a branch is cut when φ is forced to 1 at every world.
//
// Stochastic mode is a restart-based local search and proves nothing when
// it fails.

#ifndef GKL_SEARCH_HPP
#define GKL_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gkl/circuit.hpp"
#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/kripke.hpp"
#include "gkl/order_types.hpp"
#include "gkl/truth_value.hpp"

namespace gkl {

struct FrameClass {
  bool reflexive = false;
  bool transitive = false;
  bool symmetric = false;
  bool crisp = false;

  /// Comma-separated subset of refl, trans, symm, crisp; empty = all frames.
  static FrameClass parse(const std::string& spec) {
    FrameClass c;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "refl") c.reflexive = true;
      else if (item == "trans") c.transitive = true;
      else if (item == "symm") c.symmetric = true;
      else if (item == "crisp") c.crisp = true;
      else if (!item.empty()) throw SchemaError("class", "unknown frame property '" + item + "'");
    }
    return c;
  }

  static FrameClass s5() { return {true, true, true, false}; }

  friend bool operator==(const FrameClass&, const FrameClass&) = default;
};

template <GodelChain V>
bool in_class(const BasicModel<V>& m, const FrameClass& cls) {
  const auto r = frame_properties(m);
  if (cls.reflexive && !r.reflexive()) return false;
  if (cls.transitive && !r.transitive()) return false;
  if (cls.symmetric && !r.symmetric()) return false;
  if (cls.crisp) {
    for (std::size_t x = 0; x < m.world_count(); ++x) {
      for (std::size_t y = 0; y < m.world_count(); ++y) {
        if (m.s(x, y) != V::zero() && m.s(x, y) != V::one()) return false;
      }
    }
  }
  return true;
}

/// Moves S into the class. Crisp entries are thresholded at 1/2, the
/// diagonal is set to 1, S is symmetrized by min and then closed under
/// max-min composition. Each step preserves what the earlier ones ensured.
inline void project_to_class(GKModel& m, const FrameClass& cls) {
  const std::size_t n = m.world_count();
  if (cls.crisp) {
    const TruthValue half(1, 2);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) m.set_s(x, y, m.s(x, y) < half ? TruthValue::zero() : TruthValue::one());
    }
  }
  if (cls.reflexive) {
    for (std::size_t x = 0; x < n; ++x) m.set_s(x, x, TruthValue::one());
  }
  if (cls.symmetric) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        const auto v = meet(m.s(x, y), m.s(y, x));
        m.set_s(x, y, v);
        m.set_s(y, x, v);
      }
    }
  }
  if (cls.transitive) {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          for (std::size_t z = 0; z < n; ++z) {
            const auto via = meet(m.s(x, y), m.s(y, z));
            if (m.s(x, z) < via) {
              m.set_s(x, z, via);
              changed = true;
            }
          }
        }
      }
    }
  }
}

enum class SearchMode { Exhaustive, Stochastic };

struct SearchBudget {
  std::size_t max_worlds = 2;
  SearchMode mode = SearchMode::Exhaustive;
  std::optional<int> chain_size;  // restrict values to an evenly spaced chain
  std::uint64_t iterations = 20000;  // stochastic: total local moves
  std::uint64_t seed = 0;
  std::uint64_t step_limit = 50'000'000;  // exhaustive: slot assignments
  unsigned jobs = 1;

  // Exhaustive caps.
  static constexpr std::size_t kMaxWorlds = 3;
  static constexpr std::size_t kMaxVars = 2;
};

enum class SearchStatus {
  Found,           // counter-model returned
  Exhausted,       // complete sweep, none exists within the bound
  Inconclusive,    // stochastic search found nothing
  BudgetExceeded,  // step limit hit before the sweep finished
};

inline std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::Inconclusive: return "inconclusive";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "";
}

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<GKModel> model;
  std::size_t world = 0;  // witness, when found
  TruthValue value;       // e(world, φ), when found
  std::uint64_t steps = 0;
};

namespace detail {

struct Interval {
  Rank lo, hi;
};

/// One exhaustive sweep over models with a fixed number of worlds.
class WorldSweep {
 public:
  WorldSweep(const Formula& phi, const FrameClass& cls, std::size_t worlds, std::optional<int> chain)
      : circuit_({phi}, Circuit::Mode::Modal), cls_(cls), n_(worlds) {
    const auto vs = variables(phi);
    vars_.assign(vs.begin(), vs.end());
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n_; ++i) names.push_back("w" + std::to_string(i));
    names_ = names;
    s_slot_.assign(n_ * n_, -1);
    std::vector<SlotSpec> specs;
    auto spec = [&](bool accessibility) {
      if (accessibility && cls_.crisp) return SlotSpec{SlotDomain::Crisp, 0};
      if (chain) return SlotSpec{SlotDomain::FixedChain, *chain};
      return SlotSpec{};
    };
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y) {
        if (x == y && cls_.reflexive) continue;
        if (cls_.symmetric && y < x) {
          s_slot_[x * n_ + y] = s_slot_[y * n_ + x];
          continue;
        }
        s_slot_[x * n_ + y] = static_cast<int>(specs.size());
        specs.push_back(spec(true));
      }
    }
    s_slots_ = specs.size();
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t v = 0; v < vars_.size(); ++v) specs.push_back(spec(false));
    }
    specs_ = specs;
    leaf_var_.resize(circuit_.leaves().size());
    for (std::size_t i = 0; i < circuit_.leaves().size(); ++i) {
      leaf_var_[i] = static_cast<std::size_t>(
          std::lower_bound(vars_.begin(), vars_.end(), circuit_.leaves()[i].name()) - vars_.begin());
    }
  }

  const std::vector<SlotSpec>& specs() const { return specs_; }

  struct Outcome {
    DfsResult dfs;
    std::optional<std::vector<std::int64_t>> keys;
    std::size_t world = 0;
  };

  /// Runs the sweep below one frontier prefix.
  Outcome run(const std::vector<std::int64_t>& prefix, std::uint64_t step_limit) const {
    LevelDfs dfs(specs_);
    std::vector<std::vector<Interval>> table;
    Outcome out;
    auto assign = [&](std::size_t slot, const std::vector<std::int64_t>& keys) {
      if (slot + 1 == s_slots_ && cls_.transitive && !transitive(keys)) return false;
      return !forced_valid(keys, slot + 1, table);
    };
    auto leaf = [&](const std::vector<std::int64_t>& keys) {
      if (s_slots_ == 0 && cls_.transitive && !transitive(keys)) return false;
      forced_valid(keys, keys.size(), table);
      const auto& root = table[circuit_.roots()[0]];
      for (std::size_t x = 0; x < n_; ++x) {
        if (root[x].hi < Rank::one()) {
          out.keys = keys;
          out.world = x;
          return true;
        }
      }
      return false;
    };
    out.dfs = dfs.run(assign, leaf, step_limit, prefix);
    return out;
  }

  GKModel to_model(const std::vector<std::int64_t>& keys) const {
    LevelDfs dfs(specs_);
    const auto values = dfs.to_values(keys);
    GKModel m(names_, vars_);
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y) {
        const int s = s_slot_[x * n_ + y];
        m.set_s(x, y, s < 0 ? TruthValue::one() : values[s]);
      }
      for (std::size_t v = 0; v < vars_.size(); ++v) m.set_e(x, v, values[e_slot(x, v)]);
    }
    return m;
  }

 private:
  std::size_t e_slot(std::size_t x, std::size_t v) const { return s_slots_ + x * vars_.size() + v; }

  Interval slot_interval(int slot, const std::vector<std::int64_t>& keys, std::size_t assigned) const {
    if (slot < 0) return {Rank::one(), Rank::one()};
    if (static_cast<std::size_t>(slot) < assigned) return {Rank{keys[slot]}, Rank{keys[slot]}};
    return {Rank::zero(), Rank::one()};
  }

  bool transitive(const std::vector<std::int64_t>& keys) const {
    auto s = [&](std::size_t x, std::size_t y) {
      const int i = s_slot_[x * n_ + y];
      return i < 0 ? Rank::kTop : keys[i];
    };
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y) {
        for (std::size_t z = 0; z < n_; ++z) {
          if (s(x, z) < std::min(s(x, y), s(y, z))) return false;
        }
      }
    }
    return true;
  }

  /// Interval evaluation with the first `assigned` slots fixed; true when φ
  /// is 1 at every world for every completion.
  bool forced_valid(const std::vector<std::int64_t>& keys, std::size_t assigned,
                    std::vector<std::vector<Interval>>& table) const {
    const auto& nodes = circuit_.nodes();
    table.resize(nodes.size());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const auto& node = nodes[id];
      auto& out = table[id];
      out.resize(n_);
      for (std::size_t x = 0; x < n_; ++x) {
        switch (node.kind) {
          case Connective::Bot: out[x] = {Rank::zero(), Rank::zero()}; break;
          case Connective::Var:
            out[x] = slot_interval(static_cast<int>(e_slot(x, leaf_var_[node.leaf])), keys, assigned);
            break;
          case Connective::And: {
            const auto &a = table[node.left][x], &b = table[node.right][x];
            out[x] = {meet(a.lo, b.lo), meet(a.hi, b.hi)};
            break;
          }
          case Connective::Or: {
            const auto &a = table[node.left][x], &b = table[node.right][x];
            out[x] = {join(a.lo, b.lo), join(a.hi, b.hi)};
            break;
          }
          case Connective::Imp: {
            const auto &a = table[node.left][x], &b = table[node.right][x];
            out[x] = {residuum(a.hi, b.lo), residuum(a.lo, b.hi)};
            break;
          }
          case Connective::Box: {
            Interval acc{Rank::one(), Rank::one()};
            for (std::size_t y = 0; y < n_; ++y) {
              const auto s = slot_interval(s_slot_[x * n_ + y], keys, assigned);
              const auto& b = table[node.left][y];
              acc.lo = meet(acc.lo, residuum(s.hi, b.lo));
              acc.hi = meet(acc.hi, residuum(s.lo, b.hi));
            }
            out[x] = acc;
            break;
          }
          case Connective::Dia: {
            Interval acc{Rank::zero(), Rank::zero()};
            for (std::size_t y = 0; y < n_; ++y) {
              const auto s = slot_interval(s_slot_[x * n_ + y], keys, assigned);
              const auto& b = table[node.left][y];
              acc.lo = join(acc.lo, meet(s.lo, b.lo));
              acc.hi = join(acc.hi, meet(s.hi, b.hi));
            }
            out[x] = acc;
            break;
          }
        }
      }
    }
    const auto& root = table[circuit_.roots()[0]];
    return std::all_of(root.begin(), root.end(), [](const Interval& i) { return i.lo == Rank::one(); });
  }

  Circuit circuit_;
  FrameClass cls_;
  std::size_t n_;
  std::vector<std::string> vars_;
  std::vector<std::string> names_;
  std::vector<int> s_slot_;  // -1: fixed at 1
  std::size_t s_slots_ = 0;
  std::vector<SlotSpec> specs_;
  std::vector<std::size_t> leaf_var_;
};

inline void check_caps(const Formula& phi, std::size_t max_worlds) {
  if (max_worlds < 1) throw Error("max_worlds must be at least 1");
  if (max_worlds > SearchBudget::kMaxWorlds) {
    throw Error("exhaustive search is capped at " + std::to_string(SearchBudget::kMaxWorlds) + " worlds");
  }
  if (variables(phi).size() > SearchBudget::kMaxVars) {
    throw Error("exhaustive search is capped at " + std::to_string(SearchBudget::kMaxVars) + " variables");
  }
}

/// A found model is re-checked with exact arithmetic before it is returned.
inline SearchResult certified(GKModel m, const Formula& phi, const FrameClass& cls, std::uint64_t steps) {
  if (!in_class(m, cls)) throw Error("internal: counter-model outside the frame class");
  const auto report = valid_in_model(m, phi);
  if (report.valid) throw Error("internal: counter-model does not refute the formula");
  SearchResult r{SearchStatus::Found, std::move(m), *report.witness, report.witness_value, steps};
  return r;
}

inline SearchResult exhaustive(const Formula& phi, const FrameClass& cls, const SearchBudget& budget) {
  check_caps(phi, budget.max_worlds);
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= budget.max_worlds; ++n) {
    WorldSweep sweep(phi, cls, n, budget.chain_size);
    const auto prefixes = LevelDfs(sweep.specs()).frontier(std::min<std::size_t>(2, sweep.specs().size()));
    std::vector<std::optional<WorldSweep::Outcome>> outcomes(prefixes.size());
    const std::uint64_t remaining = budget.step_limit - std::min(total, budget.step_limit);
    const unsigned jobs = std::max(1u, std::min<unsigned>(budget.jobs, static_cast<unsigned>(prefixes.size())));
    if (jobs == 1) {
      // Sequential: stop at the first prefix that decides the result.
      std::uint64_t used = 0;
      for (std::size_t i = 0; i < prefixes.size(); ++i) {
        outcomes[i] = sweep.run(prefixes[i], remaining);
        used += outcomes[i]->dfs.steps;
        if (outcomes[i]->keys || used > remaining) break;
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::atomic<std::size_t> first_found{prefixes.size()};
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < prefixes.size();) {
            if (i > first_found.load()) break;
            outcomes[i] = sweep.run(prefixes[i], remaining);
            if (outcomes[i]->keys) {
              std::size_t cur = first_found.load();
              while (i < cur && !first_found.compare_exchange_weak(cur, i)) {}
            }
          }
        });
      }
      for (auto& th : pool) th.join();
    }
    // Merge in enumeration order with a cumulative budget, which gives the
    // same answer for every job count.
    std::uint64_t used = 0;
    for (const auto& o : outcomes) {
      if (!o) break;
      used += o->dfs.steps;
      if (used > remaining) return {SearchStatus::BudgetExceeded, std::nullopt, 0, {}, total + used};
      if (o->keys) return certified(sweep.to_model(*o->keys), phi, cls, total + used);
    }
    total += used;
  }
  return {SearchStatus::Exhausted, std::nullopt, 0, {}, total};
}

/// Score of a candidate: the least value of φ over the worlds.
inline std::pair<TruthValue, std::size_t> worst_world(const GKModel& m, const Circuit& c,
                                                      const std::vector<std::size_t>& leaf_var,
                                                      std::vector<std::vector<TruthValue>>& table) {
  evaluate_into(m, c, leaf_var, table);
  const auto& root = table[c.roots()[0]];
  std::size_t best = 0;
  for (std::size_t x = 1; x < root.size(); ++x) {
    if (root[x] < root[best]) best = x;
  }
  return {root[best], best};
}

inline std::optional<GKModel> stochastic_restart(const Formula& phi, const FrameClass& cls,
                                                 const SearchBudget& budget, std::uint64_t restart,
                                                 std::uint64_t moves) {
  std::seed_seq seq{budget.seed, restart};
  std::mt19937_64 rng(seq);
  const int chain = budget.chain_size.value_or(9);
  auto random_value = [&] {
    return TruthValue(std::uniform_int_distribution<int>(0, chain - 1)(rng), chain - 1);
  };
  const auto vs = variables(phi);
  const std::vector<std::string> vars(vs.begin(), vs.end());
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, budget.max_worlds)(rng);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  GKModel m(names, vars);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) m.set_s(x, y, random_value());
    for (std::size_t v = 0; v < vars.size(); ++v) m.set_e(x, v, random_value());
  }
  project_to_class(m, cls);
  Circuit c({phi}, Circuit::Mode::Modal);
  const auto leaf_var = bind_leaves(m, c);
  std::vector<std::vector<TruthValue>> table;
  auto score = worst_world(m, c, leaf_var, table).first;
  const std::size_t entries = n * n + n * vars.size();
  for (std::uint64_t k = 0; k < moves && score.is_one(); ++k) {
    GKModel cand = m;
    const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, entries - 1)(rng);
    if (slot < n * n) cand.set_s(slot / n, slot % n, random_value());
    else cand.set_e((slot - n * n) / vars.size(), (slot - n * n) % vars.size(), random_value());
    project_to_class(cand, cls);
    const auto s = worst_world(cand, c, leaf_var, table).first;
    if (s <= score) {
      m = std::move(cand);
      score = s;
    }
  }
  if (score.is_one()) return std::nullopt;
  return m;
}

inline SearchResult stochastic(const Formula& phi, const FrameClass& cls, const SearchBudget& budget) {
  if (budget.max_worlds < 1) throw Error("max_worlds must be at least 1");
  constexpr std::uint64_t kMovesPerRestart = 64;
  const std::uint64_t restarts = std::max<std::uint64_t>(1, (budget.iterations + kMovesPerRestart - 1) / kMovesPerRestart);
  const unsigned jobs = std::max(1u, budget.jobs);
  // Restarts run in rounds of `jobs`; the lowest restart index that
  // succeeds wins, so the answer does not depend on scheduling.
  for (std::uint64_t base = 0; base < restarts; base += jobs) {
    const std::uint64_t count = std::min<std::uint64_t>(jobs, restarts - base);
    std::vector<std::optional<GKModel>> found(count);
    if (count == 1) {
      found[0] = stochastic_restart(phi, cls, budget, base, kMovesPerRestart);
    } else {
      std::vector<std::thread> pool;
      for (std::uint64_t i = 0; i < count; ++i) {
        pool.emplace_back([&, i] { found[i] = stochastic_restart(phi, cls, budget, base + i, kMovesPerRestart); });
      }
      for (auto& th : pool) th.join();
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      if (found[i]) return certified(std::move(*found[i]), phi, cls, (base + i + 1) * kMovesPerRestart);
    }
  }
  return {SearchStatus::Inconclusive, std::nullopt, 0, {}, restarts * kMovesPerRestart};
}

}  // namespace detail

/// Looks for M in the class and a world x with e(x, φ) < 1. Any model
/// returned has been re-validated exactly.
inline SearchResult find_countermodel(const Formula& phi, const FrameClass& cls, const SearchBudget& budget) {
  if (budget.mode == SearchMode::Exhaustive) return detail::exhaustive(phi, cls, budget);
  return detail::stochastic(phi, cls, budget);
}

/// Complete sweep up to order type: Exhausted certifies that no counter-
/// model with at most max_worlds worlds exists in the class.
inline SearchResult certify_no_small_countermodel(const Formula& phi, const FrameClass& cls, std::size_t max_worlds,
                                                  std::uint64_t step_limit = SearchBudget{}.step_limit,
                                                  unsigned jobs = 1) {
  SearchBudget b;
  b.max_worlds = max_worlds;
  b.step_limit = step_limit;
  b.jobs = jobs;
  return detail::exhaustive(phi, cls, b);
}

}  // namespace gkl

#endif  // GKL_SEARCH_HPP
