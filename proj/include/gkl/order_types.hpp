// Depth-first enumeration of value assignments to a row of slots.
//
// Gödel evaluation depends only on the relative order of the values and on
// which of them are 0 or 1, so assignments are enumerated up to order type:
// each free slot goes to 0, to 1, to a level already in use, or to a fresh
// level inserted into any gap. Every weak order with designated endpoints is
// produced exactly once, and the order type of any prefix never changes as
// the search deepens, which makes partial evaluation exact.
//
// Slots may instead be restricted to {0,1} or to a fixed evenly spaced chain.

#ifndef GKL_ORDER_TYPES_HPP
#define GKL_ORDER_TYPES_HPP

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gkl/truth_value.hpp"

namespace gkl {

enum class SlotDomain { OrderType, Crisp, FixedChain };

struct SlotSpec {
  SlotDomain domain = SlotDomain::OrderType;
  int chain_size = 0;  // FixedChain only; >= 2
};

enum class DfsStatus { Found, Exhausted, BudgetExceeded };

struct DfsResult {
  DfsStatus status = DfsStatus::Exhausted;
  std::uint64_t steps = 0;  // slot assignments tried
};

class LevelDfs {
 public:
  explicit LevelDfs(std::vector<SlotSpec> slots) : slots_(std::move(slots)) {
    for (const auto& s : slots_) {
      if (s.domain == SlotDomain::FixedChain) {
        assert(s.chain_size >= 2);
        if (fixed_chain_ == 0) fixed_chain_ = s.chain_size;
        assert(fixed_chain_ == s.chain_size);
      }
    }
  }

  std::size_t size() const { return slots_.size(); }

  /// Key of the i-th point of an evenly spaced chain with n points.
  static std::int64_t chain_key(int i, int n) {
    if (i >= n - 1) return Rank::kTop;
    return static_cast<std::int64_t>(i) * (Rank::kTop / (n - 1));
  }

  /// Runs the search from `prefix` (keys for the first slots, as produced by
  /// frontier()). `assign(slot, keys)` is called after each slot is filled
  /// and may return false to prune; `leaf(keys)` returns true to stop.
  /// The search gives up after `step_limit` slot assignments.
  template <class Assign, class Leaf>
  DfsResult run(Assign&& assign, Leaf&& leaf, std::uint64_t step_limit,
                const std::vector<std::int64_t>& prefix = {}) {
    keys_.assign(slots_.size(), 0);
    levels_.clear();
    steps_ = 0;
    exceeded_ = false;
    limit_ = step_limit;
    for (std::size_t s = 0; s < prefix.size(); ++s) {
      keys_[s] = prefix[s];
      note_level(prefix[s]);
      if (!assign(s, static_cast<const std::vector<std::int64_t>&>(keys_))) {
        return {DfsStatus::Exhausted, 0};
      }
    }
    const bool found = dfs(prefix.size(), assign, leaf);
    if (found) return {DfsStatus::Found, steps_};
    return {exceeded_ ? DfsStatus::BudgetExceeded : DfsStatus::Exhausted, steps_};
  }

  /// All distinct prefixes of length `depth`, in enumeration order, without
  /// pruning. Running each prefix in order reproduces the full search.
  std::vector<std::vector<std::int64_t>> frontier(std::size_t depth) {
    depth = std::min(depth, slots_.size());
    std::vector<std::vector<std::int64_t>> out;
    keys_.assign(slots_.size(), 0);
    levels_.clear();
    collect(0, depth, out);
    return out;
  }

  /// Converts keys to truth values: fixed-chain keys to i/(n-1), otherwise
  /// the k distinct intermediate levels to 1/(k+1), ..., k/(k+1).
  std::vector<TruthValue> to_values(const std::vector<std::int64_t>& keys) const {
    std::vector<TruthValue> out;
    out.reserve(keys.size());
    if (fixed_chain_ > 0) {
      const std::int64_t step = Rank::kTop / (fixed_chain_ - 1);
      for (auto k : keys) {
        const int i = k == Rank::kTop ? fixed_chain_ - 1 : static_cast<int>(k / step);
        out.emplace_back(TruthValue::Integer(i), TruthValue::Integer(fixed_chain_ - 1));
      }
      return out;
    }
    std::vector<std::int64_t> mids;
    for (auto k : keys) {
      if (k != 0 && k != Rank::kTop) mids.push_back(k);
    }
    std::sort(mids.begin(), mids.end());
    mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
    const auto denom = static_cast<long>(mids.size() + 1);
    for (auto k : keys) {
      if (k == 0) {
        out.push_back(TruthValue::zero());
      } else if (k == Rank::kTop) {
        out.push_back(TruthValue::one());
      } else {
        const auto pos = std::lower_bound(mids.begin(), mids.end(), k) - mids.begin() + 1;
        out.emplace_back(TruthValue::Integer(pos), TruthValue::Integer(denom));
      }
    }
    return out;
  }

 private:
  struct Option {
    std::int64_t key;
    bool fresh;
  };

  void options(std::size_t s, std::vector<Option>& out) const {
    out.clear();
    const auto& spec = slots_[s];
    switch (spec.domain) {
      case SlotDomain::Crisp:
        out.push_back({0, false});
        out.push_back({Rank::kTop, false});
        return;
      case SlotDomain::FixedChain:
        for (int i = 0; i < spec.chain_size; ++i) out.push_back({chain_key(i, spec.chain_size), false});
        return;
      case SlotDomain::OrderType: {
        std::int64_t below = 0;
        out.push_back({0, false});
        for (auto l : levels_) {
          assert(l - below >= 2);
          out.push_back({below + (l - below) / 2, true});
          out.push_back({l, false});
          below = l;
        }
        assert(Rank::kTop - below >= 2);
        out.push_back({below + (Rank::kTop - below) / 2, true});
        out.push_back({Rank::kTop, false});
        return;
      }
    }
  }

  void note_level(std::int64_t key) {
    if (key == 0 || key == Rank::kTop) return;
    auto it = std::lower_bound(levels_.begin(), levels_.end(), key);
    if (it == levels_.end() || *it != key) levels_.insert(it, key);
  }

  void set_slot(std::size_t s, const Option& o) {
    keys_[s] = o.key;
    if (o.fresh) levels_.insert(std::lower_bound(levels_.begin(), levels_.end(), o.key), o.key);
  }

  void unset_slot(const Option& o) {
    if (o.fresh) levels_.erase(std::lower_bound(levels_.begin(), levels_.end(), o.key));
  }

  template <class Assign, class Leaf>
  bool dfs(std::size_t s, Assign& assign, Leaf& leaf) {
    if (s == slots_.size()) return leaf(static_cast<const std::vector<std::int64_t>&>(keys_));
    std::vector<Option> opts;
    options(s, opts);
    for (const auto& o : opts) {
      if (++steps_ > limit_) {
        exceeded_ = true;
        return false;
      }
      set_slot(s, o);
      const bool keep = assign(s, static_cast<const std::vector<std::int64_t>&>(keys_));
      const bool stop = keep && dfs(s + 1, assign, leaf);
      unset_slot(o);
      if (stop) return true;
      if (exceeded_) return false;
    }
    return false;
  }

  void collect(std::size_t s, std::size_t depth, std::vector<std::vector<std::int64_t>>& out) {
    if (s == depth) {
      out.emplace_back(keys_.begin(), keys_.begin() + static_cast<std::ptrdiff_t>(depth));
      return;
    }
    std::vector<Option> opts;
    options(s, opts);
    for (const auto& o : opts) {
      set_slot(s, o);
      collect(s + 1, depth, out);
      unset_slot(o);
    }
  }

  std::vector<SlotSpec> slots_;
  int fixed_chain_ = 0;
  std::vector<std::int64_t> keys_;
  std::vector<std::int64_t> levels_;
  std::uint64_t steps_ = 0;
  std::uint64_t limit_ = 0;
  bool exceeded_ = false;
};

}  // namespace gkl

#endif  // GKL_ORDER_TYPES_HPP
