// Finite bi-modal Gödel algebras (G, I, K) whose carrier is a power C^d of a
// finite chain C ⊂ [0,1], ordered pointwise. d = 1 gives chain algebras;
// complex algebras of d-world frames use d = |W|.

#ifndef GKL_ALGEBRA_HPP
#define GKL_ALGEBRA_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/kripke.hpp"
#include "gkl/truth_value.hpp"

namespace gkl {

class BimodalAlgebra {
 public:
  using Element = std::uint32_t;

  /// Carrier chain^dim with I = K = identity until set. Throws ValueError if
  /// the chain is not strictly ascending from 0 to 1.
  BimodalAlgebra(std::vector<TruthValue> chain, std::size_t dim = 1) : chain_(std::move(chain)), dim_(dim) {
    if (chain_.size() < 2 || !chain_.front().is_zero() || !chain_.back().is_one()) {
      throw ValueError("carrier chain must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < chain_.size(); ++i) {
      if (!(chain_[i - 1] < chain_[i])) throw ValueError("carrier chain must be strictly ascending");
    }
    if (dim_ == 0) throw ValueError("dimension must be positive");
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < dim_; ++i) {
      n *= chain_.size();
      if (n > (1u << 22)) throw ValueError("carrier too large");
    }
    size_ = static_cast<Element>(n);
    digits_.resize(size_ * dim_);
    for (Element e = 0; e < size_; ++e) {
      Element c = e;
      for (std::size_t i = dim_; i-- > 0;) {
        digits_[e * dim_ + i] = static_cast<std::uint16_t>(c % chain_.size());
        c /= static_cast<Element>(chain_.size());
      }
    }
    i_.resize(size_);
    k_.resize(size_);
    for (Element e = 0; e < size_; ++e) i_[e] = k_[e] = e;
  }

  const std::vector<TruthValue>& chain() const { return chain_; }
  std::size_t dim() const { return dim_; }
  Element size() const { return size_; }

  Element bottom() const { return 0; }
  Element top() const { return size_ - 1; }

  /// Chain index of coordinate i of e; coordinate 0 is most significant,
  /// so element order is lexicographic in coordinates.
  std::size_t digit(Element e, std::size_t i) const { return digits_[e * dim_ + i]; }

  Element from_digits(const std::vector<std::size_t>& d) const {
    Element e = 0;
    for (std::size_t i = 0; i < dim_; ++i) e = e * static_cast<Element>(chain_.size()) + static_cast<Element>(d[i]);
    return e;
  }

  Element meet(Element a, Element b) const {
    return combine(a, b, [](std::size_t x, std::size_t y) { return std::min(x, y); });
  }
  Element join(Element a, Element b) const {
    return combine(a, b, [](std::size_t x, std::size_t y) { return std::max(x, y); });
  }
  Element residuum(Element a, Element b) const {
    const std::size_t t = chain_.size() - 1;
    return combine(a, b, [t](std::size_t x, std::size_t y) { return x <= y ? t : y; });
  }
  bool leq(Element a, Element b) const {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (digit(a, i) > digit(b, i)) return false;
    }
    return true;
  }

  Element I(Element a) const { return i_[a]; }
  Element K(Element a) const { return k_[a]; }
  void set_I(Element a, Element b) { i_.at(a) = check(b); }
  void set_K(Element a, Element b) { k_.at(a) = check(b); }

  TruthValue coordinate(Element e, std::size_t i) const { return chain_[digit(e, i)]; }

  /// "1/2" for chains, "(0,1/2,1)" for powers.
  std::string str(Element e) const {
    if (dim_ == 1) return chain_[digit(e, 0)].str();
    std::string out = "(";
    for (std::size_t i = 0; i < dim_; ++i) out += (i ? "," : "") + chain_[digit(e, i)].str();
    return out + ")";
  }

  /// Inverse of str; also accepts (for d = 1) aliases given in `names`.
  Element parse_element(const std::string& text, const std::map<std::string, Element>& names = {}) const {
    if (auto it = names.find(text); it != names.end()) return it->second;
    std::vector<std::string> parts;
    if (dim_ == 1) {
      parts.push_back(text);
    } else {
      if (text.size() < 2 || text.front() != '(' || text.back() != ')') throw ValueError("expected a tuple '" + text + "'");
      std::string cur;
      for (char c : text.substr(1, text.size() - 2)) {
        if (c == ',') {
          parts.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      parts.push_back(cur);
      if (parts.size() != dim_) throw ValueError("tuple '" + text + "' has the wrong length");
    }
    std::vector<std::size_t> d;
    for (const auto& p : parts) {
      const auto v = TruthValue::parse(p);
      auto it = std::find(chain_.begin(), chain_.end(), v);
      if (it == chain_.end()) throw ValueError("'" + p + "' is not in the carrier chain");
      d.push_back(static_cast<std::size_t>(it - chain_.begin()));
    }
    return from_digits(d);
  }

  friend bool operator==(const BimodalAlgebra&, const BimodalAlgebra&) = default;

 private:
  template <class Op>
  Element combine(Element a, Element b, Op op) const {
    Element e = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      e = e * static_cast<Element>(chain_.size()) + static_cast<Element>(op(digit(a, i), digit(b, i)));
    }
    return e;
  }
  Element check(Element b) const {
    if (b >= size_) throw ValueError("element out of range");
    return b;
  }

  std::vector<TruthValue> chain_;
  std::size_t dim_;
  Element size_ = 0;
  std::vector<std::uint16_t> digits_;
  std::vector<Element> i_, k_;
};

enum class Identity {
  IMeet,      // I(a·b) = Ia·Ib
  ITop,       // I1 = 1
  KJoin,      // K(a⋎b) = Ka⋎Kb
  KBottom,    // K0 = 0
  KImpI,      // Ka→Ib ≤ I(a→b)
  KImpK,      // K(a→b) ≤ Ia→Kb
  TBox,       // Ia ≤ a
  TDia,       // a ≤ Ka
  FourBox,    // Ia ≤ IIa
  FourDia,    // KKa ≤ Ka
  FourBoxEq,  // Ia = IIa
  FourDiaEq,  // Ka = KKa
  M1,         // a ≤ IKa
  M2,         // KIa ≤ a
};

inline const char* to_string(Identity id) {
  switch (id) {
    case Identity::IMeet: return "I(a*b)=Ia*Ib";
    case Identity::ITop: return "I1=1";
    case Identity::KJoin: return "K(a+b)=Ka+Kb";
    case Identity::KBottom: return "K0=0";
    case Identity::KImpI: return "Ka->Ib<=I(a->b)";
    case Identity::KImpK: return "K(a->b)<=Ia->Kb";
    case Identity::TBox: return "Ia<=a";
    case Identity::TDia: return "a<=Ka";
    case Identity::FourBox: return "Ia<=IIa";
    case Identity::FourDia: return "KKa<=Ka";
    case Identity::FourBoxEq: return "Ia=IIa";
    case Identity::FourDiaEq: return "Ka=KKa";
    case Identity::M1: return "a<=IKa";
    case Identity::M2: return "KIa<=a";
  }
  return "?";
}

/// Which optional identity pairs to check besides the six base identities.
struct IdentityGroups {
  bool reflexivity = false;
  bool transitivity = false;     // the inequality forms Ia ≤ IIa, KKa ≤ Ka
  bool transitivity_eq = false;  // the equality forms Ia = IIa, Ka = KKa
  bool symmetry = false;

  static IdentityGroups all() { return {true, true, true, true}; }
  /// Groups that hold in complex algebras of frames with these properties.
  static IdentityGroups for_frame(bool refl, bool trans, bool symm) { return {refl, trans, refl && trans, symm}; }
};

struct IdentityResult {
  Identity identity;
  bool holds = true;
  std::optional<std::pair<BimodalAlgebra::Element, BimodalAlgebra::Element>> counterexample;  // (a, b)
};

struct IdentityReport {
  std::vector<IdentityResult> results;

  bool all_hold() const {
    return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.holds; });
  }
  const IdentityResult* find(Identity id) const {
    for (const auto& r : results) {
      if (r.identity == id) return &r;
    }
    return nullptr;
  }
};

namespace detail {

inline bool identity_holds(const BimodalAlgebra& A, Identity id, BimodalAlgebra::Element a, BimodalAlgebra::Element b) {
  switch (id) {
    case Identity::IMeet: return A.I(A.meet(a, b)) == A.meet(A.I(a), A.I(b));
    case Identity::ITop: return A.I(A.top()) == A.top();
    case Identity::KJoin: return A.K(A.join(a, b)) == A.join(A.K(a), A.K(b));
    case Identity::KBottom: return A.K(A.bottom()) == A.bottom();
    case Identity::KImpI: return A.leq(A.residuum(A.K(a), A.I(b)), A.I(A.residuum(a, b)));
    case Identity::KImpK: return A.leq(A.K(A.residuum(a, b)), A.residuum(A.I(a), A.K(b)));
    case Identity::TBox: return A.leq(A.I(a), a);
    case Identity::TDia: return A.leq(a, A.K(a));
    case Identity::FourBox: return A.leq(A.I(a), A.I(A.I(a)));
    case Identity::FourDia: return A.leq(A.K(A.K(a)), A.K(a));
    case Identity::FourBoxEq: return A.I(a) == A.I(A.I(a));
    case Identity::FourDiaEq: return A.K(a) == A.K(A.K(a));
    case Identity::M1: return A.leq(a, A.I(A.K(a)));
    case Identity::M2: return A.leq(A.K(A.I(a)), a);
  }
  return false;
}

inline bool binary(Identity id) {
  return id == Identity::IMeet || id == Identity::KJoin || id == Identity::KImpI || id == Identity::KImpK;
}

inline bool nullary(Identity id) { return id == Identity::ITop || id == Identity::KBottom; }

}  // namespace detail

/// Exhaustive check over all carrier pairs. Counterexamples are the
/// lexicographically first (a, b); unary identities report b = a, nullary
/// ones (0, 0). `jobs` splits the a-range across threads.
inline IdentityReport check_identities(const BimodalAlgebra& A, const IdentityGroups& groups = {}, unsigned jobs = 1) {
  std::vector<Identity> ids = {Identity::IMeet, Identity::ITop, Identity::KJoin,
                               Identity::KBottom, Identity::KImpI, Identity::KImpK};
  if (groups.reflexivity) ids.insert(ids.end(), {Identity::TBox, Identity::TDia});
  if (groups.transitivity) ids.insert(ids.end(), {Identity::FourBox, Identity::FourDia});
  if (groups.transitivity_eq) ids.insert(ids.end(), {Identity::FourBoxEq, Identity::FourDiaEq});
  if (groups.symmetry) ids.insert(ids.end(), {Identity::M1, Identity::M2});

  using El = BimodalAlgebra::Element;
  const El n = A.size();
  IdentityReport report;
  for (auto id : ids) {
    IdentityResult r{id, true, std::nullopt};
    if (detail::nullary(id)) {
      if (!detail::identity_holds(A, id, 0, 0)) r = {id, false, std::make_pair(El{0}, El{0})};
      report.results.push_back(r);
      continue;
    }
    const bool bin = detail::binary(id);
    // First failing a in [lo, hi), with its first failing b.
    auto scan = [&](El lo, El hi) -> std::optional<std::pair<El, El>> {
      for (El a = lo; a < hi; ++a) {
        if (!bin) {
          if (!detail::identity_holds(A, id, a, a)) return std::make_pair(a, a);
          continue;
        }
        for (El b = 0; b < n; ++b) {
          if (!detail::identity_holds(A, id, a, b)) return std::make_pair(a, b);
        }
      }
      return std::nullopt;
    };
    const unsigned t = std::max(1u, std::min<unsigned>(jobs, n));
    std::vector<std::optional<std::pair<El, El>>> found(t);
    if (t == 1) {
      found[0] = scan(0, n);
    } else {
      std::vector<std::thread> workers;
      for (unsigned k = 0; k < t; ++k) {
        const El lo = static_cast<El>(std::uint64_t(n) * k / t), hi = static_cast<El>(std::uint64_t(n) * (k + 1) / t);
        workers.emplace_back([&, k, lo, hi] { found[k] = scan(lo, hi); });
      }
      for (auto& w : workers) w.join();
    }
    for (const auto& f : found) {
      if (f) {
        r = {id, false, f};
        break;
      }
    }
    report.results.push_back(r);
  }
  return report;
}

using AlgebraValuation = std::map<std::string, BimodalAlgebra::Element>;

/// Homomorphic extension of v with □ ↦ I, ◇ ↦ K.
inline BimodalAlgebra::Element eval_algebra(const BimodalAlgebra& A, const AlgebraValuation& v, const Formula& phi) {
  switch (phi.kind()) {
    case Connective::Bot: return A.bottom();
    case Connective::Var: {
      auto it = v.find(phi.name());
      if (it == v.end()) throw UnknownAtomError("variable '" + phi.name() + "' has no algebra value");
      return it->second;
    }
    case Connective::And: return A.meet(eval_algebra(A, v, phi.lhs()), eval_algebra(A, v, phi.rhs()));
    case Connective::Or: return A.join(eval_algebra(A, v, phi.lhs()), eval_algebra(A, v, phi.rhs()));
    case Connective::Imp: return A.residuum(eval_algebra(A, v, phi.lhs()), eval_algebra(A, v, phi.rhs()));
    case Connective::Box: return A.I(eval_algebra(A, v, phi.sub()));
    case Connective::Dia: return A.K(eval_algebra(A, v, phi.sub()));
  }
  return A.bottom();
}

namespace detail {

inline std::size_t chain_index(const std::vector<TruthValue>& chain, const TruthValue& x, const char* what) {
  auto it = std::lower_bound(chain.begin(), chain.end(), x);
  if (it == chain.end() || *it != x) throw ValueError(std::string(what) + " value " + x.str() + " is not in the chain");
  return static_cast<std::size_t>(it - chain.begin());
}

}  // namespace detail

/// The complex algebra chain^W of the frame of m:
///   I(f)(w) = min over w' of (Sww' ⇒ f(w')),  K(f)(w) = max over w' of (Sww' ∧ f(w')).
/// Throws ValueError if some S value is not in the chain.
inline BimodalAlgebra complex_algebra(const GKModel& m, const std::vector<TruthValue>& chain) {
  const std::size_t n = m.world_count();
  BimodalAlgebra A(chain, n);
  std::vector<std::size_t> s(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) s[x * n + y] = detail::chain_index(chain, m.s(x, y), "S");
  }
  const std::size_t top = chain.size() - 1;
  std::vector<std::size_t> di(n), dk(n);
  for (BimodalAlgebra::Element f = 0; f < A.size(); ++f) {
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t lo = top, hi = 0;
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t sxy = s[x * n + y], fy = A.digit(f, y);
        lo = std::min(lo, sxy <= fy ? top : fy);
        hi = std::max(hi, std::min(sxy, fy));
      }
      di[x] = lo;
      dk[x] = hi;
    }
    A.set_I(f, A.from_digits(di));
    A.set_K(f, A.from_digits(dk));
  }
  return A;
}

/// 0, 1 and every S and e value of m, ascending.
inline std::vector<TruthValue> model_chain(const GKModel& m) {
  std::set<TruthValue> values{TruthValue::zero(), TruthValue::one()};
  for (std::size_t x = 0; x < m.world_count(); ++x) {
    for (std::size_t y = 0; y < m.world_count(); ++y) values.insert(m.s(x, y));
    for (std::size_t v = 0; v < m.var_count(); ++v) values.insert(m.e(x, v));
  }
  return {values.begin(), values.end()};
}

/// v_e(p) = e(−, p) in the complex algebra over `chain`.
inline AlgebraValuation model_valuation(const BimodalAlgebra& A, const GKModel& m) {
  AlgebraValuation v;
  for (std::size_t p = 0; p < m.var_count(); ++p) {
    std::vector<std::size_t> d(m.world_count());
    for (std::size_t x = 0; x < m.world_count(); ++x) d[x] = detail::chain_index(A.chain(), m.e(x, p), "e");
    v[m.vars()[p]] = A.from_digits(d);
  }
  return v;
}

/// v_e(φ)(w) = e(w, φ) for every world w.
inline bool adjunction_check(const GKModel& m, const Formula& phi, const std::vector<TruthValue>& chain) {
  const auto A = complex_algebra(m, chain);
  const auto algebraic = eval_algebra(A, model_valuation(A, m), phi);
  const auto direct = eval_all(m, phi);
  for (std::size_t x = 0; x < m.world_count(); ++x) {
    if (A.coordinate(algebraic, x) != direct[x]) return false;
  }
  return true;
}

inline bool adjunction_check(const GKModel& m, const Formula& phi) { return adjunction_check(m, phi, model_chain(m)); }

}  // namespace gkl

#endif  // GKL_ALGEBRA_HPP
