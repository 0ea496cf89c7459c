// Hilbert derivations of the derived schemes T1-T4 in the base system, for
// arbitrary instances. The shipped proof fixtures are their compacted output.

#ifndef GKL_DERIVATIONS_HPP
#define GKL_DERIVATIONS_HPP

#include "gkl/formula.hpp"
#include "gkl/proof.hpp"

namespace gkl::derivations {

namespace detail {

using F = Formula;

inline F bot() { return F::bot(); }
inline F imp(const F& a, const F& b) { return F::imp(a, b); }
inline F neg(const F& a) { return F::neg(a); }

/// ⊢ a → ((a→b) → b).
inline F apply_lemma(ProofBuilder& B, const F& a, const F& b) {
  B.hyp(a);
  B.hyp(imp(a, b));
  B.mp(a, imp(a, b));
  const F inner = B.discharge(b);
  return B.discharge(inner);
}

/// Under the hypothesis ¬◇a: □¬a.
inline F box_neg_from_not_dia(ProofBuilder& B, const F& a) {
  const F da = F::dia(a);
  const F bb = F::box(bot());
  B.hyp(da);
  B.mp(da, neg(da));
  B.mp(bot(), B.axiom("A9", {{"?a", bb}}));
  const F d = B.discharge(bb);
  return B.mp(d, B.axiom("FS2", {{"?a", a}, {"?b", bot()}}));
}

}  // namespace detail

/// ¬◇a ↔ □¬a.
inline Proof t1(const Formula& a) {
  using namespace detail;
  ProofBuilder B;
  const F da = F::dia(a), bna = F::box(neg(a));
  // ◇a → □¬a → ◇⊥, hypothesis-free.
  const F lem = apply_lemma(B, a, bot());
  const F rn = B.rn_dia(lem);
  const F fs1 = B.axiom("FS1", {{"?a", neg(a)}, {"?b", bot()}});
  const F fdia = B.axiom("Fdia", {});

  B.hyp(neg(da));
  box_neg_from_not_dia(B, a);
  const F fwd = B.discharge(bna);

  B.hyp(bna);
  B.hyp(da);
  const F d2 = B.mp(da, rn);
  const F k = B.mp(d2, fs1);
  B.mp(B.mp(bna, k), fdia);
  const F inner = B.discharge(bot());
  const F bwd = B.discharge(inner);

  const F a5 = B.axiom("A5", {{"?a", fwd}, {"?b", bwd}});
  B.mp(bwd, B.mp(fwd, a5));
  return compact_proof(B.proof());
}

/// ¬¬□a → □¬¬a.
inline Proof t2(const Formula& a) {
  using namespace detail;
  ProofBuilder B;
  const F ba = F::box(a), dna = F::dia(neg(a)), bb = F::box(bot());
  const F fs1 = B.axiom("FS1", {{"?a", a}, {"?b", bot()}});
  const F fdia = B.axiom("Fdia", {});
  const F fs2 = B.axiom("FS2", {{"?a", neg(a)}, {"?b", bot()}});
  const F a9 = B.axiom("A9", {{"?a", bb}});

  B.hyp(neg(neg(ba)));
  B.hyp(dna);
  B.hyp(ba);
  const F dbot = B.mp(ba, B.mp(dna, fs1));
  B.mp(dbot, fdia);
  const F not_ba = B.discharge(bot());
  B.mp(not_ba, neg(neg(ba)));
  B.mp(bot(), a9);
  const F d = B.discharge(bb);
  const F goal = B.mp(d, fs2);
  B.discharge(goal);
  return compact_proof(B.proof());
}

/// ◇¬¬a → ¬¬◇a.
inline Proof t3(const Formula& a) {
  using namespace detail;
  ProofBuilder B;
  const F da = F::dia(a), dnna = F::dia(neg(neg(a)));
  const F fs1 = B.axiom("FS1", {{"?a", neg(a)}, {"?b", bot()}});
  const F fdia = B.axiom("Fdia", {});

  B.hyp(dnna);
  B.hyp(neg(da));
  const F bna = box_neg_from_not_dia(B, a);
  const F dbot = B.mp(bna, B.mp(dnna, fs1));
  B.mp(dbot, fdia);
  const F inner = B.discharge(bot());
  B.discharge(inner);
  return compact_proof(B.proof());
}

/// (□a → ◇b) ∨ □((a→b) → b).
inline Proof t4(const Formula& a, const Formula& b) {
  using namespace detail;
  ProofBuilder B;
  const F ab = imp(a, b), ba = F::box(a), dab = F::dia(ab), db = F::dia(b);
  const F L = imp(ba, db), R = F::box(imp(ab, b)), D = F::disj(L, R);
  const F X = imp(ba, dab), Y = imp(dab, ba);

  // ⊢ ((a→b)→a) → ((a→b)→b), then □ of it and K.
  B.hyp(imp(ab, a));
  B.hyp(ab);
  B.mp(B.mp(ab, imp(ab, a)), ab);
  const F h1 = B.discharge(b);
  const F heyting = B.discharge(h1);
  const F kbox = B.axiom("Kbox", {{"?a", imp(ab, a)}, {"?b", imp(ab, b)}});
  const F mono = B.mp(B.nr_box(heyting), kbox);

  const F fs1 = B.axiom("FS1", {{"?a", a}, {"?b", b}});
  const F fs2 = B.axiom("FS2", {{"?a", ab}, {"?b", a}});
  const F a6 = B.axiom("A6", {{"?a", L}, {"?b", R}});
  const F a7 = B.axiom("A7", {{"?a", L}, {"?b", R}});

  B.hyp(X);
  B.hyp(ba);
  B.mp(ba, B.mp(B.mp(ba, X), fs1));
  const F l = B.discharge(db);
  B.mp(l, a6);
  const F case1 = B.discharge(D);

  B.hyp(Y);
  B.mp(B.mp(B.mp(Y, fs2), mono), a7);
  const F case2 = B.discharge(D);

  const F pl = B.axiom("PL", {{"?a", ba}, {"?b", dab}});
  const F a8 = B.axiom("A8", {{"?a", X}, {"?b", Y}, {"?c", D}});
  B.mp(pl, B.mp(case2, B.mp(case1, a8)));
  return compact_proof(B.proof());
}

}  // namespace gkl::derivations

#endif  // GKL_DERIVATIONS_HPP
