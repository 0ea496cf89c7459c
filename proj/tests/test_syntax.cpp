#include <gtest/gtest.h>

#include "gkl/formula.hpp"
#include "support.hpp"

using namespace gkl;

namespace {

Formula p = Formula::var("p");
Formula q = Formula::var("q");
Formula r = Formula::var("r");

}  // namespace

TEST(Parse, SpecExamples) {
  EXPECT_EQ(parse("[]p -> p"), Formula::imp(Formula::box(p), p));
  EXPECT_EQ(parse("~<>0"), Formula::imp(Formula::dia(Formula::bot()), Formula::bot()));
  EXPECT_EQ(parse("p -> q -> r"), Formula::imp(p, Formula::imp(q, r)));
}

TEST(Parse, PrecedenceAndDerived) {
  EXPECT_EQ(parse("p & q | r"), Formula::disj(Formula::conj(p, q), r));
  EXPECT_EQ(parse("p | q -> r"), Formula::imp(Formula::disj(p, q), r));
  EXPECT_EQ(parse("p -> q <-> r"), Formula::iff(Formula::imp(p, q), r));
  EXPECT_EQ(parse("~[]p & q"), Formula::conj(Formula::neg(Formula::box(p)), q));
  EXPECT_EQ(parse("1"), Formula::top());
  EXPECT_EQ(parse("a_1 & B2"), Formula::conj(Formula::var("a_1"), Formula::var("B2")));
  EXPECT_EQ(parse("p & q & r"), Formula::conj(Formula::conj(p, q), r));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse("p & (q | ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 9u);
  }
  EXPECT_THROW(parse("p q"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("p -> "), ParseError);
  EXPECT_THROW(parse("?a"), ParseError);
  EXPECT_THROW(parse("2"), ParseError);
  EXPECT_THROW(parse("01"), ParseError);
  EXPECT_THROW(parse("[p]"), ParseError);
}

TEST(Render, SpecExamples) {
  EXPECT_EQ(render(Formula::box(p)), "[]p");
  EXPECT_EQ(parse(render(Formula::imp(Formula::dia(Formula::bot()), Formula::bot()))),
            Formula::imp(Formula::dia(Formula::bot()), Formula::bot()));
  EXPECT_EQ(render(Formula::imp(Formula::imp(p, q), q)), "(p -> q) -> q");
  EXPECT_EQ(render(parse("p -> q -> r")), "p -> q -> r");
  EXPECT_EQ(render(parse("~(p & q)")), "~(p & q)");
  EXPECT_EQ(render(parse("p | (q | r)")), "p | (q | r)");
}

TEST(Render, RoundTripProperty) {
  fuzz::Rng rng(7);
  for (int i = 0; i < 3000; ++i) {
    Formula f = fuzz::random_formula(rng, {"p", "q", "r1"}, 5);
    ASSERT_EQ(parse(render(f)), f) << render(f);
  }
}

TEST(Closure, SpecExamples) {
  auto c1 = subformula_closure({parse("[]p")});
  EXPECT_EQ(FormulaSet(c1.begin(), c1.end()), (FormulaSet{parse("[]p"), p, Formula::bot()}));
  auto c2 = subformula_closure({});
  EXPECT_EQ(FormulaSet(c2.begin(), c2.end()), FormulaSet{Formula::bot()});
  auto c3 = subformula_closure({parse("<>(p|q)")});
  EXPECT_EQ(FormulaSet(c3.begin(), c3.end()),
            (FormulaSet{parse("<>(p|q)"), parse("p|q"), p, q, Formula::bot()}));
}

TEST(Closure, IdempotentAndValidated) {
  fuzz::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    auto f = subformula_closure({fuzz::random_formula(rng, {"p", "q"}, 4), fuzz::random_formula(rng, {"p"}, 3)});
    EXPECT_EQ(subformula_closure(f.formulas()), f);
    EXPECT_EQ(Fragment::from_closed(FormulaSet(f.begin(), f.end())), f);
  }
  EXPECT_THROW(Fragment::from_closed({parse("[]p"), Formula::bot()}), SchemaError);
  EXPECT_THROW(Fragment::from_closed({p}), SchemaError);
}

TEST(Closure, OrderListsSubformulasFirst) {
  auto f = subformula_closure({parse("[](p -> <>q) & ~r")});
  for (const auto& phi : f) {
    if (phi.is_binary()) {
      EXPECT_LT(f.index_of(phi.lhs()), f.index_of(phi));
      EXPECT_LT(f.index_of(phi.rhs()), f.index_of(phi));
    }
  }
}

TEST(Scheme, SpecExamples) {
  auto kbox = Scheme::make("Kbox", "[](?a -> ?b) -> []?a -> []?b");
  auto s1 = match_scheme(parse("[](p->q)->([]p->[]q)"), kbox);
  ASSERT_TRUE(s1);
  EXPECT_EQ(s1->at("?a"), p);
  EXPECT_EQ(s1->at("?b"), q);
  EXPECT_FALSE(match_scheme(parse("p -> q"), kbox));
  auto s3 = match_scheme(parse("[](p->p)->([]p->[]p)"), kbox);
  ASSERT_TRUE(s3);
  EXPECT_EQ(s3->at("?a"), p);
  EXPECT_EQ(s3->at("?b"), p);
  EXPECT_FALSE(match_scheme(parse("[](p->q)->([]q->[]q)"), kbox));
}

TEST(Scheme, MatchIsSound) {
  auto fs2 = Scheme::make("FS2", "(<>?a -> []?b) -> [](?a -> ?b)");
  fuzz::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Substitution sigma{{"?a", fuzz::random_formula(rng, {"p", "q"}, 3)},
                       {"?b", fuzz::random_formula(rng, {"p", "q"}, 3)}};
    Formula inst = instantiate(fs2, sigma);
    auto m = match_scheme(inst, fs2);
    ASSERT_TRUE(m);
    EXPECT_EQ(*m, sigma);
    EXPECT_EQ(instantiate(fs2, *m), inst);
  }
}

TEST(Scheme, RejectsObjectVariables) {
  EXPECT_THROW(Scheme::make("bad", "?a -> p"), SchemaError);
  EXPECT_THROW(instantiate(Scheme::make("A1", "?a -> ?b -> ?a"), {{"?a", p}}), SchemaError);
}

TEST(Formula, Metrics) {
  EXPECT_EQ(parse("[]<>p -> []q").modal_depth(), 2u);
  EXPECT_EQ(parse("p & q").size(), 3u);
  EXPECT_EQ(prop_atoms(parse("[]p -> p & <>(q|r)")), (FormulaSet{p, parse("[]p"), parse("<>(q|r)")}));
}
