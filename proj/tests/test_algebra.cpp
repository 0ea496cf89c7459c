#include <gtest/gtest.h>

#include "gkl/algebra.hpp"
#include "gkl/io.hpp"
#include "gkl/search.hpp"
#include "support.hpp"

using namespace gkl;

namespace {

TruthValue tv(const char* s) { return TruthValue::parse(s); }

io::LoadedAlgebra a3() { return io::load_algebra(std::string(GKL_FIXTURE_DIR) + "/a3.json"); }

std::vector<TruthValue> even_chain(int n) {
  std::vector<TruthValue> c;
  for (int i = 0; i < n; ++i) c.push_back(fuzz::chain_value(i, n));
  return c;
}

GKModel random_frame(fuzz::Rng& rng, int worlds, int chain) {
  return fuzz::random_model(rng, worlds, {"p", "q"}, chain);
}

}  // namespace

TEST(Algebra, CarrierOperations) {
  BimodalAlgebra A(even_chain(3), 2);
  EXPECT_EQ(A.size(), 9u);
  const auto a = A.parse_element("(1/2,1)"), b = A.parse_element("(1,0)");
  EXPECT_EQ(A.str(A.meet(a, b)), "(1/2,0)");
  EXPECT_EQ(A.str(A.join(a, b)), "(1,1)");
  EXPECT_EQ(A.str(A.residuum(a, b)), "(1,0)");
  EXPECT_FALSE(A.leq(a, b));
  EXPECT_TRUE(A.leq(A.meet(a, b), a));
  EXPECT_THROW(BimodalAlgebra({tv("1/2"), tv("1")}), ValueError);
  EXPECT_THROW(BimodalAlgebra({tv("0"), tv("1"), tv("1/2")}), ValueError);
  EXPECT_THROW(A.parse_element("(1/3,1)"), ValueError);
}

TEST(Algebra, A3SpecExamples) {
  const auto [A, aliases] = a3();
  const auto a = aliases.at("a");
  EXPECT_TRUE(check_identities(A).all_hold());
  EXPECT_EQ(check_identities(A).results.size(), 6u);
  EXPECT_EQ(eval_algebra(A, {{"p", a}}, parse("[]~~p -> ~~[]p")), A.bottom());
  EXPECT_EQ(eval_algebra(A, {{"p", a}}, parse("~~p")), A.top());
  EXPECT_EQ(eval_algebra(A, {}, parse("0 -> 0")), A.top());
  // Symmetry pair: IKa = I1 = 1 ≥ a and KIa = K0 = 0 ≤ a.
  IdentityGroups symm;
  symm.symmetry = true;
  EXPECT_TRUE(check_identities(A, symm).all_hold());
  EXPECT_THROW(eval_algebra(A, {}, parse("p")), UnknownAtomError);
}

TEST(Algebra, IdentityOperatorsSatisfyEverything) {
  for (int n : {2, 3, 5}) {
    BimodalAlgebra A(even_chain(n));
    EXPECT_TRUE(check_identities(A, IdentityGroups::all()).all_hold());
  }
}

TEST(Algebra, CounterexamplesAreFirstAndJobsAgree) {
  fuzz::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    BimodalAlgebra A(even_chain(4));
    for (BimodalAlgebra::Element e = 0; e < A.size(); ++e) {
      A.set_I(e, static_cast<BimodalAlgebra::Element>(rng() % 4));
      A.set_K(e, static_cast<BimodalAlgebra::Element>(rng() % 4));
    }
    const auto r = check_identities(A, IdentityGroups::all());
    const auto r4 = check_identities(A, IdentityGroups::all(), 4);
    ASSERT_EQ(r.results.size(), r4.results.size());
    for (std::size_t k = 0; k < r.results.size(); ++k) {
      const auto& res = r.results[k];
      EXPECT_EQ(res.holds, r4.results[k].holds);
      EXPECT_EQ(res.counterexample, r4.results[k].counterexample);
      EXPECT_EQ(res.holds, !res.counterexample.has_value());
      if (!res.counterexample) continue;
      // Nothing lexicographically smaller fails.
      const auto [a0, b0] = *res.counterexample;
      const bool bin = res.identity == Identity::IMeet || res.identity == Identity::KJoin ||
                       res.identity == Identity::KImpI || res.identity == Identity::KImpK;
      EXPECT_FALSE(detail::identity_holds(A, res.identity, a0, b0));
      for (BimodalAlgebra::Element a = 0; a <= a0; ++a) {
        for (BimodalAlgebra::Element b = 0; b < (a == a0 ? b0 : A.size()); ++b) {
          if (bin) {
            EXPECT_TRUE(detail::identity_holds(A, res.identity, a, b));
          }
        }
        if (!bin && a < a0) {
          EXPECT_TRUE(detail::identity_holds(A, res.identity, a, a));
        }
      }
    }
  }
}

TEST(ComplexAlgebra, SpecExamples) {
  GKModel one({"w"}, {});
  one.set_s(0, 0, TruthValue::one());
  const auto A1 = complex_algebra(one, even_chain(4));
  for (BimodalAlgebra::Element e = 0; e < A1.size(); ++e) {
    EXPECT_EQ(A1.I(e), e);
    EXPECT_EQ(A1.K(e), e);
  }

  const auto m0 = io::load_model(std::string(GKL_FIXTURE_DIR) + "/m0.json");
  const std::vector<TruthValue> chain{tv("0"), tv("1/3"), tv("1/2"), tv("1")};
  const auto A = complex_algebra(m0, chain);
  EXPECT_EQ(A.size(), 16u);
  EXPECT_TRUE(check_identities(A).all_hold());
  EXPECT_TRUE(check_identities(A, IdentityGroups::for_frame(true, true, true)).all_hold());
  EXPECT_THROW(complex_algebra(m0, even_chain(3)), ValueError);

  // M₀ at u: □(□p∨q) = 1/2 both ways.
  EXPECT_TRUE(adjunction_check(m0, parse("[]([]p|q)"), chain));
  const auto v = model_valuation(A, m0);
  EXPECT_EQ(A.coordinate(eval_algebra(A, v, parse("[]([]p|q)")), 0), tv("1/2"));
  EXPECT_TRUE(adjunction_check(m0, parse("p")));
}

TEST(ComplexAlgebra, RandomFramesSatisfyTheVariety) {
  fuzz::Rng rng(4);
  for (int i = 0; i < 120; ++i) {
    const int worlds = 1 + i % 3;
    auto m = random_frame(rng, worlds, 4);
    const FrameClass cls{bool(i & 1), bool(i & 2), bool(i & 4), false};
    project_to_class(m, cls);
    const auto props = frame_properties(m);
    const auto A = complex_algebra(m, even_chain(4));
    const auto groups = IdentityGroups::for_frame(props.reflexive(), props.transitive(), props.symmetric());
    const auto r = check_identities(A, groups);
    for (const auto& res : r.results) ASSERT_TRUE(res.holds) << to_string(res.identity);
  }
}

TEST(ComplexAlgebra, TableTwoFailsWithoutTheFrameProperty) {
  // One world with S = 1/2: I(1/2) = 1, so Ia ≤ a first fails at a = 1/2.
  GKModel m({"w"}, {});
  m.set_s(0, 0, tv("1/2"));
  const auto A = complex_algebra(m, even_chain(3));
  IdentityGroups refl;
  refl.reflexivity = true;
  const auto r = check_identities(A, refl);
  ASSERT_FALSE(r.find(Identity::TBox)->holds);
  EXPECT_EQ(A.str(r.find(Identity::TBox)->counterexample->first), "1/2");

  // x sees only y, y sees nothing: transitive, and Ia ≤ IIa holds, but
  // without reflexivity the equality Ia = IIa fails.
  GKModel t({"x", "y"}, {});
  t.set_s(0, 1, TruthValue::one());
  ASSERT_TRUE(frame_properties(t).transitive());
  const auto B = complex_algebra(t, even_chain(2));
  EXPECT_TRUE(check_identities(B, IdentityGroups::for_frame(false, true, false)).all_hold());
  IdentityGroups eq;
  eq.transitivity_eq = true;
  EXPECT_FALSE(check_identities(B, eq).all_hold());
}

TEST(Adjunction, FuzzedModels) {
  fuzz::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    auto m = fuzz::random_model(rng, 1 + i % 3, {"p", "q"}, 5);
    const auto phi = fuzz::random_formula(rng, {"p", "q"}, 4);
    ASSERT_TRUE(adjunction_check(m, phi)) << render(phi);
  }
}

TEST(Algebra, A3IsRefutingWhereSmallModelsCannot) {
  const auto [A, aliases] = a3();
  const auto phi = parse("[]~~p -> ~~[]p");
  EXPECT_EQ(eval_algebra(A, {{"p", aliases.at("a")}}, phi), A.bottom());
  EXPECT_EQ(certify_no_small_countermodel(phi, {}, 2).status, SearchStatus::Exhausted);
}

TEST(AlgebraIo, RoundTripAndErrors) {
  const auto [A, aliases] = a3();
  EXPECT_EQ(io::algebra_from_json(io::algebra_to_json(A)).algebra, A);
  const auto m0 = io::load_model(std::string(GKL_FIXTURE_DIR) + "/m0.json");
  const auto C = complex_algebra(m0, model_chain(m0));
  EXPECT_EQ(io::algebra_from_json(io::algebra_to_json(C)).algebra, C);

  auto bad = io::algebra_to_json(A);
  bad["I"].erase("1/2");
  EXPECT_THROW(io::algebra_from_json(bad), SchemaError);
  auto out_of_chain = io::algebra_to_json(A);
  out_of_chain["K"]["0"] = "1/3";
  try {
    io::algebra_from_json(out_of_chain);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "algebra.K[\"0\"]");
  }
  auto unsorted = io::algebra_to_json(A);
  unsorted["chain"] = {"0", "1", "1/2"};
  EXPECT_THROW(io::algebra_from_json(unsorted), SchemaError);
}
