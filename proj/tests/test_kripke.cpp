#include <gtest/gtest.h>

#include "gkl/io.hpp"
#include "gkl/kripke.hpp"
#include "gkl/schemes.hpp"
#include "gkl/search.hpp"
#include "support.hpp"

using namespace gkl;

namespace {

TruthValue tv(const char* s) { return TruthValue::parse(s); }

GKModel m0() { return io::load_model(std::string(GKL_FIXTURE_DIR) + "/m0.json"); }

GKModel one_world(const char* s, const char* p) {
  GKModel m({"w"}, {"p"});
  m.set_s(0, 0, tv(s));
  m.set_e(0, 0, tv(p));
  return m;
}

std::vector<Formula> random_instances(fuzz::Rng& rng, const Scheme& s, int depth) {
  Substitution sigma;
  for (const auto& mv : s.metavariables) sigma.emplace(mv, fuzz::random_formula(rng, {"p", "q"}, depth));
  return {instantiate(s, sigma)};
}

}  // namespace

TEST(Eval, ExampleModel) {
  const auto m = m0();
  EXPECT_EQ(eval(m, "u", parse("[]([]p|q)")), tv("1/2"));
  EXPECT_EQ(eval(m, "u", parse("[]p|[]q")), tv("1/3"));
  const auto r = valid_in_model(m, parse("[]([]p|q) -> []p | []q"));
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(*r.witness, m.world_index("u"));
  EXPECT_EQ(r.witness_value, tv("1/3"));
}

TEST(Eval, SpecExamples) {
  fuzz::Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    auto m = fuzz::random_model(rng, 3, {"p"}, 5);
    for (std::size_t x = 0; x < 3; ++x) EXPECT_TRUE(eval(m, x, parse("<>0")).is_zero());
    EXPECT_TRUE(valid_in_model(m, parse("1")).valid);
    EXPECT_TRUE(valid_in_model(m, parse("[](p -> p & p) -> []p -> [](p & p)")).valid);
  }
  const auto m = one_world("1", "2/7");
  EXPECT_EQ(eval(m, 0, parse("[]p")), tv("2/7"));
  EXPECT_EQ(eval(m, 0, parse("<>p")), tv("2/7"));
}

TEST(Eval, Errors) {
  const auto m = m0();
  EXPECT_THROW(eval(m, "x", parse("p")), SchemaError);
  EXPECT_THROW(eval(m, 0, parse("r")), UnknownAtomError);
  EXPECT_THROW(eval(m, 5, parse("p")), SchemaError);
}

TEST(Eval, AgreesWithReferenceEvaluator) {
  fuzz::Rng rng(2);
  for (int i = 0; i < 400; ++i) {
    auto m = fuzz::random_model(rng, 1 + i % 4, {"p", "q"}, 7);
    fuzz::ReferenceEvaluator ref(m);
    Formula f = fuzz::random_formula(rng, {"p", "q"}, 4);
    const auto values = eval_all(m, f);
    for (std::size_t x = 0; x < m.world_count(); ++x) ASSERT_EQ(values[x].rational(), ref(x, f)) << render(f);
  }
}

TEST(FrameProperties, SpecExamples) {
  const auto r0 = frame_properties(m0());
  EXPECT_TRUE(r0.reflexive() && r0.transitive() && r0.symmetric());

  GKModel a({"u", "v"}, {});
  a.set_s(0, 0, TruthValue::one());
  a.set_s(1, 1, TruthValue::one());
  a.set_s(0, 1, TruthValue::one());
  const auto ra = frame_properties(a);
  ASSERT_FALSE(ra.symmetric());
  EXPECT_EQ(*ra.symmetric_violation, (std::array<std::size_t, 2>{0, 1}));
  EXPECT_TRUE(ra.reflexive());

  GKModel b({"u", "v", "w"}, {});
  for (int x = 0; x < 3; ++x) b.set_s(x, x, TruthValue::one());
  b.set_s(0, 1, TruthValue::one());
  b.set_s(1, 2, TruthValue::one());
  const auto rb = frame_properties(b);
  ASSERT_FALSE(rb.transitive());
  EXPECT_EQ(*rb.transitive_violation, (std::array<std::size_t, 3>{0, 1, 2}));

  GKModel c({"u"}, {});
  c.set_s(0, 0, tv("1/2"));
  EXPECT_EQ(frame_properties(c).reflexive_violation, std::optional<std::size_t>(0));
}

TEST(Soundness, AxiomsAndTheoremsAreValid) {
  fuzz::Rng rng(3);
  std::vector<Scheme> all = schemes::godel_dummett();
  for (const auto& v : {schemes::modal(), schemes::derived()}) all.insert(all.end(), v.begin(), v.end());
  for (int i = 0; i < 300; ++i) {
    auto m = fuzz::random_model(rng, 1 + i % 4, {"p", "q"}, 7);
    for (const auto& s : all) {
      for (const auto& inst : random_instances(rng, s, 2)) {
        const auto r = valid_in_model(m, inst);
        ASSERT_TRUE(r.valid) << s.name << ": " << render(inst);
      }
    }
  }
}

TEST(Soundness, ClasswiseAxioms) {
  fuzz::Rng rng(4);
  const std::pair<FrameClass, std::vector<Scheme>> cases[] = {
      {{true, false, false, false}, schemes::reflexivity()},
      {{false, true, false, false}, schemes::transitivity()},
      {{false, false, true, false}, schemes::symmetry()},
  };
  for (const auto& [cls, pair] : cases) {
    for (int i = 0; i < 150; ++i) {
      auto m = fuzz::random_model(rng, 1 + i % 4, {"p", "q"}, 7);
      project_to_class(m, cls);
      ASSERT_TRUE(in_class(m, cls));
      const auto f = subformula_closure({fuzz::random_formula(rng, {"p", "q"}, 2)});
      for (const auto& s : pair) EXPECT_TRUE(check_scheme(m, s, f).empty()) << s.name;
    }
  }
}

TEST(Soundness, DoubleNegationBoxHoldsInFiniteModels) {
  fuzz::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    auto m = fuzz::random_model(rng, 1 + i % 4, {"p"}, 7);
    EXPECT_TRUE(valid_in_model(m, parse("[]~~p -> ~~[]p")).valid);
  }
}

TEST(CheckScheme, SpecExamples) {
  fuzz::Rng rng(6);
  const auto tbox = schemes::reflexivity()[0];
  for (int i = 0; i < 50; ++i) {
    auto m = fuzz::random_model(rng, 3, {"p", "q"}, 5);
    project_to_class(m, {true, false, false, false});
    EXPECT_TRUE(check_scheme(m, tbox, subformula_closure({parse("[]p -> <>q")})).empty());
  }
  // Two worlds, x sees only y, with e(y,p) > e(x,p): []p exceeds p at x.
  GKModel m({"x", "y"}, {"p"});
  m.set_s(0, 1, TruthValue::one());
  m.set_s(1, 1, TruthValue::one());
  m.set_e(0, 0, tv("1/3"));
  m.set_e(1, 0, TruthValue::one());
  const auto bad = check_scheme(m, tbox, subformula_closure({parse("p")}));
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], parse("[]p -> p"));
  const auto m1 = schemes::symmetry()[0];
  EXPECT_TRUE(check_scheme(m0(), m1, subformula_closure({parse("p"), parse("q")})).empty());
}

TEST(CheckScheme, InstancesAreOrderedAndCapped) {
  const auto f = subformula_closure({parse("p & q")});
  const auto a8 = schemes::godel_dummett()[7];
  const auto inst = scheme_instances(a8, f, 400);
  EXPECT_EQ(inst.size(), 64u);  // |F| = 4, three metavariables
  EXPECT_EQ(inst.front(), parse("(0 -> 0) -> (0 -> 0) -> 0 | 0 -> 0"));
  EXPECT_EQ(scheme_instances(a8, f, 10).size(), 10u);
}

TEST(Optimize, SpecExamples) {
  GKModel total({"a", "b"}, {"p"});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) total.set_s(x, y, TruthValue::one());
  EXPECT_EQ(optimize_fragment(total, Fragment()), total);

  const auto m = m0();
  const auto f = subformula_closure({parse("[]([]p|q)"), parse("[]p"), parse("[]q")});
  const auto opt = optimize_fragment(m, f);
  for (const auto& phi : f) EXPECT_EQ(eval_all(opt, phi), eval_all(m, phi)) << render(phi);
  EXPECT_THROW(optimize_fragment(m, subformula_closure({parse("[]r")})), UnknownAtomError);
}

TEST(Optimize, PreservesFragmentAndDominates) {
  fuzz::Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    auto m = fuzz::random_model(rng, 1 + i % 4, {"p", "q"}, 7);
    const auto f = subformula_closure({fuzz::random_formula(rng, {"p", "q"}, 3), fuzz::random_formula(rng, {"p", "q"}, 3)});
    const auto opt = optimize_fragment(m, f);
    for (std::size_t x = 0; x < m.world_count(); ++x)
      for (std::size_t y = 0; y < m.world_count(); ++y) ASSERT_LE(m.s(x, y), opt.s(x, y));
    for (const auto& phi : f) ASSERT_EQ(eval_all(opt, phi), eval_all(m, phi)) << render(phi);
    ASSERT_EQ(optimize_fragment(opt, f), opt);
  }
}

TEST(Optimize, ReflexivityAxiomsForceReflexiveOptimum) {
  fuzz::Rng rng(9);
  int hits = 0;
  for (int i = 0; i < 600; ++i) {
    auto m = fuzz::random_model(rng, 1 + i % 3, {"p", "q"}, 5);
    if (i % 2) project_to_class(m, {true, false, false, false});
    const auto f = subformula_closure({fuzz::random_formula(rng, {"p", "q"}, 2)});
    bool t_valid = true;
    for (const auto& s : schemes::reflexivity()) t_valid = t_valid && check_scheme(m, s, f).empty();
    if (!t_valid) continue;
    ++hits;
    const auto opt = optimize_fragment(m, f);
    for (std::size_t x = 0; x < m.world_count(); ++x) ASSERT_TRUE(opt.s(x, x).is_one());
  }
  EXPECT_GT(hits, 200);
}

TEST(Io, ModelRoundTripAndErrors) {
  const auto m = m0();
  EXPECT_EQ(m.world_count(), 2u);
  EXPECT_EQ(io::model_from_json(io::model_to_json(m)), m);
  auto bad = io::model_to_json(m);
  bad["S"]["u,v"] = "3/2";
  try {
    io::model_from_json(bad);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "model.S[\"u,v\"]");
  }
  auto no_diag = io::model_to_json(m);
  no_diag["S"].erase("v,v");
  EXPECT_THROW(io::model_from_json(no_diag), SchemaError);
  auto bad_var = io::model_to_json(m);
  bad_var["e"]["u"]["r"] = "0";
  EXPECT_THROW(io::model_from_json(bad_var), SchemaError);
  auto sparse = io::model_to_json(m);
  sparse["S"].erase("u,v");
  sparse["e"]["v"].erase("q");
  const auto loaded = io::model_from_json(sparse);
  EXPECT_TRUE(loaded.s(0, 1).is_zero());
  EXPECT_TRUE(loaded.e(1, 1).is_zero());
}
