// gkl: command-line front end.
// Exit codes: 0 answered, 1 usage or input error, 2 budget exceeded or
// inconclusive.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gkl/algebra.hpp"
#include "gkl/canonical.hpp"
#include "gkl/io.hpp"
#include "gkl/proof.hpp"
#include "gkl/propositional.hpp"
#include "gkl/search.hpp"

namespace {

using namespace gkl;
using io::Json;

constexpr int kAnswered = 0;
constexpr int kInputError = 1;
constexpr int kInconclusive = 2;

struct Options {
  std::string model, algebra, proof, world, cls, mode = "exhaustive", fragment, epsilon, system;
  std::vector<std::string> formulas, evals, hyps;
  std::size_t max_worlds = 2;
  int chain = 0;
  std::uint64_t iterations = 20000, seed = 0, steps = SearchBudget{}.step_limit;
  unsigned jobs = 1;
  bool json = false;
};

void emit(const Options& o, const Json& j, const std::string& human) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human;
    if (!human.empty() && human.back() != '\n') std::cout << "\n";
  }
}

Formula the_formula(const Options& o) {
  if (o.formulas.size() != 1) throw CLI::ValidationError("expected exactly one formula");
  return parse(o.formulas.front());
}

std::vector<Formula> split_formulas(const std::string& text) {
  std::vector<Formula> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse(item));
  }
  return out;
}

GKModel need_model(const Options& o) {
  if (o.model.empty()) throw CLI::ValidationError("--model is required");
  return io::load_model(o.model);
}

SearchBudget budget(const Options& o) {
  SearchBudget b;
  b.max_worlds = o.max_worlds;
  if (o.mode == "stochastic") b.mode = SearchMode::Stochastic;
  else if (o.mode != "exhaustive") throw CLI::ValidationError("--mode must be exhaustive or stochastic");
  if (o.chain > 0) b.chain_size = o.chain;
  b.iterations = o.iterations;
  b.seed = o.seed;
  b.step_limit = o.steps;
  b.jobs = o.jobs;
  return b;
}

std::string valuation_text(const PropValuation& v) {
  std::string s;
  for (const auto& [atom, val] : v) s += (s.empty() ? "" : ", ") + render(atom) + "=" + val.str();
  return s;
}

int cmd_parse(const Options& o) {
  const auto f = the_formula(o);
  emit(o, {{"formula", render(f)}, {"size", f.size()}, {"modal_depth", f.modal_depth()}}, render(f));
  return kAnswered;
}

int cmd_eval(const Options& o) {
  const auto m = need_model(o);
  const auto f = the_formula(o);
  if (!o.world.empty()) {
    const auto v = eval(m, o.world, f);
    emit(o, {{"world", o.world}, {"value", v.str()}}, v.str());
    return kAnswered;
  }
  Json j = Json::object();
  std::string human;
  const auto all = eval_all(m, f);
  for (std::size_t x = 0; x < all.size(); ++x) {
    j[m.worlds()[x]] = all[x].str();
    human += m.worlds()[x] + ": " + all[x].str() + "\n";
  }
  emit(o, j, human);
  return kAnswered;
}

int cmd_valid(const Options& o) {
  const auto m = need_model(o);
  const auto r = valid_in_model(m, the_formula(o));
  if (r.valid) {
    emit(o, {{"valid", true}}, "valid");
  } else {
    const auto& w = m.worlds()[*r.witness];
    emit(o, {{"valid", false}, {"world", w}, {"value", r.witness_value.str()}},
         "invalid: " + w + " has value " + r.witness_value.str());
  }
  return kAnswered;
}

int cmd_gd(const Options& o) {
  std::vector<Formula> goals, theory;
  for (const auto& g : o.formulas) goals.push_back(parse(g));
  if (goals.empty()) throw CLI::ValidationError("gd needs --goal");
  for (const auto& h : o.hyps) theory.push_back(parse(h));
  GdSearchOptions opts;
  opts.step_limit = o.steps;
  std::optional<PropValuation> v;
  try {
    v = gd_counter_valuation(theory, goals, opts);
  } catch (const Error& e) {
    std::cerr << "gkl: " << e.what() << "\n";
    return kInconclusive;
  }
  if (!v) {
    emit(o, {{"entailed", true}}, "entailed (no counter-valuation)");
  } else {
    emit(o, {{"entailed", false}, {"valuation", io::valuation_to_json(*v)}}, "counter-valuation: " + valuation_text(*v));
  }
  return kAnswered;
}

Json found_json(const SearchResult& r) {
  return {{"status", std::string(to_string(r.status))},
          {"world", r.model->worlds()[r.world]},
          {"value", r.value.str()},
          {"steps", r.steps},
          {"model", io::model_to_json(*r.model)}};
}

int report_search(const Options& o, const SearchResult& r, const std::string& none) {
  if (r.status == SearchStatus::Found) {
    emit(o, found_json(r),
         "counter-model found: " + r.model->worlds()[r.world] + " has value " + r.value.str() + "\n" +
             io::model_to_json(*r.model).dump(2));
    return kAnswered;
  }
  const Json j{{"status", std::string(to_string(r.status))}, {"steps", r.steps}};
  if (r.status == SearchStatus::Exhausted) {
    emit(o, j, none);
    return kAnswered;
  }
  emit(o, j, std::string(to_string(r.status)) + " after " + std::to_string(r.steps) + " steps");
  return kInconclusive;
}

int cmd_search(const Options& o) {
  const auto r = find_countermodel(the_formula(o), FrameClass::parse(o.cls), budget(o));
  return report_search(o, r, "no counter-model with at most " + std::to_string(o.max_worlds) + " worlds");
}

int cmd_certify(const Options& o) {
  const auto r = certify_no_small_countermodel(the_formula(o), FrameClass::parse(o.cls), o.max_worlds, o.steps, o.jobs);
  return report_search(o, r, "certified: no counter-model with at most " + std::to_string(o.max_worlds) + " worlds");
}

int cmd_optimize(const Options& o) {
  const auto m = need_model(o);
  if (o.fragment.empty()) throw CLI::ValidationError("optimize needs --fragment");
  const auto out = optimize_fragment(m, Fragment::closure(split_formulas(o.fragment)));
  const auto j = io::model_to_json(out);
  emit(o, j, j.dump(2));
  return kAnswered;
}

int cmd_claim(const Options& o, bool box) {
  const auto m = need_model(o);
  const auto phi = the_formula(o);
  auto roots = split_formulas(o.fragment);
  roots.push_back(box ? Formula::box(phi) : Formula::dia(phi));
  const auto F = Fragment::closure(roots);
  const auto x = o.world.empty() ? std::size_t{0} : m.world_index(o.world);
  const auto v = world_from_model(m, x, F);
  WitnessOptions wo;
  const auto u = box ? box_oracle(v, F, phi, wo) : diamond_oracle(v, F, phi, wo);
  if (!u) {
    std::cerr << "gkl: the GD oracle found no valuation u\n";
    return kInconclusive;
  }
  TruthValue eps = o.epsilon.empty() ? TruthValue::parse("1/10") : TruthValue::parse(o.epsilon);
  if (!box && o.epsilon.empty()) {
    eps = TruthValue(diamond_epsilon_bound(v, *u, F, phi).rational() / 2);
  }
  const auto t = box ? rescale_box_witness(v, *u, F, phi, eps) : rescale_diamond_witness(v, *u, F, phi, eps);
  const bool ok = box ? t.result.rational() < t.alpha.rational() + t.epsilon.rational()
                      : t.result.rational() >= t.alpha.rational() - t.epsilon.rational();
  auto j = io::trace_to_json(t);
  j["holds"] = ok;
  std::string human = std::string(box ? "box witness" : "diamond witness") + " at " + m.worlds()[x] + ": alpha=" + t.alpha.str() +
                      " epsilon=" + t.epsilon.str() + " S=" + t.s.str() + " w(phi)=" + t.w_phi.str() +
                      (box ? " residuum=" : " meet=") + t.result.str() + (ok ? " holds" : " FAILS");
  emit(o, j, human);
  return kAnswered;
}

int cmd_check_proof(const Options& o) {
  if (o.proof.empty()) throw CLI::ValidationError("--proof is required");
  auto p = io::load_proof(o.proof);
  if (!o.system.empty()) p.system = parse_system(o.system);
  const auto v = check_proof(p);
  std::string human = v.accepted ? "accepted: " + render(v.conclusion()) : "rejected: " + v.message;
  emit(o, io::verdict_to_json(v), human);
  return kAnswered;
}

int cmd_check_algebra(const Options& o) {
  if (o.algebra.empty()) throw CLI::ValidationError("--algebra is required");
  const auto [A, aliases] = io::load_algebra(o.algebra);
  if (!o.formulas.empty()) {
    AlgebraValuation val;
    for (const auto& e : o.evals) {
      const auto eq = e.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--eval expects var=element");
      val[e.substr(0, eq)] = A.parse_element(e.substr(eq + 1), aliases);
    }
    const auto r = A.str(eval_algebra(A, val, the_formula(o)));
    emit(o, {{"value", r}}, r);
    return kAnswered;
  }
  const auto cls = FrameClass::parse(o.cls);
  const auto report = check_identities(A, IdentityGroups::for_frame(cls.reflexive, cls.transitive, cls.symmetric), o.jobs);
  Json j{{"all_hold", report.all_hold()}, {"identities", Json::array()}};
  std::string human;
  for (const auto& r : report.results) {
    Json e{{"identity", to_string(r.identity)}, {"holds", r.holds}};
    human += std::string(to_string(r.identity)) + ": ";
    if (r.holds) {
      human += "holds\n";
    } else {
      e["a"] = A.str(r.counterexample->first);
      e["b"] = A.str(r.counterexample->second);
      human += "fails at a=" + A.str(r.counterexample->first) + ", b=" + A.str(r.counterexample->second) + "\n";
    }
    j["identities"].push_back(e);
  }
  emit(o, j, human);
  return kAnswered;
}

int cmd_complex_algebra(const Options& o) {
  const auto m = need_model(o);
  auto chain = model_chain(m);
  if (o.chain > 0) {
    chain.clear();
    for (int i = 0; i < o.chain; ++i) chain.emplace_back(TruthValue::Integer(i), TruthValue::Integer(o.chain - 1));
  }
  const auto j = io::algebra_to_json(complex_algebra(m, chain));
  emit(o, j, j.dump(2));
  return kAnswered;
}

int cmd_check_frame(const Options& o) {
  const auto m = need_model(o);
  const auto r = frame_properties(m);
  const auto& w = m.worlds();
  Json j{{"reflexive", r.reflexive()}, {"transitive", r.transitive()}, {"symmetric", r.symmetric()}};
  std::string human;
  human += std::string("reflexive: ") + (r.reflexive() ? "yes" : "no (S" + w[*r.reflexive_violation] + w[*r.reflexive_violation] + " < 1)") + "\n";
  if (r.transitive()) {
    human += "transitive: yes\n";
  } else {
    const auto [x, y, z] = *r.transitive_violation;
    human += "transitive: no (" + w[x] + ", " + w[y] + ", " + w[z] + ")\n";
    j["transitive_violation"] = {w[x], w[y], w[z]};
  }
  if (r.symmetric()) {
    human += "symmetric: yes\n";
  } else {
    const auto [x, y] = *r.symmetric_violation;
    human += "symmetric: no (" + w[x] + ", " + w[y] + ")\n";
    j["symmetric_violation"] = {w[x], w[y]};
  }
  if (!r.reflexive()) j["reflexive_violation"] = w[*r.reflexive_violation];
  emit(o, j, human);
  return kAnswered;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi-modal Gödel logic toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool formula = true) {
    c->add_flag("--json", o.json, "machine-readable output");
    if (formula) c->add_option("formula", o.formulas, "formula");
  };
  auto search_flags = [&](CLI::App* c) {
    c->add_option("--class", o.cls, "refl,trans,symm,crisp");
    c->add_option("--max-worlds", o.max_worlds);
    c->add_option("--chain", o.chain, "restrict values to an N-element chain");
    c->add_option("--steps", o.steps, "step budget");
    c->add_option("--jobs", o.jobs);
  };

  auto* parse_cmd = app.add_subcommand("parse", "parse and print a formula");
  common(parse_cmd);
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula in a model");
  common(eval_cmd);
  eval_cmd->add_option("--model", o.model)->required();
  eval_cmd->add_option("--world", o.world);
  auto* valid_cmd = app.add_subcommand("valid", "validity in a model");
  common(valid_cmd);
  valid_cmd->add_option("--model", o.model)->required();
  auto* gd_cmd = app.add_subcommand("gd", "Gödel-Dummett entailment with a counter-valuation");
  common(gd_cmd, false);
  gd_cmd->add_option("--goal,formula", o.formulas, "goal formula");
  gd_cmd->add_option("--hyp", o.hyps, "theory formula")->allow_extra_args(false);
  gd_cmd->add_option("--steps", o.steps);
  auto* search_cmd = app.add_subcommand("search", "bounded counter-model search");
  common(search_cmd);
  search_flags(search_cmd);
  search_cmd->add_option("--mode", o.mode, "exhaustive|stochastic");
  search_cmd->add_option("--iterations", o.iterations);
  search_cmd->add_option("--seed", o.seed);
  auto* certify_cmd = app.add_subcommand("certify", "certify that no small counter-model exists");
  common(certify_cmd);
  search_flags(certify_cmd);
  auto* optimize_cmd = app.add_subcommand("optimize", "fragment-optimal accessibility");
  common(optimize_cmd, false);
  optimize_cmd->add_option("--model", o.model)->required();
  optimize_cmd->add_option("--fragment", o.fragment)->required();
  CLI::App* claims[2];
  for (int i = 0; i < 2; ++i) {
    claims[i] = app.add_subcommand(i == 0 ? "canonical-claim1" : "canonical-claim2",
                                   i == 0 ? "box witness rescaling" : "diamond witness rescaling");
    common(claims[i]);
    claims[i]->add_option("--model", o.model)->required();
    claims[i]->add_option("--world", o.world);
    claims[i]->add_option("--fragment", o.fragment, "extra formulas, ';'-separated");
    claims[i]->add_option("--epsilon", o.epsilon);
  }
  auto* proof_cmd = app.add_subcommand("check-proof", "check a Hilbert proof");
  common(proof_cmd, false);
  proof_cmd->add_option("--proof", o.proof)->required();
  proof_cmd->add_option("--system", o.system, "override the proof's system");
  auto* alg_cmd = app.add_subcommand("check-algebra", "identities of a finite algebra, or evaluate a formula");
  common(alg_cmd);
  alg_cmd->add_option("--algebra", o.algebra)->required();
  alg_cmd->add_option("--eval", o.evals, "var=element")->allow_extra_args(false);
  alg_cmd->add_option("--class", o.cls, "also check the identities of refl,trans,symm");
  alg_cmd->add_option("--jobs", o.jobs);
  auto* cx_cmd = app.add_subcommand("complex-algebra", "complex algebra of a model's frame");
  common(cx_cmd, false);
  cx_cmd->add_option("--model", o.model)->required();
  cx_cmd->add_option("--chain", o.chain, "evenly spaced N-element chain instead of the model's values");
  auto* frame_cmd = app.add_subcommand("check-frame", "frame properties of a model");
  common(frame_cmd, false);
  frame_cmd->add_option("--model", o.model)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(o);
    if (eval_cmd->parsed()) return cmd_eval(o);
    if (valid_cmd->parsed()) return cmd_valid(o);
    if (gd_cmd->parsed()) return cmd_gd(o);
    if (search_cmd->parsed()) return cmd_search(o);
    if (certify_cmd->parsed()) return cmd_certify(o);
    if (optimize_cmd->parsed()) return cmd_optimize(o);
    if (claims[0]->parsed()) return cmd_claim(o, true);
    if (claims[1]->parsed()) return cmd_claim(o, false);
    if (proof_cmd->parsed()) return cmd_check_proof(o);
    if (alg_cmd->parsed()) return cmd_check_algebra(o);
    if (cx_cmd->parsed()) return cmd_complex_algebra(o);
    if (frame_cmd->parsed()) return cmd_check_frame(o);
  } catch (const CLI::Error& e) {
    std::cerr << "gkl: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "gkl: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
