// JSON readers and writers for models, algebras, proofs and traces. Loaders
// validate everything and report the offending field path through SchemaError.

#ifndef GKL_IO_HPP
#define GKL_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"  // nlohmann::json, vendored

#include "gkl/algebra.hpp"
#include "gkl/canonical.hpp"
#include "gkl/error.hpp"
#include "gkl/formula.hpp"
#include "gkl/kripke.hpp"
#include "gkl/proof.hpp"
#include "gkl/truth_value.hpp"

namespace gkl::io {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path, std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing");
  return *it;
}

inline std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

/// Rationals are strings "p/q"; bare integers 0 and 1 are tolerated.
inline TruthValue value_at(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return TruthValue::parse(std::to_string(j.get<long long>()));
    return TruthValue::parse(string_at(j, path));
  } catch (const ValueError& e) {
    throw SchemaError(path, e.what());
  }
}

inline Formula formula_at(const Json& j, const std::string& path) {
  try {
    return parse(string_at(j, path));
  } catch (const ParseError& e) {
    throw SchemaError(path, e.what());
  }
}

inline std::vector<std::string> names_at(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline void check_identifier(const std::string& name, const std::string& path) {
  Formula f;
  try {
    f = parse(name);
  } catch (const ParseError&) {
    throw SchemaError(path, "'" + name + "' is not an identifier");
  }
  if (!f.is(Connective::Var)) throw SchemaError(path, "'" + name + "' is not an identifier");
}

}  // namespace detail

/// Model schema: {"worlds", "vars", "S": {"x,y": value}, "e": {x: {var: value}}}.
/// Omitted S and e entries are 0, except that S entries on the diagonal
/// must be given.
inline GKModel model_from_json(const Json& j, const std::string& root = "model") {
  using namespace detail;
  auto worlds = names_at(member(j, "worlds", root), root + ".worlds");
  std::vector<std::string> vars;
  if (j.is_object() && j.contains("vars")) vars = names_at(j["vars"], root + ".vars");
  for (std::size_t i = 0; i < vars.size(); ++i) check_identifier(vars[i], root + ".vars[" + std::to_string(i) + "]");
  for (const auto& w : worlds) {
    if (w.empty() || w.find(',') != std::string::npos) throw SchemaError(root + ".worlds", "bad world name '" + w + "'");
  }
  GKModel m(worlds, vars);
  const auto& s = member(j, "S", root);
  if (!s.is_object()) throw SchemaError(root + ".S", "expected an object");
  std::vector<bool> diagonal(worlds.size(), false);
  for (auto it = s.begin(); it != s.end(); ++it) {
    const std::string path = root + ".S[\"" + it.key() + "\"]";
    const auto comma = it.key().find(',');
    if (comma == std::string::npos) throw SchemaError(path, "key must be \"x,y\"");
    std::size_t x, y;
    try {
      x = m.world_index(it.key().substr(0, comma));
      y = m.world_index(it.key().substr(comma + 1));
    } catch (const SchemaError& e) {
      throw SchemaError(path, e.what());
    }
    m.set_s(x, y, value_at(it.value(), path));
    if (x == y) diagonal[x] = true;
  }
  for (std::size_t x = 0; x < worlds.size(); ++x) {
    if (!diagonal[x]) throw SchemaError(root + ".S", "diagonal entry \"" + worlds[x] + "," + worlds[x] + "\" missing");
  }
  if (j.contains("e")) {
    const auto& e = j["e"];
    if (!e.is_object()) throw SchemaError(root + ".e", "expected an object");
    for (auto it = e.begin(); it != e.end(); ++it) {
      const std::string path = root + ".e." + it.key();
      std::size_t x;
      try {
        x = m.world_index(it.key());
      } catch (const SchemaError& err) {
        throw SchemaError(path, err.what());
      }
      if (!it.value().is_object()) throw SchemaError(path, "expected an object");
      for (auto v = it.value().begin(); v != it.value().end(); ++v) {
        auto idx = m.var_index(v.key());
        if (!idx) throw SchemaError(path + "." + v.key(), "undeclared variable");
        m.set_e(x, *idx, value_at(v.value(), path + "." + v.key()));
      }
    }
  }
  return m;
}

inline Json model_to_json(const GKModel& m) {
  Json j;
  j["worlds"] = m.worlds();
  j["vars"] = m.vars();
  Json s = Json::object();
  for (std::size_t x = 0; x < m.world_count(); ++x) {
    for (std::size_t y = 0; y < m.world_count(); ++y) s[m.worlds()[x] + "," + m.worlds()[y]] = m.s(x, y).str();
  }
  j["S"] = s;
  Json e = Json::object();
  for (std::size_t x = 0; x < m.world_count(); ++x) {
    Json row = Json::object();
    for (std::size_t v = 0; v < m.var_count(); ++v) row[m.vars()[v]] = m.e(x, v).str();
    e[m.worlds()[x]] = row;
  }
  j["e"] = e;
  return j;
}

inline Json valuation_to_json(const PropValuation& v) {
  Json j = Json::object();
  for (const auto& [atom, value] : v) j[render(atom)] = value.str();
  return j;
}

inline Json trace_to_json(const RescaleTrace& t) {
  auto values = [](const std::vector<TruthValue>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(x.str());
    return a;
  };
  const bool box = t.kind == RescaleTrace::Kind::Box;
  Json j;
  j["claim"] = box ? "box" : "diamond";
  j["phi"] = render(t.phi);
  j["alpha"] = t.alpha.str();
  j["epsilon"] = t.epsilon.str();
  Json levels = Json::array();
  for (std::size_t i = 0; i < t.levels.size(); ++i) levels.push_back({{"level", t.levels[i].str()}, {"u", t.level_u[i].str()}});
  j[box ? "B" : "C"] = levels;
  j[box ? "b" : "c"] = values(t.seq);
  j["u_seq"] = values(t.seq_u);
  Json reps = Json::array();
  for (const auto& r : t.reps) reps.push_back(render(r));
  j["representatives"] = reps;
  j[box ? "p" : "q"] = values(t.bounds);
  Json g = Json::array();
  for (const auto& p : t.g.pieces) {
    g.push_back({{"from", (p.lo_closed ? "[" : "(") + p.lo.str() + ", " + p.hi.str() + (p.hi_closed ? "]" : ")")},
                 {"to", (p.lo_closed ? "[" : "(") + p.img_lo.str() + ", " + p.img_hi.str() + (p.hi_closed ? "]" : ")")}});
  }
  j["g"] = g;
  j["w"] = valuation_to_json(t.w.values);
  j["S"] = t.s.str();
  j["w_phi"] = t.w_phi.str();
  j[box ? "residuum" : "meet"] = t.result.str();
  return j;
}

inline GKModel load_model(const std::string& path) { return model_from_json(read_json_file(path), path); }

/// A loaded algebra plus the element aliases its file declared.
struct LoadedAlgebra {
  BimodalAlgebra algebra;
  std::map<std::string, BimodalAlgebra::Element> aliases;
};

/// Algebra schema: {"chain": [values], "dim": d (default 1),
/// "aliases": {name: element}, "I": {element: element}, "K": {...}}.
/// I and K must be total. Elements are chain values, "(x,y,...)" tuples
/// for d > 1, or aliases.
inline LoadedAlgebra algebra_from_json(const Json& j, const std::string& root = "algebra") {
  using namespace detail;
  const auto& cj = member(j, "chain", root);
  if (!cj.is_array()) throw SchemaError(root + ".chain", "expected an array");
  std::vector<TruthValue> chain;
  for (std::size_t i = 0; i < cj.size(); ++i) chain.push_back(value_at(cj[i], root + ".chain[" + std::to_string(i) + "]"));
  std::size_t dim = 1;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned()) throw SchemaError(root + ".dim", "expected a positive integer");
    dim = j["dim"].get<std::size_t>();
  }
  LoadedAlgebra out{[&] {
                      try {
                        return BimodalAlgebra(chain, dim);
                      } catch (const ValueError& e) {
                        throw SchemaError(root + ".chain", e.what());
                      }
                    }(),
                    {}};
  auto& A = out.algebra;
  auto element = [&](const std::string& text, const std::string& path) {
    try {
      return A.parse_element(text, out.aliases);
    } catch (const ValueError& e) {
      throw SchemaError(path, e.what());
    }
  };
  if (j.contains("aliases")) {
    const auto& al = j["aliases"];
    if (!al.is_object()) throw SchemaError(root + ".aliases", "expected an object");
    for (auto it = al.begin(); it != al.end(); ++it) {
      const std::string path = root + ".aliases." + it.key();
      out.aliases[it.key()] = element(string_at(it.value(), path), path);
    }
  }
  for (const char* op : {"I", "K"}) {
    const auto& table = member(j, op, root);
    if (!table.is_object()) throw SchemaError(root + "." + op, "expected an object");
    std::vector<bool> seen(A.size(), false);
    for (auto it = table.begin(); it != table.end(); ++it) {
      const std::string path = root + "." + op + "[\"" + it.key() + "\"]";
      const auto a = element(it.key(), path);
      const auto b = element(it.value().is_string() ? it.value().get<std::string>() : it.value().dump(), path);
      if (op[0] == 'I') A.set_I(a, b);
      else A.set_K(a, b);
      seen[a] = true;
    }
    for (BimodalAlgebra::Element e = 0; e < A.size(); ++e) {
      if (!seen[e]) throw SchemaError(root + "." + op, "no entry for " + A.str(e));
    }
  }
  return out;
}

inline Json algebra_to_json(const BimodalAlgebra& A) {
  Json j;
  Json chain = Json::array();
  for (const auto& c : A.chain()) chain.push_back(c.str());
  j["chain"] = chain;
  if (A.dim() != 1) j["dim"] = A.dim();
  Json i = Json::object(), k = Json::object();
  for (BimodalAlgebra::Element e = 0; e < A.size(); ++e) {
    i[A.str(e)] = A.str(A.I(e));
    k[A.str(e)] = A.str(A.K(e));
  }
  j["I"] = i;
  j["K"] = k;
  return j;
}

inline LoadedAlgebra load_algebra(const std::string& path) { return algebra_from_json(read_json_file(path), path); }

/// Proof schema: {"system", "hypotheses": [φ], "steps": [{"formula"?, "by": {"kind", ...}}]}.
/// Kinds: hyp {index}, axiom {scheme, subst?}, mp {from: [i, j]}, nr_box and
/// rn_dia {from: i}. References must point to earlier steps.
inline Proof proof_from_json(const Json& j, const std::string& root = "proof") {
  using namespace detail;
  Proof p;
  if (j.is_object() && j.contains("system")) {
    try {
      p.system = parse_system(string_at(j["system"], root + ".system"));
    } catch (const SchemaError& e) {
      throw SchemaError(root + ".system", e.what());
    }
  }
  if (j.is_object() && j.contains("hypotheses")) {
    const auto& hs = j["hypotheses"];
    if (!hs.is_array()) throw SchemaError(root + ".hypotheses", "expected an array");
    for (std::size_t i = 0; i < hs.size(); ++i) p.hypotheses.push_back(formula_at(hs[i], root + ".hypotheses[" + std::to_string(i) + "]"));
  }
  const auto& steps = member(j, "steps", root);
  if (!steps.is_array()) throw SchemaError(root + ".steps", "expected an array");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string at = root + ".steps[" + std::to_string(k) + "]";
    Step st;
    if (steps[k].is_object() && steps[k].contains("formula")) st.formula = formula_at(steps[k]["formula"], at + ".formula");
    const auto& by = member(steps[k], "by", at);
    const std::string kind = string_at(member(by, "kind", at + ".by"), at + ".by.kind");
    auto index = [&](const Json& v, const std::string& path, bool earlier) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) throw SchemaError(path, "expected a step index");
      const auto i = v.get<std::size_t>();
      if (earlier && i >= k) throw SchemaError(path, "reference to step " + std::to_string(i) + " is not earlier");
      return i;
    };
    if (kind == "hyp") {
      st.by = Justification::hyp(index(member(by, "index", at + ".by"), at + ".by.index", false));
      if (st.by.first >= p.hypotheses.size()) throw SchemaError(at + ".by.index", "no such hypothesis");
    } else if (kind == "axiom") {
      std::optional<Substitution> sigma;
      if (by.contains("subst")) {
        const auto& s = by["subst"];
        if (!s.is_object()) throw SchemaError(at + ".by.subst", "expected an object");
        Substitution m;
        for (auto it = s.begin(); it != s.end(); ++it) m[it.key()] = formula_at(it.value(), at + ".by.subst." + it.key());
        sigma = std::move(m);
      }
      st.by = Justification::axiom(string_at(member(by, "scheme", at + ".by"), at + ".by.scheme"), sigma);
    } else if (kind == "mp") {
      const auto& from = member(by, "from", at + ".by");
      if (!from.is_array() || from.size() != 2) throw SchemaError(at + ".by.from", "expected [i, j]");
      const auto i = index(from[0], at + ".by.from[0]", true);
      st.by = Justification::mp(i, index(from[1], at + ".by.from[1]", true));
    } else if (kind == "nr_box" || kind == "rn_dia") {
      const auto i = index(member(by, "from", at + ".by"), at + ".by.from", true);
      st.by = kind == "nr_box" ? Justification::nr_box(i) : Justification::rn_dia(i);
    } else {
      throw SchemaError(at + ".by.kind", "unknown kind '" + kind + "'");
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

inline Json proof_to_json(const Proof& p) {
  Json j;
  j["system"] = std::string(to_string(p.system));
  j["hypotheses"] = Json::array();
  for (const auto& h : p.hypotheses) j["hypotheses"].push_back(render(h));
  j["steps"] = Json::array();
  for (const auto& st : p.steps) {
    Json s;
    if (st.formula) s["formula"] = render(*st.formula);
    Json by;
    by["kind"] = to_string(st.by.kind);
    switch (st.by.kind) {
      case RuleKind::Hypothesis: by["index"] = st.by.first; break;
      case RuleKind::Axiom:
        by["scheme"] = st.by.scheme;
        if (st.by.subst) {
          by["subst"] = Json::object();
          for (const auto& [k, v] : *st.by.subst) by["subst"][k] = render(v);
        }
        break;
      case RuleKind::MP: by["from"] = {st.by.first, st.by.second}; break;
      case RuleKind::NRBox:
      case RuleKind::RNDia: by["from"] = st.by.first; break;
    }
    s["by"] = by;
    j["steps"].push_back(s);
  }
  return j;
}

inline Proof load_proof(const std::string& path) { return proof_from_json(read_json_file(path), path); }

inline Json verdict_to_json(const Verdict& v) {
  Json j;
  j["accepted"] = v.accepted;
  if (v.accepted) {
    j["conclusion"] = render(v.conclusion());
    j["hypothesis_free"] = v.hypothesis_free.back();
  } else {
    j["step"] = *v.step;
    j["reason"] = to_string(*v.reason);
    j["rule_restriction"] = v.restriction_violation();
    j["message"] = v.message;
  }
  return j;
}

}  // namespace gkl::io

#endif  // GKL_IO_HPP
