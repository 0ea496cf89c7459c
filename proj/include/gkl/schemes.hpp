// Axiom-scheme registries of the Hilbert systems and the derived theorem
// schemes T1-T4.

#ifndef GKL_SCHEMES_HPP
#define GKL_SCHEMES_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gkl/error.hpp"
#include "gkl/formula.hpp"

namespace gkl {

enum class SystemId { G_box_dia, GT, GS4, GS5 };

inline std::string_view to_string(SystemId s) {
  switch (s) {
    case SystemId::G_box_dia: return "G_box_dia";
    case SystemId::GT: return "GT";
    case SystemId::GS4: return "GS4";
    case SystemId::GS5: return "GS5";
  }
  return "";
}

inline SystemId parse_system(std::string_view name) {
  for (auto s : {SystemId::G_box_dia, SystemId::GT, SystemId::GS4, SystemId::GS5}) {
    if (to_string(s) == name) return s;
  }
  throw SchemaError("system", "unknown system '" + std::string(name) + "'");
}

namespace schemes {

/// Intuitionistic basis with ∧, ∨ primitive, then prelinearity.
inline const std::vector<Scheme>& godel_dummett() {
  static const std::vector<Scheme> s{
      Scheme::make("A1", "?a -> ?b -> ?a"),
      Scheme::make("A2", "(?a -> ?b -> ?c) -> (?a -> ?b) -> ?a -> ?c"),
      Scheme::make("A3", "?a & ?b -> ?a"),
      Scheme::make("A4", "?a & ?b -> ?b"),
      Scheme::make("A5", "?a -> ?b -> ?a & ?b"),
      Scheme::make("A6", "?a -> ?a | ?b"),
      Scheme::make("A7", "?b -> ?a | ?b"),
      Scheme::make("A8", "(?a -> ?c) -> (?b -> ?c) -> ?a | ?b -> ?c"),
      Scheme::make("A9", "0 -> ?a"),
      Scheme::make("A10", "(?a -> ?b) -> (?a -> ~?b) -> ~?a"),
      Scheme::make("PL", "(?a -> ?b) | (?b -> ?a)"),
  };
  return s;
}

inline const std::vector<Scheme>& modal() {
  static const std::vector<Scheme> s{
      Scheme::make("Kbox", "[](?a -> ?b) -> []?a -> []?b"),
      Scheme::make("Kdia", "<>(?a | ?b) -> <>?a | <>?b"),
      Scheme::make("Fdia", "~<>0"),
      Scheme::make("FS1", "<>(?a -> ?b) -> []?a -> <>?b"),
      Scheme::make("FS2", "(<>?a -> []?b) -> [](?a -> ?b)"),
  };
  return s;
}

inline const std::vector<Scheme>& reflexivity() {
  static const std::vector<Scheme> s{Scheme::make("Tbox", "[]?a -> ?a"), Scheme::make("Tdia", "?a -> <>?a")};
  return s;
}

inline const std::vector<Scheme>& transitivity() {
  static const std::vector<Scheme> s{Scheme::make("4box", "[]?a -> [][]?a"),
                                     Scheme::make("4dia", "<><>?a -> <>?a")};
  return s;
}

inline const std::vector<Scheme>& symmetry() {
  static const std::vector<Scheme> s{Scheme::make("M1", "?a -> []<>?a"), Scheme::make("M2", "<>[]?a -> ?a")};
  return s;
}

/// Derived theorem schemes of the base system; not part of any registry.
inline const std::vector<Scheme>& derived() {
  static const std::vector<Scheme> s{
      Scheme::make("T1", "~<>?a <-> []~?a"),
      Scheme::make("T2", "~~[]?a -> []~~?a"),
      Scheme::make("T3", "<>~~?a -> ~~<>?a"),
      Scheme::make("T4", "([]?a -> <>?b) | [](((?a -> ?b) -> ?b))"),
  };
  return s;
}

}  // namespace schemes

/// Active axiom schemes of a system, in registry order.
inline std::vector<Scheme> list_schemes(SystemId sys) {
  std::vector<Scheme> out = schemes::godel_dummett();
  auto add = [&out](const std::vector<Scheme>& more) { out.insert(out.end(), more.begin(), more.end()); };
  add(schemes::modal());
  if (sys != SystemId::G_box_dia) add(schemes::reflexivity());
  if (sys == SystemId::GS4 || sys == SystemId::GS5) add(schemes::transitivity());
  if (sys == SystemId::GS5) add(schemes::symmetry());
  return out;
}

inline std::optional<Scheme> find_scheme(SystemId sys, std::string_view name) {
  for (auto& s : list_schemes(sys)) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

/// Looks a scheme up in every registry, including the derived T1-T4.
inline std::optional<Scheme> find_any_scheme(std::string_view name) {
  if (auto s = find_scheme(SystemId::GS5, name)) return s;
  for (auto& s : schemes::derived()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

}  // namespace gkl

#endif  // GKL_SCHEMES_HPP
