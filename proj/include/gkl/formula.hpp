// Formulas of the bi-modal language over ⊥, variables, ∧, ∨, →, □, ◇.
// ¬, ⊤ and ↔ are abbreviations and are expanded when constructed.

#ifndef GKL_FORMULA_HPP
#define GKL_FORMULA_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gkl/error.hpp"

namespace gkl {

enum class Connective : std::uint8_t { Bot, Var, And, Or, Imp, Box, Dia };

/// Immutable, structurally shared formula tree.
///
/// Equality is syntactic identity. The total order compares size first, so
/// a sorted set of formulas lists subformulas before the formulas containing
/// them; ties are broken by connective, variable name, then children.
class Formula {
 public:
  Formula() : Formula(bot()) {}

  static Formula bot() {
    static const Formula b = make(Node{Connective::Bot, {}, nullptr, nullptr});
    return b;
  }
  static Formula var(std::string name) {
    return make(Node{Connective::Var, std::move(name), nullptr, nullptr});
  }
  static Formula conj(const Formula& l, const Formula& r) { return binary(Connective::And, l, r); }
  static Formula disj(const Formula& l, const Formula& r) { return binary(Connective::Or, l, r); }
  static Formula imp(const Formula& l, const Formula& r) { return binary(Connective::Imp, l, r); }
  static Formula box(const Formula& f) { return unary(Connective::Box, f); }
  static Formula dia(const Formula& f) { return unary(Connective::Dia, f); }
  static Formula neg(const Formula& f) { return imp(f, bot()); }
  static Formula top() { return imp(bot(), bot()); }
  static Formula iff(const Formula& l, const Formula& r) { return conj(imp(l, r), imp(r, l)); }

  Connective kind() const { return node_->kind; }
  bool is(Connective c) const { return node_->kind == c; }
  bool is_modal() const { return is(Connective::Box) || is(Connective::Dia); }
  bool is_binary() const {
    return is(Connective::And) || is(Connective::Or) || is(Connective::Imp);
  }

  /// Variable name; empty for other connectives.
  const std::string& name() const { return node_->name; }
  bool is_metavariable() const { return is(Connective::Var) && !name().empty() && name()[0] == '?'; }

  /// Left operand of a binary node, the operand of a modal node.
  const Formula& lhs() const { return *node_->left; }
  const Formula& rhs() const { return *node_->right; }
  const Formula& sub() const { return *node_->left; }

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  std::size_t modal_depth() const {
    switch (kind()) {
      case Connective::Bot:
      case Connective::Var: return 0;
      case Connective::Box:
      case Connective::Dia: return 1 + sub().modal_depth();
      default: return std::max(lhs().modal_depth(), rhs().modal_depth());
    }
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    return (a <=> b) == std::strong_ordering::equal;
  }

  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    switch (a.kind()) {
      case Connective::Bot: return std::strong_ordering::equal;
      case Connective::Var: return a.name().compare(b.name()) <=> 0;
      case Connective::Box:
      case Connective::Dia: return a.sub() <=> b.sub();
      default:
        if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
        return a.rhs() <=> b.rhs();
    }
  }

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::shared_ptr<const Formula> left;
    std::shared_ptr<const Formula> right;
    std::size_t size = 1;
    std::size_t hash = 0;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Node node) {
    std::size_t h = static_cast<std::size_t>(node.kind) * 0x9e3779b97f4a7c15ULL;
    node.size = 1;
    if (node.kind == Connective::Var) h ^= std::hash<std::string>{}(node.name) + 0x632be59bd9b4e019ULL;
    for (const auto* child : {node.left.get(), node.right.get()}) {
      if (child == nullptr) continue;
      node.size += child->size();
      h = (h ^ child->hash()) * 0x100000001b3ULL + (h << 6) + (h >> 2);
    }
    node.hash = h;
    return Formula(std::make_shared<const Node>(std::move(node)));
  }

  static Formula binary(Connective c, const Formula& l, const Formula& r) {
    return make(Node{c, {}, std::make_shared<const Formula>(l), std::make_shared<const Formula>(r)});
  }
  static Formula unary(Connective c, const Formula& f) {
    return make(Node{c, {}, std::make_shared<const Formula>(f), nullptr});
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using FormulaSet = std::set<Formula>;

// ---------------------------------------------------------------------------
// Parsing and printing

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, bool allow_metavariables)
      : text_(text), allow_meta_(allow_metavariables) {}

  Formula parse_all() {
    Formula f = parse_iff();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept("<->")) f = Formula::iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept("->")) return Formula::imp(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept("~")) return Formula::neg(parse_unary());
    if (accept("[]")) return Formula::box(parse_unary());
    // "<->" never starts a unary formula, so "<>" is unambiguous here.
    if (accept("<>")) return Formula::dia(parse_unary());
    if (accept("(")) {
      Formula f = parse_iff();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    const char c = text_[pos_];
    if (c == '0' || c == '1') {
      const bool more = pos_ + 1 < text_.size() &&
                        (std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_');
      if (more) fail("malformed constant");
      ++pos_;
      return c == '0' ? Formula::bot() : Formula::top();
    }
    std::size_t start = pos_;
    if (c == '?') {
      if (!allow_meta_) fail("metavariable outside a scheme");
      ++pos_;
      if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        fail("malformed metavariable");
      }
    } else if (!std::isalpha(static_cast<unsigned char>(c))) {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return Formula::var(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  bool allow_meta_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer; higher binds tighter.
inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Connective::Imp: return f.rhs().is(Connective::Bot) ? 4 : 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    default: return 4;
  }
}

inline void render_into(const Formula& f, std::string& out);

inline void render_operand(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  render_into(f, out);
  if (parens) out += ')';
}

inline void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Bot: out += '0'; return;
    case Connective::Var: out += f.name(); return;
    case Connective::Box:
      out += "[]";
      render_operand(f.sub(), precedence(f.sub()) < 4, out);
      return;
    case Connective::Dia:
      out += "<>";
      render_operand(f.sub(), precedence(f.sub()) < 4, out);
      return;
    case Connective::Imp:
      if (f.rhs().is(Connective::Bot)) {
        out += '~';
        render_operand(f.lhs(), precedence(f.lhs()) < 4, out);
        return;
      }
      // Right associative.
      render_operand(f.lhs(), precedence(f.lhs()) <= 1, out);
      out += " -> ";
      render_operand(f.rhs(), precedence(f.rhs()) < 1, out);
      return;
    case Connective::Or:
    case Connective::And: {
      const int p = precedence(f);
      // Left associative.
      render_operand(f.lhs(), precedence(f.lhs()) < p, out);
      out += f.is(Connective::And) ? " & " : " | ";
      render_operand(f.rhs(), precedence(f.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace detail

/// Parses an object-language formula. Throws ParseError with the offset.
inline Formula parse(std::string_view text) { return detail::Parser(text, false).parse_all(); }

/// Like parse, but also accepts metavariables spelled `?a`, `?b`, ...
inline Formula parse_scheme_pattern(std::string_view text) {
  return detail::Parser(text, true).parse_all();
}

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << render(f); }

// ---------------------------------------------------------------------------
// Structural queries

inline void collect_variables(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Bot: return;
    case Connective::Var: out.insert(f.name()); return;
    case Connective::Box:
    case Connective::Dia: collect_variables(f.sub(), out); return;
    default:
      collect_variables(f.lhs(), out);
      collect_variables(f.rhs(), out);
  }
}

inline std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect_variables(f, out);
  return out;
}

/// Atoms of f read as a formula of L(Var ∪ X): its variables and its
/// outermost subformulas headed by a modality.
inline void collect_prop_atoms(const Formula& f, FormulaSet& out) {
  switch (f.kind()) {
    case Connective::Bot: return;
    case Connective::Var:
    case Connective::Box:
    case Connective::Dia: out.insert(f); return;
    default:
      collect_prop_atoms(f.lhs(), out);
      collect_prop_atoms(f.rhs(), out);
  }
}

inline FormulaSet prop_atoms(const Formula& f) {
  FormulaSet out;
  collect_prop_atoms(f, out);
  return out;
}

inline void collect_subformulas(const Formula& f, FormulaSet& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case Connective::Bot:
    case Connective::Var: return;
    case Connective::Box:
    case Connective::Dia: collect_subformulas(f.sub(), out); return;
    default:
      collect_subformulas(f.lhs(), out);
      collect_subformulas(f.rhs(), out);
  }
}

/// A finite set of formulas closed under subformulas and containing ⊥.
/// Iteration order is the Formula order, which fixes the enumeration order
/// used to break ties wherever a representative formula is chosen.
class Fragment {
 public:
  Fragment() : formulas_{Formula::bot()} {}

  static Fragment closure(const std::vector<Formula>& roots) {
    FormulaSet all{Formula::bot()};
    for (const auto& r : roots) collect_subformulas(r, all);
    return Fragment(std::vector<Formula>(all.begin(), all.end()));
  }

  /// Throws SchemaError if `formulas` is not a fragment.
  static Fragment from_closed(const FormulaSet& formulas) {
    Fragment f(std::vector<Formula>(formulas.begin(), formulas.end()));
    if (!f.contains(Formula::bot())) throw SchemaError("fragment", "does not contain 0");
    for (const auto& phi : f.formulas_) {
      if (phi.is_binary() && (!f.contains(phi.lhs()) || !f.contains(phi.rhs()))) {
        throw SchemaError("fragment", "not closed under subformulas at " + render(phi));
      }
      if (phi.is_modal() && !f.contains(phi.sub())) {
        throw SchemaError("fragment", "not closed under subformulas at " + render(phi));
      }
    }
    return f;
  }

  const std::vector<Formula>& formulas() const { return formulas_; }
  std::size_t size() const { return formulas_.size(); }
  auto begin() const { return formulas_.begin(); }
  auto end() const { return formulas_.end(); }

  bool contains(const Formula& f) const {
    return std::binary_search(formulas_.begin(), formulas_.end(), f);
  }

  /// Position of f in the enumeration order; f must be a member.
  std::size_t index_of(const Formula& f) const {
    return static_cast<std::size_t>(
        std::lower_bound(formulas_.begin(), formulas_.end(), f) - formulas_.begin());
  }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& f : formulas_) collect_variables(f, out);
    return out;
  }

  /// Atoms of the propositional reading of the fragment: its variables and
  /// its members headed by a modality.
  FormulaSet atoms() const {
    FormulaSet out;
    for (const auto& f : formulas_) {
      if (f.is(Connective::Var) || f.is_modal()) out.insert(f);
    }
    return out;
  }

  /// Everything a canonical world must value: the variables of the fragment
  /// and □ψ, ◇ψ for every member ψ.
  FormulaSet world_atoms() const {
    FormulaSet out;
    for (const auto& f : formulas_) {
      if (f.is(Connective::Var)) out.insert(f);
      out.insert(Formula::box(f));
      out.insert(Formula::dia(f));
    }
    return out;
  }

  friend bool operator==(const Fragment&, const Fragment&) = default;

 private:
  explicit Fragment(std::vector<Formula> sorted) : formulas_(std::move(sorted)) {}

  std::vector<Formula> formulas_;
};

inline Fragment subformula_closure(const std::vector<Formula>& roots) {
  return Fragment::closure(roots);
}

// ---------------------------------------------------------------------------
// Schemes

using Substitution = std::map<std::string, Formula>;

/// An axiom scheme: a pattern whose variables are metavariables `?a`, ...
struct Scheme {
  std::string name;
  Formula pattern;
  std::vector<std::string> metavariables;  // sorted

  static Scheme make(std::string name, std::string_view pattern_text) {
    Scheme s{std::move(name), parse_scheme_pattern(pattern_text), {}};
    for (const auto& v : variables(s.pattern)) {
      if (v.empty() || v[0] != '?') {
        throw SchemaError("scheme " + s.name, "object variable '" + v + "' in pattern");
      }
      s.metavariables.push_back(v);
    }
    return s;
  }

  std::size_t arity() const { return metavariables.size(); }
};

inline Formula substitute(const Formula& pattern, const Substitution& sigma) {
  switch (pattern.kind()) {
    case Connective::Bot: return pattern;
    case Connective::Var: {
      auto it = sigma.find(pattern.name());
      return it == sigma.end() ? pattern : it->second;
    }
    case Connective::Box: return Formula::box(substitute(pattern.sub(), sigma));
    case Connective::Dia: return Formula::dia(substitute(pattern.sub(), sigma));
    case Connective::And: return Formula::conj(substitute(pattern.lhs(), sigma), substitute(pattern.rhs(), sigma));
    case Connective::Or: return Formula::disj(substitute(pattern.lhs(), sigma), substitute(pattern.rhs(), sigma));
    case Connective::Imp: return Formula::imp(substitute(pattern.lhs(), sigma), substitute(pattern.rhs(), sigma));
  }
  return pattern;
}

inline Formula instantiate(const Scheme& s, const Substitution& sigma) {
  for (const auto& m : s.metavariables) {
    if (!sigma.contains(m)) throw SchemaError("scheme " + s.name, "metavariable " + m + " unbound");
  }
  return substitute(s.pattern, sigma);
}

namespace detail {

inline bool match_into(const Formula& phi, const Formula& pattern, Substitution& sigma) {
  if (pattern.is_metavariable()) {
    auto [it, inserted] = sigma.emplace(pattern.name(), phi);
    return inserted || it->second == phi;
  }
  if (phi.kind() != pattern.kind()) return false;
  switch (pattern.kind()) {
    case Connective::Bot: return true;
    case Connective::Var: return phi.name() == pattern.name();
    case Connective::Box:
    case Connective::Dia: return match_into(phi.sub(), pattern.sub(), sigma);
    default:
      return match_into(phi.lhs(), pattern.lhs(), sigma) && match_into(phi.rhs(), pattern.rhs(), sigma);
  }
}

}  // namespace detail

/// The unique σ with σ(s) = φ, if any.
inline std::optional<Substitution> match_scheme(const Formula& phi, const Scheme& s) {
  Substitution sigma;
  if (!detail::match_into(phi, s.pattern, sigma)) return std::nullopt;
  return sigma;
}

}  // namespace gkl

#endif  // GKL_FORMULA_HPP
