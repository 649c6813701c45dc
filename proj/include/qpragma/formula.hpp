#pragma once

// Assertive formulas: elementary assertions |-E(x) combined with the pragmatic
// connectives N (negation), K (conjunction) and A (disjunction). The derived
// quantum connectives Aq and Iq exist only in surface syntax and are expanded
// by the parser.
//
// Grammar (fully parenthesized, no precedence):
//   af := "|-" IDENT "(x)" | "N" af | "(" af ("K" | "A" | "Aq" | "Iq") af ")"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qpragma/core.hpp"

namespace qpragma {

enum class Connective { Assert, Not, And, Or };

enum class Fragment { Full, PhiAD };

class Formula {
 public:
  static Formula elementary(std::string property);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);

  Connective kind() const noexcept;
  /// Property name; only meaningful for elementary formulas.
  const std::string& property() const noexcept;
  /// Operand of N, or left operand of K/A.
  const Formula& lhs() const noexcept;
  const Formula& rhs() const noexcept;
  const Formula& operand() const noexcept { return lhs(); }

  bool is_elementary() const noexcept { return kind() == Connective::Assert; }

  /// Connective depth: 0 for elementary formulas.
  int depth() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Connective kind;
  std::string property;
  std::vector<Formula> children;
  int depth;
};

inline Formula Formula::elementary(std::string property) {
  return Formula(std::make_shared<const Node>(Node{Connective::Assert, std::move(property), {}, 0}));
}

inline Formula Formula::negation(Formula operand) {
  const int d = operand.depth() + 1;
  return Formula(std::make_shared<const Node>(Node{Connective::Not, {}, {std::move(operand)}, d}));
}

inline Formula Formula::conjunction(Formula lhs, Formula rhs) {
  const int d = std::max(lhs.depth(), rhs.depth()) + 1;
  return Formula(
      std::make_shared<const Node>(Node{Connective::And, {}, {std::move(lhs), std::move(rhs)}, d}));
}

inline Formula Formula::disjunction(Formula lhs, Formula rhs) {
  const int d = std::max(lhs.depth(), rhs.depth()) + 1;
  return Formula(
      std::make_shared<const Node>(Node{Connective::Or, {}, {std::move(lhs), std::move(rhs)}, d}));
}

inline Connective Formula::kind() const noexcept { return node_->kind; }
inline const std::string& Formula::property() const noexcept { return node_->property; }
inline const Formula& Formula::lhs() const noexcept { return node_->children[0]; }
inline const Formula& Formula::rhs() const noexcept { return node_->children[1]; }
inline int Formula::depth() const noexcept { return node_->depth; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.depth() != b.depth()) return false;
  switch (a.kind()) {
    case Connective::Assert:
      return a.property() == b.property();
    case Connective::Not:
      return a.lhs() == b.lhs();
    case Connective::And:
    case Connective::Or:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

// Short constructors used throughout the library and tests.
inline Formula elem(std::string name) { return Formula::elementary(std::move(name)); }
inline Formula N(Formula f) { return Formula::negation(std::move(f)); }
inline Formula K(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula A(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }

/// Quantum pragmatic disjunction: N((N a) K (N b)).
inline Formula desugar_aq(const Formula& a, const Formula& b) { return N(K(N(a), N(b))); }

/// Quantum pragmatic implication (N a) Aq (a K b), expanded to
/// N((NN a) K (N(a K b))).
inline Formula desugar_iq(const Formula& a, const Formula& b) { return desugar_aq(N(a), K(a, b)); }

/// True iff the connective A does not occur.
inline bool in_phi_AD(const Formula& f) {
  switch (f.kind()) {
    case Connective::Assert:
      return true;
    case Connective::Not:
      return in_phi_AD(f.operand());
    case Connective::And:
      return in_phi_AD(f.lhs()) && in_phi_AD(f.rhs());
    case Connective::Or:
      return false;
  }
  return false;
}

inline void collect_properties(const Formula& f, std::vector<std::string>& out) {
  if (f.is_elementary()) {
    if (std::find(out.begin(), out.end(), f.property()) == out.end()) out.push_back(f.property());
    return;
  }
  collect_properties(f.lhs(), out);
  if (f.kind() == Connective::And || f.kind() == Connective::Or) collect_properties(f.rhs(), out);
}

inline std::vector<std::string> properties_of(const Formula& f) {
  std::vector<std::string> out;
  collect_properties(f, out);
  return out;
}

inline void print_to(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Assert:
      out += "|-";
      out += f.property();
      out += "(x)";
      return;
    case Connective::Not:
      out += "N ";
      print_to(f.operand(), out);
      return;
    case Connective::And:
    case Connective::Or:
      out += '(';
      print_to(f.lhs(), out);
      out += f.kind() == Connective::And ? " K " : " A ";
      print_to(f.rhs(), out);
      out += ')';
      return;
  }
}

/// Canonical fully parenthesized text.
inline std::string print(const Formula& f) {
  std::string out;
  print_to(f, out);
  return out;
}

inline bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '+' || c == '-';
}

inline bool is_valid_identifier(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_identifier_char);
}

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_af();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) fail("expected '" + std::string(token) + "'");
  }

  Formula parse_af() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (consume("|-") || consume("\u22a2")) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_identifier_char(text_[pos_])) ++pos_;
      if (pos_ == start) fail("expected property identifier");
      std::string name(text_.substr(start, pos_ - start));
      skip_ws();
      expect("(x)");
      return elem(std::move(name));
    }
    if (text_[pos_] == 'N') {
      ++pos_;
      return N(parse_af());
    }
    if (text_[pos_] == '(') {
      ++pos_;
      Formula lhs = parse_af();
      skip_ws();
      const std::size_t op_pos = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
      const std::string_view op = text_.substr(op_pos, pos_ - op_pos);
      if (op.empty()) fail("expected connective");
      if (op != "K" && op != "A" && op != "Aq" && op != "Iq") {
        pos_ = op_pos;
        fail("unknown connective '" + std::string(op) + "'");
      }
      Formula rhs = parse_af();
      skip_ws();
      expect(")");
      if (op == "K") return K(std::move(lhs), std::move(rhs));
      if (op == "A") return A(std::move(lhs), std::move(rhs));
      if (op == "Aq") return desugar_aq(lhs, rhs);
      return desugar_iq(lhs, rhs);
    }
    fail(std::string("unexpected character '") + text_[pos_] + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses formula text; Aq and Iq are expanded into N/K form.
inline Formula parse(std::string_view text) { return detail::FormulaParser(text).parse_all(); }

/// Upper bound on enumerate_formulas output size.
inline constexpr std::uint64_t kMaxEnumeration = 4'000'000;

/// Every formula of connective depth <= max_depth over the given properties,
/// ordered by depth. Each formula appears once.
inline std::vector<Formula> enumerate_formulas(const std::vector<std::string>& properties,
                                               int max_depth, Fragment fragment) {
  if (max_depth < 0 || max_depth > 6) {
    throw DomainError("enumeration depth must lie in [0, 6], got " + std::to_string(max_depth));
  }
  // Size check before allocating anything.
  {
    const double binary = fragment == Fragment::Full ? 2.0 : 1.0;
    double upto_prev = 0.0;
    double exact = static_cast<double>(properties.size());
    double upto = exact;
    for (int k = 1; k <= max_depth; ++k) {
      const double fresh = exact + binary * (upto * upto - upto_prev * upto_prev);
      upto_prev = upto;
      exact = fresh;
      upto += fresh;
      if (upto > static_cast<double>(kMaxEnumeration)) {
        throw DomainError("enumeration at depth " + std::to_string(max_depth) + " exceeds " +
                          std::to_string(kMaxEnumeration) + " formulas");
      }
    }
  }

  std::vector<Formula> all;
  for (const auto& p : properties) all.push_back(elem(p));
  std::size_t prev_end = 0;        // formulas of depth < k-1 occupy [0, prev_end)
  std::size_t layer_end = all.size();  // formulas of depth <= k-1 occupy [0, layer_end)
  for (int k = 1; k <= max_depth; ++k) {
    std::vector<Formula> fresh;
    for (std::size_t i = prev_end; i < layer_end; ++i) fresh.push_back(N(all[i]));
    for (std::size_t i = 0; i < layer_end; ++i) {
      for (std::size_t j = 0; j < layer_end; ++j) {
        if (i < prev_end && j < prev_end) continue;  // both operands too shallow
        fresh.push_back(K(all[i], all[j]));
        if (fragment == Fragment::Full) fresh.push_back(A(all[i], all[j]));
      }
    }
    prev_end = layer_end;
    all.insert(all.end(), fresh.begin(), fresh.end());
    layer_end = all.size();
  }
  return all;
}

/// Random formula of depth <= max_depth; leaves are drawn uniformly from the
/// property list.
inline Formula random_formula(const std::vector<std::string>& properties, int max_depth,
                              Fragment fragment, std::mt19937_64& rng) {
  if (properties.empty()) throw DomainError("random_formula needs at least one property");
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (max_depth == 0 || pick(4) == 0) return elem(properties[pick(properties.size())]);
  const std::size_t choices = fragment == Fragment::Full ? 3 : 2;
  switch (pick(choices)) {
    case 0:
      return N(random_formula(properties, max_depth - 1, fragment, rng));
    case 1: {
      Formula a = random_formula(properties, max_depth - 1, fragment, rng);
      Formula b = random_formula(properties, max_depth - 1, fragment, rng);
      return K(std::move(a), std::move(b));
    }
    default: {
      Formula a = random_formula(properties, max_depth - 1, fragment, rng);
      Formula b = random_formula(properties, max_depth - 1, fragment, rng);
      return A(std::move(a), std::move(b));
    }
  }
}

}  // namespace qpragma
