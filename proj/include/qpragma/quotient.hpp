#pragma once

// Quotient of A-free formulas by equal extensions, ordered by inclusion, and
// the translation of lattice terms (complement, meet, join) into formulas.

#include <algorithm>
#include <cctype>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qpragma/pragmatics.hpp"

namespace qpragma {

enum class LatticeOp { Atom, Complement, Meet, Join };

/// Term over property names with complement, meet and join.
class LatticeTerm {
 public:
  static LatticeTerm atom(std::string name) {
    return LatticeTerm(std::make_shared<const Node>(Node{LatticeOp::Atom, std::move(name), {}}));
  }
  static LatticeTerm complement(LatticeTerm t) {
    return LatticeTerm(std::make_shared<const Node>(Node{LatticeOp::Complement, {}, {std::move(t)}}));
  }
  static LatticeTerm meet(LatticeTerm a, LatticeTerm b) {
    return LatticeTerm(
        std::make_shared<const Node>(Node{LatticeOp::Meet, {}, {std::move(a), std::move(b)}}));
  }
  static LatticeTerm join(LatticeTerm a, LatticeTerm b) {
    return LatticeTerm(
        std::make_shared<const Node>(Node{LatticeOp::Join, {}, {std::move(a), std::move(b)}}));
  }

  LatticeOp op() const noexcept { return node_->op; }
  const std::string& name() const noexcept { return node_->name; }
  const LatticeTerm& lhs() const noexcept { return node_->children[0]; }
  const LatticeTerm& rhs() const noexcept { return node_->children[1]; }

 private:
  struct Node {
    LatticeOp op;
    std::string name;
    std::vector<LatticeTerm> children;
  };
  explicit LatticeTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// ASCII rendering: postfix ' for complement, & for meet, | for join.
inline std::string print(const LatticeTerm& t) {
  switch (t.op()) {
    case LatticeOp::Atom:
      return t.name();
    case LatticeOp::Complement:
      return print(t.lhs()) + "'";
    case LatticeOp::Meet:
      return "(" + print(t.lhs()) + " & " + print(t.rhs()) + ")";
    case LatticeOp::Join:
      return "(" + print(t.lhs()) + " | " + print(t.rhs()) + ")";
  }
  return {};
}

namespace detail {

// expr    := unary [ binop unary ]
// unary   := primary { "'" | "⊥" }
// primary := IDENT | "(" expr ")"
// binop   := "&" | "⋒" | "|" | "⋓"
class LatticeTermParser {
 public:
  explicit LatticeTermParser(std::string_view text) : text_(text) {}

  LatticeTerm parse_all() {
    LatticeTerm t = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
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

  LatticeTerm parse_expr() {
    LatticeTerm lhs = parse_unary();
    skip_ws();
    LatticeOp op;
    if (consume("&") || consume("⋒")) {
      op = LatticeOp::Meet;
    } else if (consume("|") || consume("⋓")) {
      op = LatticeOp::Join;
    } else {
      return lhs;
    }
    LatticeTerm rhs = parse_unary();
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '&' || text_[pos_] == '|')) {
      fail("chained binary operators must be parenthesized");
    }
    return op == LatticeOp::Meet ? LatticeTerm::meet(std::move(lhs), std::move(rhs))
                                 : LatticeTerm::join(std::move(lhs), std::move(rhs));
  }

  LatticeTerm parse_unary() {
    LatticeTerm t = parse_primary();
    for (;;) {
      skip_ws();
      if (consume("'") || consume("⊥")) {
        t = LatticeTerm::complement(std::move(t));
      } else {
        return t;
      }
    }
  }

  LatticeTerm parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (consume("(")) {
      LatticeTerm t = parse_expr();
      skip_ws();
      if (!consume(")")) fail("expected ')'");
      return t;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_identifier_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected property name");
    return LatticeTerm::atom(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline LatticeTerm parse_lattice_term(std::string_view text) {
  return detail::LatticeTermParser(text).parse_all();
}

/// name -> |-name(x), complement -> N, meet -> K, join -> Aq.
inline Formula translate_lattice_term(const LatticeTerm& t) {
  switch (t.op()) {
    case LatticeOp::Atom:
      return elem(t.name());
    case LatticeOp::Complement:
      return N(translate_lattice_term(t.lhs()));
    case LatticeOp::Meet:
      return K(translate_lattice_term(t.lhs()), translate_lattice_term(t.rhs()));
    case LatticeOp::Join:
      return desugar_aq(translate_lattice_term(t.lhs()), translate_lattice_term(t.rhs()));
  }
  throw std::logic_error("unreachable lattice op");
}

/// Direct evaluation in the subspace lattice.
inline Subspace evaluate_lattice_term(const PropertyModel& m, const LatticeTerm& t) {
  const Tolerance tol = m.tolerance();
  switch (t.op()) {
    case LatticeOp::Atom:
      return m.property(t.name());
    case LatticeOp::Complement:
      return complement(evaluate_lattice_term(m, t.lhs()));
    case LatticeOp::Meet:
      return meet(evaluate_lattice_term(m, t.lhs()), evaluate_lattice_term(m, t.rhs()), tol);
    case LatticeOp::Join:
      return join(evaluate_lattice_term(m, t.lhs()), evaluate_lattice_term(m, t.rhs()), tol);
  }
  throw std::logic_error("unreachable lattice op");
}

inline LatticeTerm random_lattice_term(const std::vector<std::string>& names, int max_depth,
                                       std::mt19937_64& rng) {
  if (names.empty()) throw DomainError("random_lattice_term needs at least one name");
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (max_depth == 0 || pick(4) == 0) return LatticeTerm::atom(names[pick(names.size())]);
  switch (pick(3)) {
    case 0:
      return LatticeTerm::complement(random_lattice_term(names, max_depth - 1, rng));
    case 1: {
      auto a = random_lattice_term(names, max_depth - 1, rng);
      auto b = random_lattice_term(names, max_depth - 1, rng);
      return LatticeTerm::meet(std::move(a), std::move(b));
    }
    default: {
      auto a = random_lattice_term(names, max_depth - 1, rng);
      auto b = random_lattice_term(names, max_depth - 1, rng);
      return LatticeTerm::join(std::move(a), std::move(b));
    }
  }
}

/// Terms whose translated formula's extension differs from the directly
/// evaluated subspace. Empty means the correspondence commutes.
inline std::vector<std::string> check_correspondence(const PropertyModel& m,
                                                     const std::vector<LatticeTerm>& terms) {
  std::vector<std::string> mismatches;
  for (const auto& t : terms) {
    const Formula f = translate_lattice_term(t);
    const Extension via_formula = pragmatic_extension(m, f);
    const Extension via_lattice = Extension::of(evaluate_lattice_term(m, t));
    if (!in_phi_AD(f) || !ext_equals(via_formula, via_lattice, m.tolerance())) {
      mismatches.push_back(print(t));
    }
  }
  return mismatches;
}

struct EquivalenceClass {
  Formula representative;
  std::vector<Formula> members;
  Extension extension;

  /// The closed set as a subspace (O for the empty class).
  Subspace subspace() const { return extension.is_empty() ? Subspace::zero(extension.ambient_dim())
                                                          : extension.components().front(); }
};

struct QuotientLattice {
  std::vector<EquivalenceClass> classes;
  /// order[i][j]: class i is below class j.
  std::vector<std::vector<bool>> order;
};

/// Groups the universe (plus every registered elementary formula) by
/// extension. Classes are sorted canonically by their subspace.
inline QuotientLattice build_quotient(const PropertyModel& m, const std::vector<Formula>& universe) {
  const Tolerance tol = m.tolerance();
  std::vector<Formula> all = universe;
  for (const auto& name : m.names()) {
    const Formula e = elem(name);
    if (std::find(all.begin(), all.end(), e) == all.end()) all.push_back(e);
  }

  std::vector<EquivalenceClass> classes;
  for (const auto& f : all) {
    if (!in_phi_AD(f)) throw DomainError("quotient universe contains a formula with A: " + print(f));
    Extension ext = pragmatic_extension(m, f);
    if (!is_closed(ext)) throw ConsistencyError("A-free formula with non-closed extension: " + print(f));
    auto it = std::find_if(classes.begin(), classes.end(), [&](const EquivalenceClass& c) {
      return ext_equals(c.extension, ext, tol);
    });
    if (it == classes.end()) {
      classes.push_back(EquivalenceClass{f, {f}, std::move(ext)});
    } else {
      it->members.push_back(f);
    }
  }
  for (auto& c : classes) {
    auto el = std::find_if(c.members.begin(), c.members.end(),
                           [](const Formula& f) { return f.is_elementary(); });
    c.representative = el != c.members.end() ? *el : c.members.front();
  }
  std::sort(classes.begin(), classes.end(), [&](const EquivalenceClass& a, const EquivalenceClass& b) {
    return canonical_compare(a.subspace(), b.subspace(), tol) < 0;
  });

  QuotientLattice q{std::move(classes), {}};
  const std::size_t n = q.classes.size();
  q.order.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q.order[i][j] = ext_includes(q.classes[j].extension, q.classes[i].extension, tol);
    }
  }
  return q;
}

struct IsomorphismReport {
  bool well_defined = true;
  bool injective = true;
  bool order_preserved = true;
  bool partial_order = true;
  bool unique_elementary = true;
  bool operations_commute = true;
  std::vector<std::string> problems;

  bool ok() const {
    return well_defined && injective && order_preserved && partial_order && unique_elementary &&
           operations_commute;
  }
};

/// Re-verifies the class map from scratch: members share their class
/// extension, distinct classes have distinct subspaces, class order matches
/// both subspace inclusion and the formula preorder, each class equal to a
/// registered property set holds exactly one elementary formula, and N, K, Aq
/// on representatives match complement, meet and join.
inline IsomorphismReport check_isomorphism(const PropertyModel& m, const QuotientLattice& q) {
  const Tolerance tol = m.tolerance();
  IsomorphismReport r;
  const std::size_t n = q.classes.size();

  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = q.classes[i];
    for (const auto& f : c.members) {
      const Extension ext = pragmatic_extension(m, f);
      if (!is_closed(ext) || !ext_equals(ext, c.extension, tol)) {
        r.well_defined = false;
        r.problems.push_back("member " + print(f) + " left its class");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (equals(q.classes[i].subspace(), q.classes[j].subspace(), tol)) {
        r.injective = false;
        r.problems.push_back("classes " + std::to_string(i) + " and " + std::to_string(j) +
                             " share a subspace");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool by_subspace = includes(q.classes[j].subspace(), q.classes[i].subspace(), tol);
      const bool by_formula =
          preorder(m, q.classes[i].representative, q.classes[j].representative);
      if (q.order[i][j] != by_subspace || q.order[i][j] != by_formula) {
        r.order_preserved = false;
        r.problems.push_back("order mismatch between classes " + std::to_string(i) + " and " +
                             std::to_string(j));
      }
      if (i != j && q.order[i][j] && q.order[j][i]) {
        r.partial_order = false;
        r.problems.push_back("antisymmetry fails for classes " + std::to_string(i) + " and " +
                             std::to_string(j));
      }
    }
  }

  for (const auto& c : q.classes) {
    const auto elementary = std::count_if(c.members.begin(), c.members.end(),
                                          [](const Formula& f) { return f.is_elementary(); });
    const bool registered = !m.name_of(c.subspace()).empty();
    if (elementary > 1 || (registered && elementary != 1)) {
      r.unique_elementary = false;
      r.problems.push_back("class of " + print(c.representative) + " has " +
                           std::to_string(elementary) + " elementary members");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = q.classes[i];
    const Extension neg = pragmatic_extension(m, N(a.representative));
    if (!ext_equals(neg, Extension::of(complement(a.subspace())), tol)) {
      r.operations_commute = false;
      r.problems.push_back("N does not match complement on " + print(a.representative));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& b = q.classes[j];
      const Extension conj = pragmatic_extension(m, K(a.representative, b.representative));
      if (!ext_equals(conj, Extension::of(meet(a.subspace(), b.subspace(), tol)), tol)) {
        r.operations_commute = false;
        r.problems.push_back("K does not match meet on classes " + std::to_string(i) + ", " +
                             std::to_string(j));
      }
      const Extension disj =
          pragmatic_extension(m, desugar_aq(a.representative, b.representative));
      if (!ext_equals(disj, Extension::of(join(a.subspace(), b.subspace(), tol)), tol)) {
        r.operations_commute = false;
        r.problems.push_back("Aq does not match join on classes " + std::to_string(i) + ", " +
                             std::to_string(j));
      }
    }
  }
  return r;
}

inline nlohmann::json quotient_to_json(const QuotientLattice& q) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : q.classes) {
    classes.push_back({{"representative", print(c.representative)},
                       {"extension_dim", c.subspace().dim()},
                       {"members_count", c.members.size()}});
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < q.classes.size(); ++i) {
    for (std::size_t j = 0; j < q.classes.size(); ++j) {
      if (i != j && q.order[i][j]) pairs.push_back({i, j});
    }
  }
  return {{"classes", classes}, {"order_pairs", pairs}};
}

/// Hasse diagram: an edge i -> j for every cover relation i < j.
inline std::string quotient_to_dot(const QuotientLattice& q) {
  const std::size_t n = q.classes.size();
  std::ostringstream out;
  out << "digraph quotient {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = print(q.classes[i].representative);
    std::string escaped;
    for (char c : label) {
      if (c == '"' || c == '\\') escaped += '\\';
      escaped += c;
    }
    out << "  c" << i << " [label=\"" << escaped << "\\ndim " << q.classes[i].subspace().dim()
        << ", " << q.classes[i].members.size() << " members\"];\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !q.order[i][j]) continue;
      bool covered = true;
      for (std::size_t k = 0; k < n && covered; ++k) {
        if (k != i && k != j && q.order[i][k] && q.order[k][j]) covered = false;
      }
      if (covered) out << "  c" << i << " -> c" << j << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace qpragma
