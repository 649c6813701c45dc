#pragma once

// Axiom schemata for the A-free fragment and counterexample searches that
// exhibit non-classical behaviour.
//
// Each schema is stored as a sequent: zero or more premises lhs < rhs and a
// conclusion lhs < rhs. The axiom formula proper is obtained by writing every
// sequent as an Iq formula and, when there are premises, implying the
// conclusion from their K-conjunction:
//   no premises:   c.lhs Iq c.rhs
//   premises p_i:  (p_1 K ... K p_n) Iq (c.lhs Iq c.rhs)
// verify_axioms checks that formula for p-validity. It also checks the weaker
// rule form (all premises hold => conclusion holds), which is what the
// orthomodular lattice guarantees for the Sasaki hook.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpragma/pragmatics.hpp"

namespace qpragma {

struct Sequent {
  Formula lhs;
  Formula rhs;
};

struct SchemaInstance {
  std::vector<Sequent> premises;
  Sequent conclusion;
};

struct AxiomSchema {
  std::string id;
  int arity;
  std::string text;
  std::function<SchemaInstance(std::span<const Formula>)> build;
};

inline Formula iq(const Formula& a, const Formula& b) { return desugar_iq(a, b); }
inline Formula aq(const Formula& a, const Formula& b) { return desugar_aq(a, b); }

inline Formula sequent_formula(const Sequent& s) { return iq(s.lhs, s.rhs); }

inline Formula instance_formula(const SchemaInstance& inst) {
  if (inst.premises.empty()) return sequent_formula(inst.conclusion);
  Formula hyp = sequent_formula(inst.premises.front());
  for (std::size_t i = 1; i < inst.premises.size(); ++i) {
    hyp = K(hyp, sequent_formula(inst.premises[i]));
  }
  return iq(hyp, sequent_formula(inst.conclusion));
}

/// The nine schemata A1..A9.
inline const std::vector<AxiomSchema>& axiom_schemata() {
  using Args = std::span<const Formula>;
  static const std::vector<AxiomSchema> schemata = {
      {"A1", 1, "d Iq d", [](Args a) { return SchemaInstance{{}, {a[0], a[0]}}; }},
      {"A2", 2, "(d1 K d2) Iq d1",
       [](Args a) { return SchemaInstance{{}, {K(a[0], a[1]), a[0]}}; }},
      {"A3", 2, "(d1 K d2) Iq d2",
       [](Args a) { return SchemaInstance{{}, {K(a[0], a[1]), a[1]}}; }},
      {"A4", 1, "d Iq (NN d)", [](Args a) { return SchemaInstance{{}, {a[0], N(N(a[0]))}}; }},
      {"A5", 1, "(NN d) Iq d", [](Args a) { return SchemaInstance{{}, {N(N(a[0])), a[0]}}; }},
      {"A6", 3, "((d1 Iq d2) K (d1 Iq d3)) Iq (d1 Iq (d2 K d3))",
       [](Args a) {
         return SchemaInstance{{{a[0], a[1]}, {a[0], a[2]}}, {a[0], K(a[1], a[2])}};
       }},
      {"A7", 3, "((d1 Iq d2) K (d2 Iq d3)) Iq (d1 Iq d3)",
       [](Args a) { return SchemaInstance{{{a[0], a[1]}, {a[1], a[2]}}, {a[0], a[2]}}; }},
      {"A8", 2, "(d1 Iq d2) Iq ((N d2) Iq (N d1))",
       [](Args a) { return SchemaInstance{{{a[0], a[1]}}, {N(a[1]), N(a[0])}}; }},
      {"A9", 2, "(d1 Iq d2) Iq (d2 Iq (d1 Aq ((N d1) K d2)))",
       [](Args a) {
         return SchemaInstance{{{a[0], a[1]}}, {a[1], aq(a[0], K(N(a[0]), a[1]))}};
       }},
  };
  return schemata;
}

/// Classical distributivity, used as a negative control. It holds in Boolean
/// lattices and fails for three pairwise-skew rays in a plane.
inline const AxiomSchema& distributivity_control() {
  using Args = std::span<const Formula>;
  static const AxiomSchema control{
      "DIST", 3, "(d1 K (d2 Aq d3)) Iq ((d1 K d2) Aq (d1 K d3))", [](Args a) {
        return SchemaInstance{{}, {K(a[0], aq(a[1], a[2])), aq(K(a[0], a[1]), K(a[0], a[2]))}};
      }};
  return control;
}

inline const AxiomSchema& find_schema(const std::string& id) {
  for (const auto& s : axiom_schemata()) {
    if (s.id == id) return s;
  }
  if (id == distributivity_control().id) return distributivity_control();
  throw DomainError("unknown axiom schema '" + id + "'");
}

inline void check_arguments(const AxiomSchema& schema, std::span<const Formula> args) {
  if (static_cast<int>(args.size()) != schema.arity) {
    throw DomainError(schema.id + " takes " + std::to_string(schema.arity) + " arguments, got " +
                      std::to_string(args.size()));
  }
  for (const auto& a : args) {
    if (!in_phi_AD(a)) throw DomainError(schema.id + ": argument " + print(a) + " contains A");
  }
}

/// Substitutes the arguments and returns the fully desugared axiom formula.
inline Formula instantiate(const AxiomSchema& schema, std::span<const Formula> args) {
  check_arguments(schema, args);
  return instance_formula(schema.build(args));
}

inline Formula instantiate(const AxiomSchema& schema, std::initializer_list<Formula> args) {
  return instantiate(schema, std::span<const Formula>(args.begin(), args.size()));
}

/// Elementary formulas of the registry and their negations.
inline std::vector<Formula> default_pool(const PropertyModel& m) {
  std::vector<Formula> pool;
  for (const auto& name : m.names()) pool.push_back(elem(name));
  for (const auto& name : m.names()) pool.push_back(N(elem(name)));
  return pool;
}

struct AxiomFailure {
  std::vector<std::string> arguments;
  std::string instance;
  std::vector<int> extension_dims;
};

struct SchemaResult {
  std::string schema_id;
  int instances_checked = 0;
  std::vector<AxiomFailure> failures;
  /// Instances whose premises all hold but whose conclusion does not.
  int rule_form_failures = 0;
};

struct AxiomReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<SchemaResult> schemata;

  int total_failures() const {
    int n = 0;
    for (const auto& s : schemata) n += static_cast<int>(s.failures.size());
    return n;
  }
  int total_rule_form_failures() const {
    int n = 0;
    for (const auto& s : schemata) n += s.rule_form_failures;
    return n;
  }
};

inline SchemaResult verify_schema(const PropertyModel& m, const AxiomSchema& schema,
                                  const std::vector<Formula>& pool, int trials,
                                  std::mt19937_64& rng) {
  if (pool.empty()) throw DomainError("empty argument pool");
  SchemaResult result;
  result.schema_id = schema.id;
  std::vector<Formula> args;
  for (int t = 0; t < trials; ++t) {
    args.clear();
    for (int k = 0; k < schema.arity; ++k) args.push_back(pool[rng() % pool.size()]);
    check_arguments(schema, args);
    const SchemaInstance inst = schema.build(args);
    const Formula formula = instance_formula(inst);
    ++result.instances_checked;
    if (!p_valid(m, formula)) {
      AxiomFailure failure;
      for (const auto& a : args) failure.arguments.push_back(print(a));
      failure.instance = print(formula);
      failure.extension_dims = pragmatic_extension(m, formula).component_dims();
      result.failures.push_back(std::move(failure));
    }
    bool premises_hold = true;
    for (const auto& p : inst.premises) premises_hold = premises_hold && preorder(m, p.lhs, p.rhs);
    if (premises_hold && !preorder(m, inst.conclusion.lhs, inst.conclusion.rhs)) {
      ++result.rule_form_failures;
    }
  }
  return result;
}

/// Samples `trials` argument tuples per schema (uniformly, with replacement)
/// from the pool and checks each instance. Deterministic per seed.
inline AxiomReport verify_axioms(const PropertyModel& m, const std::vector<Formula>& pool, int trials,
                                 std::uint64_t seed,
                                 const std::vector<AxiomSchema>& schemata = axiom_schemata()) {
  AxiomReport report;
  report.seed = seed;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  for (const auto& schema : schemata) report.schemata.push_back(verify_schema(m, schema, pool, trials, rng));
  return report;
}

inline nlohmann::json axiom_report_to_json(const AxiomReport& report) {
  nlohmann::json schemata = nlohmann::json::array();
  for (const auto& s : report.schemata) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : s.failures) {
      failures.push_back({{"arguments", f.arguments},
                          {"instance", f.instance},
                          {"extension_dims", f.extension_dims}});
    }
    schemata.push_back({{"schema_id", s.schema_id},
                        {"instances_checked", s.instances_checked},
                        {"failures", failures},
                        {"rule_form_failures", s.rule_form_failures}});
  }
  return {{"seed", report.seed}, {"trials", report.trials}, {"schemata", schemata}};
}

// ---------------------------------------------------------------------------
// Counterexample searches

enum class CounterexampleKind { TertiumNonDatur, Distributivity, NonClosedDisjunction };

inline std::string to_string(CounterexampleKind k) {
  switch (k) {
    case CounterexampleKind::TertiumNonDatur:
      return "tertium_non_datur";
    case CounterexampleKind::Distributivity:
      return "distributivity";
    case CounterexampleKind::NonClosedDisjunction:
      return "non_closed_disjunction";
  }
  return {};
}

struct CounterexampleReport {
  CounterexampleKind kind;
  PropertyModel model;
  bool found = false;
  std::vector<std::string> properties;
  std::vector<Formula> formulas;
  std::vector<Vector> states;
  std::vector<std::pair<std::string, double>> residuals;
};

namespace detail {

// Registered rays, then the standard basis, then seeded random states.
inline std::vector<StateRef> candidate_states(const PropertyModel& m, std::uint64_t seed) {
  std::vector<StateRef> out;
  for (const auto& [name, v] : m.properties()) {
    if (v.dim() == 1) out.push_back(StateRef::normalized(v.basis().col(0)));
  }
  for (int i = 0; i < m.dim(); ++i) out.emplace_back(Vector::Unit(m.dim(), i));
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 10 * m.dim(); ++k) out.emplace_back(random_unit_vector(m.dim(), rng));
  return out;
}

}  // namespace detail

/// A property E and state s with both |-E(x) and N|-E(x) unjustified.
inline CounterexampleReport find_tertium_counterexample(const PropertyModel& m,
                                                        std::uint64_t seed = 0) {
  CounterexampleReport r{CounterexampleKind::TertiumNonDatur, m};
  const auto states = detail::candidate_states(m, seed);
  for (const auto& name : m.names()) {
    const Formula pos = elem(name);
    const Formula neg = N(pos);
    for (const auto& s : states) {
      if (evaluate(m, pos, s) == Justification::U && evaluate(m, neg, s) == Justification::U) {
        const Subspace& v = m.property(name);
        r.found = true;
        r.properties = {name};
        r.formulas = {pos, neg};
        r.states = {s.vector()};
        r.residuals = {{"distance_from_property", v.residual(s.vector())},
                       {"distance_from_complement", (v.projector() * s.vector()).norm()}};
        return r;
      }
    }
  }
  return r;
}

/// Elementary E, F with (|-E A |-F) not decidable, and a state in the closure
/// of the union that lies in neither set.
inline CounterexampleReport find_nonclosed_disjunction(const PropertyModel& m) {
  CounterexampleReport r{CounterexampleKind::NonClosedDisjunction, m};
  const Tolerance tol = m.tolerance();
  const auto names = m.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      const Subspace& v = m.property(names[i]);
      const Subspace& w = m.property(names[j]);
      const Formula disj = A(elem(names[i]), elem(names[j]));
      if (decide(m, disj).decidable) continue;
      // u in V \ W and x in W \ V give u + x outside both.
      std::optional<Vector> u, x;
      for (Eigen::Index c = 0; c < v.basis().cols() && !u; ++c) {
        if (w.residual(v.basis().col(c)) > tol.eps()) u = v.basis().col(c);
      }
      for (Eigen::Index c = 0; c < w.basis().cols() && !x; ++c) {
        if (v.residual(w.basis().col(c)) > tol.eps()) x = w.basis().col(c);
      }
      if (!u || !x) continue;
      const StateRef s = StateRef::normalized(*u + *x);
      const Formula qdisj = aq(elem(names[i]), elem(names[j]));
      r.found = true;
      r.properties = {names[i], names[j]};
      r.formulas = {disj, qdisj};
      r.states = {s.vector()};
      r.residuals = {{"distance_from_first", v.residual(s.vector())},
                     {"distance_from_second", w.residual(s.vector())},
                     {"distance_from_join", join(v, w, tol).residual(s.vector())}};
      return r;
    }
  }
  return r;
}

/// Registered E, F, G for which the distributivity control instance is not
/// p-valid, with a state outside the instance's extension.
inline CounterexampleReport find_distributivity_counterexample(const PropertyModel& m) {
  CounterexampleReport r{CounterexampleKind::Distributivity, m};
  const auto names = m.names();
  const AxiomSchema& control = distributivity_control();
  for (const auto& a : names) {
    for (const auto& b : names) {
      for (const auto& c : names) {
        const Formula f = instantiate(control, {elem(a), elem(b), elem(c)});
        const Extension ext = pragmatic_extension(m, f);
        if (is_full(ext)) continue;
        const Subspace outside = complement(closure(ext, m.tolerance()));
        const StateRef s = StateRef::normalized(outside.basis().col(0));
        r.found = true;
        r.properties = {a, b, c};
        r.formulas = {f};
        r.states = {s.vector()};
        r.residuals = {{"distance_from_extension", closure(ext, m.tolerance()).residual(s.vector())}};
        return r;
      }
    }
  }
  return r;
}

/// Re-runs the witness and reports whether the violation reproduces.
inline bool replay(const CounterexampleReport& r) {
  if (!r.found) return false;
  const PropertyModel& m = r.model;
  const StateRef s = StateRef::normalized(r.states.at(0));
  switch (r.kind) {
    case CounterexampleKind::TertiumNonDatur:
      return evaluate(m, r.formulas.at(0), s) == Justification::U &&
             evaluate(m, r.formulas.at(1), s) == Justification::U;
    case CounterexampleKind::NonClosedDisjunction:
      return !decide(m, r.formulas.at(0)).decidable &&
             evaluate(m, r.formulas.at(0), s) == Justification::U &&
             evaluate(m, r.formulas.at(1), s) == Justification::J;
    case CounterexampleKind::Distributivity:
      return !p_valid(m, r.formulas.at(0)) && evaluate(m, r.formulas.at(0), s) == Justification::U;
  }
  return false;
}

inline nlohmann::json counterexample_to_json(const CounterexampleReport& r) {
  nlohmann::json formulas = nlohmann::json::array();
  for (const auto& f : r.formulas) formulas.push_back(print(f));
  nlohmann::json states = nlohmann::json::array();
  for (const auto& v : r.states) states.push_back(vector_to_json(v));
  nlohmann::json residuals = nlohmann::json::object();
  for (const auto& [k, v] : r.residuals) residuals[k] = v;
  return {{"kind", to_string(r.kind)}, {"found", r.found},       {"properties", r.properties},
          {"formulas", formulas},      {"states", states},       {"residuals", residuals},
          {"model", model_to_json(r.model)}};
}

}  // namespace qpragma
